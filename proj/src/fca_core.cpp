#include "cpslat/fca_core.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <set>

#include "cpslat/limits.hpp"

namespace cpslat::limits {

std::size_t max_objects() {
    const char* raw = std::getenv("CPS_LATTICE_MAX_OBJECTS");
    if (raw == nullptr || *raw == '\0') return default_max_objects;
    char* end = nullptr;
    const unsigned long value = std::strtoul(raw, &end, 10);
    if (end == nullptr || *end != '\0' || value == 0)
        throw InputError("invalid CPS_LATTICE_MAX_OBJECTS value '" + std::string(raw) + "'");
    return static_cast<std::size_t>(value);
}

} // namespace cpslat::limits

namespace cpslat::fca {

namespace {

std::map<std::string, std::size_t, std::less<>>
index_ids(const std::vector<std::string>& ids, const char* what) {
    std::map<std::string, std::size_t, std::less<>> index;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i].empty())
            throw InputError(std::string("empty ") + what + " identifier at position " +
                             std::to_string(i));
        if (!index.emplace(ids[i], i).second)
            throw InputError(std::string("duplicate ") + what + " identifier '" + ids[i] + "'");
    }
    return index;
}

} // namespace

FormalContext::FormalContext(std::vector<std::string> objects,
                             std::vector<std::string> attributes,
                             std::vector<Bits> incidence)
    : objects_(std::move(objects)),
      attributes_(std::move(attributes)),
      rows_(std::move(incidence)) {
    object_index_ = index_ids(objects_, "object");
    attribute_index_ = index_ids(attributes_, "attribute");
    if (rows_.size() != objects_.size())
        throw InputError("incidence has " + std::to_string(rows_.size()) +
                         " rows, expected " + std::to_string(objects_.size()));
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (rows_[i].size() != attributes_.size())
            throw InputError("incidence row for '" + objects_[i] + "' has " +
                             std::to_string(rows_[i].size()) + " columns, expected " +
                             std::to_string(attributes_.size()));
}

std::size_t FormalContext::object_index(std::string_view id) const {
    const auto it = object_index_.find(id);
    if (it == object_index_.end())
        throw InputError("unknown object identifier '" + std::string(id) + "'");
    return it->second;
}

std::size_t FormalContext::attribute_index(std::string_view id) const {
    const auto it = attribute_index_.find(id);
    if (it == attribute_index_.end())
        throw InputError("unknown attribute identifier '" + std::string(id) + "'");
    return it->second;
}

bool FormalContext::has_object(std::string_view id) const {
    return object_index_.find(id) != object_index_.end();
}

bool FormalContext::has_attribute(std::string_view id) const {
    return attribute_index_.find(id) != attribute_index_.end();
}

Bits FormalContext::object_bits(std::span<const std::string> ids) const {
    Bits bits(object_count());
    for (const auto& id : ids) bits.set(object_index(id));
    return bits;
}

Bits FormalContext::attribute_bits(std::span<const std::string> ids) const {
    Bits bits(attribute_count());
    for (const auto& id : ids) bits.set(attribute_index(id));
    return bits;
}

std::vector<std::string> FormalContext::object_ids(const Bits& bits) const {
    std::vector<std::string> out;
    out.reserve(bits.count());
    for (auto i = bits.find_first(); i != Bits::npos; i = bits.find_next(i))
        out.push_back(objects_[i]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> FormalContext::attribute_ids(const Bits& bits) const {
    std::vector<std::string> out;
    out.reserve(bits.count());
    for (auto i = bits.find_first(); i != Bits::npos; i = bits.find_next(i))
        out.push_back(attributes_[i]);
    std::sort(out.begin(), out.end());
    return out;
}

Bits FormalContext::derive_intent_bits(const Bits& objects) const {
    Bits common(attribute_count());
    common.set();
    for (auto i = objects.find_first(); i != Bits::npos; i = objects.find_next(i))
        common &= rows_[i];
    return common;
}

Bits FormalContext::derive_extent_bits(const Bits& attributes) const {
    Bits holders(object_count());
    for (std::size_t o = 0; o < rows_.size(); ++o)
        if (attributes.is_subset_of(rows_[o])) holders.set(o);
    return holders;
}

Bits FormalContext::closure_attrs_bits(const Bits& attributes) const {
    return derive_intent_bits(derive_extent_bits(attributes));
}

Bits FormalContext::closure_objects_bits(const Bits& objects) const {
    return derive_extent_bits(derive_intent_bits(objects));
}

bool canonical_less(const FormalConcept& a, const FormalConcept& b) {
    if (a.extent.size() != b.extent.size()) return a.extent.size() > b.extent.size();
    if (a.extent != b.extent) return a.extent < b.extent;
    return a.intent < b.intent;
}

std::vector<std::string> derive_intent(const FormalContext& ctx,
                                       std::span<const std::string> objs) {
    return ctx.attribute_ids(ctx.derive_intent_bits(ctx.object_bits(objs)));
}

std::vector<std::string> derive_extent(const FormalContext& ctx,
                                       std::span<const std::string> attrs) {
    return ctx.object_ids(ctx.derive_extent_bits(ctx.attribute_bits(attrs)));
}

std::vector<std::string> closure_attrs(const FormalContext& ctx,
                                       std::span<const std::string> attrs) {
    return ctx.attribute_ids(ctx.closure_attrs_bits(ctx.attribute_bits(attrs)));
}

std::vector<FormalConcept> enumerate_concepts_bruteforce(const FormalContext& ctx) {
    const std::size_t guard = limits::max_objects();
    if (ctx.object_count() > guard || ctx.attribute_count() > guard)
        throw CapacityError("context exceeds the " + std::to_string(guard) + "x" +
                            std::to_string(guard) +
                            " brute-force guard; use build_lattice instead");

    const bool over_attributes = ctx.attribute_count() <= ctx.object_count();
    const std::size_t n = over_attributes ? ctx.attribute_count() : ctx.object_count();

    std::map<Bits, Bits> concepts; // extent -> intent
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        Bits subset(n, mask);
        Bits extent, intent;
        if (over_attributes) {
            extent = ctx.derive_extent_bits(subset);
            intent = ctx.derive_intent_bits(extent);
        } else {
            intent = ctx.derive_intent_bits(subset);
            extent = ctx.derive_extent_bits(intent);
        }
        concepts.emplace(std::move(extent), std::move(intent));
    }

    std::vector<FormalConcept> out;
    out.reserve(concepts.size());
    for (const auto& [extent, intent] : concepts)
        out.push_back({ctx.object_ids(extent), ctx.attribute_ids(intent)});
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

namespace {

// Upper covers of the concept with extent X (Lindig's neighbour generation).
std::vector<Bits> upper_neighbours(const FormalContext& ctx, const Bits& extent) {
    Bits min = ~extent;
    std::vector<Bits> out;
    for (std::size_t g = 0; g < ctx.object_count(); ++g) {
        if (extent.test(g)) continue;
        Bits with_g = extent;
        with_g.set(g);
        Bits closed = ctx.closure_objects_bits(with_g);
        Bits extra = closed - with_g;
        if (!extra.intersects(min))
            out.push_back(std::move(closed));
        else
            min.reset(g);
    }
    return out;
}

} // namespace

ConceptLattice build_lattice(const FormalContext& ctx) {
    Bits all_attrs(ctx.attribute_count());
    all_attrs.set();
    const Bits bottom = ctx.derive_extent_bits(all_attrs);

    std::map<Bits, std::size_t> id_of;
    std::vector<Bits> extents;
    std::vector<Bits> intents;
    std::deque<std::size_t> work;

    const auto intern = [&](const Bits& extent) {
        const auto [it, inserted] = id_of.emplace(extent, extents.size());
        if (inserted) {
            extents.push_back(extent);
            intents.push_back(ctx.derive_intent_bits(extent));
            work.push_back(it->second);
        }
        return it->second;
    };

    std::set<std::pair<std::size_t, std::size_t>> edges; // (child, parent)
    intern(bottom);
    while (!work.empty()) {
        const std::size_t child = work.front();
        work.pop_front();
        const Bits extent = extents[child]; // copy: extents may reallocate
        for (const Bits& up : upper_neighbours(ctx, extent))
            edges.emplace(child, intern(up));
    }

    // Canonical renumbering.
    ConceptLattice lattice;
    lattice.concepts.reserve(extents.size());
    for (std::size_t i = 0; i < extents.size(); ++i)
        lattice.concepts.push_back({ctx.object_ids(extents[i]), ctx.attribute_ids(intents[i])});

    std::vector<std::size_t> order(extents.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return canonical_less(lattice.concepts[a], lattice.concepts[b]);
    });
    std::vector<std::size_t> rank(order.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) rank[order[pos]] = pos;

    std::vector<FormalConcept> sorted_concepts(order.size());
    lattice.extent_bits.resize(order.size());
    lattice.intent_bits.resize(order.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        sorted_concepts[pos] = std::move(lattice.concepts[order[pos]]);
        lattice.extent_bits[pos] = std::move(extents[order[pos]]);
        lattice.intent_bits[pos] = std::move(intents[order[pos]]);
    }
    lattice.concepts = std::move(sorted_concepts);

    lattice.cover_edges.reserve(edges.size());
    for (const auto& [child, parent] : edges)
        lattice.cover_edges.emplace_back(rank[child], rank[parent]);
    std::sort(lattice.cover_edges.begin(), lattice.cover_edges.end());

    for (std::size_t i = 0; i < lattice.extent_bits.size(); ++i) {
        if (lattice.extent_bits[i].count() == ctx.object_count()) lattice.supremum_index = i;
        if (lattice.intent_bits[i].count() == ctx.attribute_count()) lattice.infimum_index = i;
    }
    return lattice;
}

FormalContext project_context(const FormalContext& ctx,
                              std::span<const std::string> attrs) {
    const Bits wanted = ctx.attribute_bits(attrs);
    std::vector<std::string> names;
    std::vector<std::size_t> keep;
    for (std::size_t a = 0; a < ctx.attribute_count(); ++a) {
        if (!wanted.test(a)) continue;
        keep.push_back(a);
        names.push_back(ctx.attributes()[a]);
    }
    std::vector<Bits> rows;
    rows.reserve(ctx.object_count());
    for (std::size_t o = 0; o < ctx.object_count(); ++o) {
        Bits row(keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i)
            if (ctx.incidence(o, keep[i])) row.set(i);
        rows.push_back(std::move(row));
    }
    return FormalContext(ctx.objects(), std::move(names), std::move(rows));
}

} // namespace cpslat::fca
