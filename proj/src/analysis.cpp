#include "cpslat/analysis.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "cpslat/limits.hpp"

namespace cpslat::analysis {

using fca::Bits;

namespace {

std::vector<cps::AttrKind> checked_kinds(const fca::FormalContext& ctx,
                                         const std::vector<cps::AttrKind>& kinds) {
    if (kinds.size() != ctx.attribute_count())
        throw InputError("attribute kind list has " + std::to_string(kinds.size()) +
                         " entries for " + std::to_string(ctx.attribute_count()) +
                         " attributes");
    return kinds;
}

// Attribute names the analysis works on: one layer's view, or everything
// except structural (inclusive) attributes.
std::vector<std::string> working_attributes(const fca::FormalContext& ctx,
                                            const std::vector<cps::AttrKind>& kinds,
                                            const std::optional<cps::Layer>& layer,
                                            bool include_inclusive) {
    if (layer) return cps::attributes_for_layer(ctx, kinds, *layer);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ctx.attribute_count(); ++i)
        if (include_inclusive || kinds[i] != cps::AttrKind::inclusive)
            out.push_back(ctx.attributes()[i]);
    return out;
}

// Inclusion-minimal covers of {0..universe-1} by the given item masks.
// Returns index sets sorted ascending; the list itself is unordered.
std::vector<std::vector<std::size_t>> minimal_cover_sets(const std::vector<Bits>& items,
                                                         std::size_t universe) {
    if (universe == 0) return {{}};

    std::vector<std::vector<std::size_t>> providers(universe);
    for (std::size_t i = 0; i < items.size(); ++i)
        for (auto p = items[i].find_first(); p != Bits::npos; p = items[i].find_next(p))
            providers[p].push_back(i);
    for (const auto& list : providers)
        if (list.empty()) return {};

    std::set<Bits> found;
    Bits chosen(items.size());
    Bits covered(universe);

    const std::function<void()> search = [&]() {
        if (covered.count() == universe) {
            found.insert(chosen);
            return;
        }
        std::size_t pick = Bits::npos;
        for (std::size_t p = 0; p < universe; ++p) {
            if (covered.test(p)) continue;
            if (pick == Bits::npos || providers[p].size() < providers[pick].size()) pick = p;
        }
        for (const std::size_t item : providers[pick]) {
            if (chosen.test(item)) continue;
            const Bits saved = covered;
            chosen.set(item);
            covered |= items[item];
            search();
            chosen.reset(item);
            covered = saved;
        }
    };
    search();

    std::vector<std::vector<std::size_t>> out;
    for (const Bits& cover : found) {
        const bool minimal = std::none_of(found.begin(), found.end(), [&](const Bits& other) {
            return other != cover && other.is_subset_of(cover);
        });
        if (!minimal) continue;
        std::vector<std::size_t> indices;
        for (auto i = cover.find_first(); i != Bits::npos; i = cover.find_next(i))
            indices.push_back(i);
        out.push_back(std::move(indices));
    }
    return out;
}

} // namespace

RedundancyReport redundancy_report(const fca::FormalContext& ctx,
                                   const std::vector<cps::AttrKind>& kinds,
                                   const RedundancyOptions& options) {
    const auto working =
        working_attributes(ctx, checked_kinds(ctx, kinds), options.layer,
                           options.include_inclusive);
    const fca::FormalContext view = fca::project_context(ctx, working);

    RedundancyReport report;
    std::vector<std::size_t> counts(view.attribute_count(), 0);
    for (std::size_t o = 0; o < view.object_count(); ++o)
        for (auto a = view.row(o).find_first(); a != Bits::npos; a = view.row(o).find_next(a))
            ++counts[a];
    for (std::size_t a = 0; a < view.attribute_count(); ++a) {
        report.multiplicity.emplace_back(view.attributes()[a], counts[a]);
        if (counts[a] == 1) report.gaps.push_back(view.attributes()[a]);
        if (counts[a] == 0) report.unavailable.push_back(view.attributes()[a]);
    }

    std::map<Bits, std::vector<std::string>> by_row;
    for (std::size_t o = 0; o < view.object_count(); ++o)
        by_row[view.row(o)].push_back(view.objects()[o]);
    for (auto& [row, members] : by_row) {
        if (members.size() < 2) continue;
        std::sort(members.begin(), members.end());
        report.duplicate_groups.push_back(std::move(members));
    }
    std::sort(report.duplicate_groups.begin(), report.duplicate_groups.end());
    return report;
}

RedundancyReport redundancy_report(const fca::FormalContext& ctx,
                                   const RedundancyOptions& options) {
    return redundancy_report(ctx, cps::infer_attribute_kinds(ctx), options);
}

std::vector<std::string> resiliency_gaps(const fca::FormalContext& ctx,
                                         const std::vector<cps::AttrKind>& kinds) {
    return redundancy_report(ctx, kinds).gaps;
}

std::vector<std::string> resiliency_gaps(const fca::FormalContext& ctx) {
    return resiliency_gaps(ctx, cps::infer_attribute_kinds(ctx));
}

std::vector<std::string> removal_impact(const fca::FormalContext& ctx,
                                        const std::vector<cps::AttrKind>& kinds,
                                        std::span<const std::string> removed) {
    checked_kinds(ctx, kinds);
    const Bits removed_bits = ctx.object_bits(removed);

    std::vector<std::string> lost;
    for (std::size_t a = 0; a < ctx.attribute_count(); ++a) {
        if (kinds[a] == cps::AttrKind::inclusive) continue;
        bool before = false;
        bool after = false;
        for (std::size_t o = 0; o < ctx.object_count(); ++o) {
            if (!ctx.incidence(o, a)) continue;
            before = true;
            if (!removed_bits.test(o)) after = true;
        }
        if (before && !after) lost.push_back(ctx.attributes()[a]);
    }
    return lost;
}

std::vector<std::string> removal_impact(const fca::FormalContext& ctx,
                                        std::span<const std::string> removed) {
    return removal_impact(ctx, cps::infer_attribute_kinds(ctx), removed);
}

QueryResult satisfy_query(const fca::FormalContext& ctx,
                          const std::vector<cps::AttrKind>& kinds,
                          std::span<const std::string> requested,
                          const QueryOptions& options) {
    checked_kinds(ctx, kinds);
    const std::size_t guard = limits::max_objects();
    if (ctx.object_count() > guard)
        throw CapacityError("exact cover enumeration is guarded at " + std::to_string(guard) +
                            " objects (context has " + std::to_string(ctx.object_count()) +
                            ")");

    QueryResult result;
    Bits wanted(ctx.attribute_count());
    for (const auto& id : requested) {
        const std::size_t a = ctx.attribute_index(id);
        if (!options.include_inclusive && kinds[a] == cps::AttrKind::inclusive)
            throw InputError("inclusive attribute '" + id +
                             "' cannot be requested as a function");
        wanted.set(a);
    }
    result.requested = ctx.attribute_ids(wanted);

    // Re-index the requested attributes as the cover universe.
    std::vector<std::size_t> positions;
    for (auto a = wanted.find_first(); a != Bits::npos; a = wanted.find_next(a))
        positions.push_back(a);
    std::vector<Bits> items;
    items.reserve(ctx.object_count());
    for (std::size_t o = 0; o < ctx.object_count(); ++o) {
        Bits mask(positions.size());
        for (std::size_t p = 0; p < positions.size(); ++p)
            if (ctx.incidence(o, positions[p])) mask.set(p);
        items.push_back(std::move(mask));
    }

    for (const auto& indices : minimal_cover_sets(items, positions.size())) {
        std::vector<std::string> cover;
        for (const std::size_t o : indices) cover.push_back(ctx.objects()[o]);
        std::sort(cover.begin(), cover.end());
        result.minimal_covers.push_back(std::move(cover));
    }
    std::sort(result.minimal_covers.begin(), result.minimal_covers.end(),
              [](const auto& a, const auto& b) {
                  if (a.size() != b.size()) return a.size() < b.size();
                  return a < b;
              });
    result.satisfiable = !result.minimal_covers.empty();
    return result;
}

QueryResult satisfy_query(const fca::FormalContext& ctx,
                          std::span<const std::string> requested,
                          const QueryOptions& options) {
    return satisfy_query(ctx, cps::infer_attribute_kinds(ctx), requested, options);
}

std::vector<ConceptCombination>
concept_combinations(const fca::ConceptLattice& lattice,
                     std::span<const std::string> requested) {
    const auto& all_attributes = lattice.concepts[lattice.infimum_index].intent;
    std::set<std::string> wanted;
    for (const auto& id : requested) {
        if (!std::binary_search(all_attributes.begin(), all_attributes.end(), id))
            throw InputError("unknown attribute identifier '" + id + "'");
        wanted.insert(id);
    }

    const std::size_t guard = limits::max_objects();
    const std::size_t object_count = lattice.concepts[lattice.supremum_index].extent.size();
    if (object_count > guard)
        throw CapacityError("combination enumeration is guarded at " + std::to_string(guard) +
                            " objects (lattice covers " + std::to_string(object_count) + ")");

    const std::vector<std::string> universe(wanted.begin(), wanted.end());
    std::vector<Bits> items;
    std::vector<std::size_t> concept_of; // item index -> concept index
    for (std::size_t c = 0; c < lattice.concepts.size(); ++c) {
        if (c == lattice.infimum_index) continue;
        Bits mask(universe.size());
        for (std::size_t p = 0; p < universe.size(); ++p)
            if (std::binary_search(lattice.concepts[c].intent.begin(),
                                   lattice.concepts[c].intent.end(), universe[p]))
                mask.set(p);
        items.push_back(std::move(mask));
        concept_of.push_back(c);
    }

    std::vector<ConceptCombination> out;
    for (const auto& indices : minimal_cover_sets(items, universe.size())) {
        ConceptCombination combo;
        std::set<std::string> extent_union;
        for (const std::size_t item : indices) {
            const std::size_t c = concept_of[item];
            combo.concepts.push_back(c);
            extent_union.insert(lattice.concepts[c].extent.begin(),
                                lattice.concepts[c].extent.end());
        }
        std::sort(combo.concepts.begin(), combo.concepts.end());
        combo.extent_union.assign(extent_union.begin(), extent_union.end());
        out.push_back(std::move(combo));
    }
    std::sort(out.begin(), out.end(), [](const ConceptCombination& a, const ConceptCombination& b) {
        if (a.concepts.size() != b.concepts.size()) return a.concepts.size() < b.concepts.size();
        return a.concepts < b.concepts;
    });
    return out;
}

FunctionGraph make_function_graph(std::vector<FunctionGraph::Node> nodes,
                                  std::vector<std::pair<std::string, std::string>> edges) {
    FunctionGraph graph;
    std::set<std::string> ids;
    for (auto& node : nodes) {
        if (node.id.empty()) throw InputError("empty graph node identifier");
        if (!ids.insert(node.id).second)
            throw InputError("duplicate graph node '" + node.id + "'");
        std::sort(node.provides.begin(), node.provides.end());
        node.provides.erase(std::unique(node.provides.begin(), node.provides.end()),
                            node.provides.end());
    }
    for (const auto& [from, to] : edges) {
        if (!ids.contains(from))
            throw InputError("edge references undeclared node '" + from + "'");
        if (!ids.contains(to))
            throw InputError("edge references undeclared node '" + to + "'");
        if (from == to)
            throw InputError("self-loop on node '" + from + "' is not allowed");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    graph.nodes = std::move(nodes);
    graph.edges = std::move(edges);
    return graph;
}

FunctionGraph make_query_graph(std::span<const std::string> functions,
                               std::vector<std::pair<std::string, std::string>> edges) {
    std::set<std::string> unique(functions.begin(), functions.end());
    std::vector<FunctionGraph::Node> nodes;
    for (const auto& fn : unique) nodes.push_back({fn, {fn}});
    return make_function_graph(std::move(nodes), std::move(edges));
}

IsomorphismResult query_isomorphism_check(const FunctionGraph& candidate,
                                          const FunctionGraph& query) {
    if (candidate.nodes.size() > limits::max_graph_nodes ||
        query.nodes.size() > limits::max_graph_nodes)
        throw CapacityError("isomorphism check is guarded at " +
                            std::to_string(limits::max_graph_nodes) + " nodes");
    if (candidate.nodes.size() != query.nodes.size()) return {};

    const std::size_t n = query.nodes.size();
    const auto index_of = [](const FunctionGraph& g) {
        std::map<std::string, std::size_t> out;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) out.emplace(g.nodes[i].id, i);
        return out;
    };
    const auto adjacency = [&](const FunctionGraph& g,
                               const std::map<std::string, std::size_t>& index) {
        std::vector<Bits> adj(g.nodes.size(), Bits(g.nodes.size()));
        for (const auto& [from, to] : g.edges) adj[index.at(from)].set(index.at(to));
        return adj;
    };
    const auto query_index = index_of(query);
    const auto candidate_index = index_of(candidate);
    const auto query_adj = adjacency(query, query_index);
    const auto candidate_adj = adjacency(candidate, candidate_index);

    // A query node may map only to candidate nodes providing its functions.
    std::vector<Bits> compatible(n, Bits(n));
    for (std::size_t q = 0; q < n; ++q)
        for (std::size_t c = 0; c < n; ++c) {
            const auto& have = candidate.nodes[c].provides;
            const bool ok = std::all_of(
                query.nodes[q].provides.begin(), query.nodes[q].provides.end(),
                [&](const std::string& fn) {
                    return std::binary_search(have.begin(), have.end(), fn);
                });
            if (ok) compatible[q].set(c);
        }

    std::vector<std::size_t> mapping(n, 0);
    Bits used(n);
    const std::function<bool(std::size_t)> extend = [&](std::size_t q) {
        if (q == n) return true;
        for (std::size_t c = 0; c < n; ++c) {
            if (used.test(c) || !compatible[q].test(c)) continue;
            bool consistent = true;
            for (std::size_t j = 0; j < q && consistent; ++j)
                consistent = query_adj[q].test(j) == candidate_adj[c].test(mapping[j]) &&
                             query_adj[j].test(q) == candidate_adj[mapping[j]].test(c);
            if (!consistent) continue;
            mapping[q] = c;
            used.set(c);
            if (extend(q + 1)) return true;
            used.reset(c);
        }
        return false;
    };

    IsomorphismResult result;
    if (!extend(0)) return result;
    result.isomorphic = true;
    for (std::size_t q = 0; q < n; ++q)
        result.witness.emplace_back(query.nodes[q].id, candidate.nodes[mapping[q]].id);
    return result;
}

} // namespace cpslat::analysis
