#include "cpslat/cps_model.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <set>

namespace cpslat::cps {

namespace {

constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);

template <typename T>
const T* find_by_id(const std::vector<T>& items, std::string_view id) {
    for (const auto& item : items)
        if (item.id == id) return &item;
    return nullptr;
}

std::string core_object_id(const CompositeCps& composite) {
    return composite.id + ".core";
}

// Declared logical members plus entailed physical parts, declaration order,
// deduplicated.
std::vector<std::string> effective_members(const CompositeCps& composite) {
    std::vector<std::string> members = composite.logical_members;
    for (const auto& part : composite.physical_parts)
        if (std::find(members.begin(), members.end(), part) == members.end())
            members.push_back(part);
    return members;
}

// One equivalence class as seen by the compiler: declared classes come from
// the expert table, singletons are auto-created per undeclared raw function.
struct ClassEntry {
    std::string canonical;
    bool declared = false;
    std::size_t decl_index = 0;
    std::size_t appearance = kUnseen; // first-offer sequence number
    bool offered_physical = false;
    bool offered_cyber = false;
    std::vector<std::string> members;
};

struct ClassTable {
    std::vector<ClassEntry> entries;
    std::map<std::string, std::size_t, std::less<>> by_raw;
    std::map<std::string, std::size_t, std::less<>> by_canonical;
};

AttrKind kind_of(const ClassEntry& entry) {
    if (entry.offered_physical && entry.offered_cyber) return AttrKind::mixed;
    if (entry.offered_physical) return AttrKind::physical;
    if (entry.offered_cyber) return AttrKind::cyber;
    return AttrKind::plain;
}

// Conflicting declarations resolve first-wins here; validate_model reports
// them as errors, so compilation never runs on a conflicted table.
ClassTable build_class_table(const CpsModel& model, const FunctionEquivalence& equivalence) {
    ClassTable table;
    for (std::size_t i = 0; i < equivalence.classes.size(); ++i) {
        const auto& cls = equivalence.classes[i];
        if (table.by_canonical.contains(cls.canonical)) continue;
        ClassEntry entry;
        entry.canonical = cls.canonical;
        entry.declared = true;
        entry.decl_index = i;
        for (const auto& raw : cls.members) {
            if (table.by_raw.contains(raw)) continue;
            table.by_raw.emplace(raw, table.entries.size());
            entry.members.push_back(raw);
        }
        table.by_canonical.emplace(entry.canonical, table.entries.size());
        table.entries.push_back(std::move(entry));
    }

    std::size_t appearance_seq = 0;
    for (const auto& component : model.components) {
        for (const auto& raw : component.offered_functions) {
            auto it = table.by_raw.find(raw);
            if (it == table.by_raw.end()) {
                const auto canonical_it = table.by_canonical.find(raw);
                if (canonical_it != table.by_canonical.end()) {
                    // Collides with a declared canonical id; map onto that
                    // class to stay total (flagged as EQ_CANONICAL_CLASH).
                    it = table.by_raw.emplace(raw, canonical_it->second).first;
                } else {
                    ClassEntry singleton;
                    singleton.canonical = raw;
                    singleton.members.push_back(raw);
                    it = table.by_raw.emplace(raw, table.entries.size()).first;
                    table.by_canonical.emplace(raw, table.entries.size());
                    table.entries.push_back(std::move(singleton));
                }
            }
            ClassEntry& entry = table.entries[it->second];
            if (entry.appearance == kUnseen) entry.appearance = appearance_seq++;
            if (component.layer == Layer::physical)
                entry.offered_physical = true;
            else
                entry.offered_cyber = true;
        }
    }
    return table;
}

void add_profile(FunctionProfile& profile, const CpsModel& model, const ClassTable& table,
                 const std::vector<std::string>& component_ids) {
    for (const auto& component_id : component_ids) {
        const Component* component = model.find_component(component_id);
        if (component == nullptr) continue; // validation reports UNKNOWN_REF
        for (const auto& raw : component->offered_functions) {
            const auto it = table.by_raw.find(raw);
            if (it == table.by_raw.end()) continue;
            const auto& canonical = table.entries[it->second].canonical;
            auto& side = component->layer == Layer::physical ? profile.physical : profile.cyber;
            side.push_back(canonical);
        }
    }
    for (auto* side : {&profile.physical, &profile.cyber}) {
        std::sort(side->begin(), side->end());
        side->erase(std::unique(side->begin(), side->end()), side->end());
    }
}

} // namespace

const Component* CpsModel::find_component(std::string_view id) const {
    return find_by_id(components, id);
}

const AtomicCps* CpsModel::find_atomic(std::string_view id) const {
    return find_by_id(atomics, id);
}

const CompositeCps* CpsModel::find_composite(std::string_view id) const {
    return find_by_id(composites, id);
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::error; });
}

namespace {

std::string validation_summary(const std::vector<Diagnostic>& diagnostics) {
    std::size_t errors = 0;
    const Diagnostic* first = nullptr;
    for (const auto& d : diagnostics) {
        if (d.severity != Severity::error) continue;
        if (first == nullptr) first = &d;
        ++errors;
    }
    std::string msg = "model validation failed: " + std::to_string(errors) + " error(s)";
    if (first != nullptr) msg += "; first: " + first->code + " (" + first->subject + ")";
    return msg;
}

} // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : InputError(validation_summary(diagnostics)), diagnostics_(std::move(diagnostics)) {}

namespace {

class Validator {
public:
    Validator(const CpsModel& model, const FunctionEquivalence& equivalence)
        : model_(model), equivalence_(equivalence) {}

    std::vector<Diagnostic> run() {
        check_components();
        check_atomics();
        check_composites();
        check_links();
        check_cycles();
        check_equivalence();
        check_orphans();
        return std::move(diagnostics_);
    }

private:
    void emit(std::string code, Severity severity, std::string subject, std::string message) {
        diagnostics_.push_back(
            {std::move(code), severity, std::move(subject), std::move(message)});
    }

    bool reserved(std::string_view id) const {
        return id == model_.environment.physical_id || id == model_.environment.cyber_id;
    }

    void check_components() {
        for (const auto& component : model_.components) {
            if (reserved(component.id))
                emit("RESERVED_ID", Severity::error, component.id,
                     "environment identifier used as a component id");
            if (!component_ids_.insert(component.id).second)
                emit("DUP_ID", Severity::error, component.id, "duplicate component id");
            if (component.inputs.empty())
                emit("PORT_MISSING", Severity::error, component.id,
                     "component declares no input ports");
            if (component.outputs.empty())
                emit("PORT_MISSING", Severity::error, component.id,
                     "component declares no output ports");
            if (component.offered_functions.empty())
                emit("FUNCTION_MISSING", Severity::error, component.id,
                     "component offers no functions");
            if (component.layer == Layer::physical && !component.physical_kind)
                emit("KIND_MISSING", Severity::error, component.id,
                     "physical component without physical_kind");
            if (component.layer == Layer::cyber && component.physical_kind)
                emit("KIND_FORBIDDEN", Severity::error, component.id,
                     "cyber component with physical_kind");
        }
    }

    void register_cps_id(const std::string& id) {
        if (reserved(id))
            emit("RESERVED_ID", Severity::error, id,
                 "environment identifier used as a CPS id");
        if (!cps_ids_.insert(id).second)
            emit("DUP_ID", Severity::error, id, "duplicate CPS id");
    }

    void claim_component(const std::string& component_id, const std::string& owner) {
        const auto [it, inserted] = component_owner_.emplace(component_id, owner);
        if (!inserted)
            emit("COMPONENT_SHARED", Severity::error, component_id,
                 "component claimed by both '" + it->second + "' and '" + owner + "'");
    }

    void check_atomics() {
        for (const auto& atomic : model_.atomics) {
            register_cps_id(atomic.id);
            bool physical = false;
            bool cyber = false;
            for (const auto& component_id : atomic.components) {
                const Component* component = model_.find_component(component_id);
                if (component == nullptr) {
                    emit("UNKNOWN_REF", Severity::error, atomic.id,
                         "atomic references unknown component '" + component_id + "'");
                    continue;
                }
                claim_component(component_id, atomic.id);
                (component->layer == Layer::physical ? physical : cyber) = true;
            }
            if (!physical)
                emit("PHYSICAL_MISSING", Severity::error, atomic.id,
                     "atomic CPS has no physical component");
            if (!cyber)
                emit("CYBER_MISSING", Severity::error, atomic.id,
                     "atomic CPS has no cyber component");
        }
    }

    void check_composites() {
        for (const auto& composite : model_.composites) {
            register_cps_id(composite.id);
            if (!composite.own_components.empty() &&
                cps_ids_.contains(core_object_id(composite)))
                emit("DUP_ID", Severity::error, core_object_id(composite),
                     "synthesized core object collides with a declared CPS id");

            std::vector<std::string> entailed;
            for (const auto& part : composite.physical_parts)
                if (std::find(composite.logical_members.begin(), composite.logical_members.end(),
                              part) == composite.logical_members.end())
                    entailed.push_back(part);
            if (!entailed.empty()) {
                std::string list;
                for (const auto& id : entailed) list += (list.empty() ? "" : ", ") + id;
                emit("PART_ENTAILED", Severity::info, composite.id,
                     "physical parts counted as logical members: " + list);
            }

            const auto members = effective_members(composite);
            if (members.empty())
                emit("MEMBERS_EMPTY", Severity::error, composite.id,
                     "composite has no logical members");
            for (const auto& member : members)
                if (model_.find_atomic(member) == nullptr &&
                    model_.find_composite(member) == nullptr)
                    emit("UNKNOWN_REF", Severity::error, composite.id,
                         "composite references unknown CPS '" + member + "'");
            for (const auto& component_id : composite.own_components) {
                if (model_.find_component(component_id) == nullptr) {
                    emit("UNKNOWN_REF", Severity::error, composite.id,
                         "composite references unknown component '" + component_id + "'");
                    continue;
                }
                claim_component(component_id, composite.id);
            }
        }
    }

    void check_link_endpoint(const std::string& id, Layer layer, const char* relation) {
        const std::string& environment_id = layer == Layer::physical
                                                ? model_.environment.physical_id
                                                : model_.environment.cyber_id;
        if (id == environment_id) return;
        if (reserved(id)) {
            emit("LINK_LAYER", Severity::error, id,
                 std::string("wrong environment element in ") + relation + " link");
            return;
        }
        const Component* component = model_.find_component(id);
        if (component == nullptr) {
            emit("LINK_UNKNOWN", Severity::error, id,
                 std::string(relation) + " link endpoint is not a component");
            return;
        }
        if (component->layer != layer)
            emit("LINK_LAYER", Severity::error, id,
                 std::string(to_string(component->layer)) + " component in a " + relation +
                     " link");
    }

    void check_links() {
        for (const auto& [from, to] : model_.physical_links) {
            check_link_endpoint(from, Layer::physical, "physical");
            check_link_endpoint(to, Layer::physical, "physical");
        }
        for (const auto& [from, to] : model_.cyber_links) {
            check_link_endpoint(from, Layer::cyber, "cyber");
            check_link_endpoint(to, Layer::cyber, "cyber");
        }
    }

    void check_cycles() {
        // Composition edges only leave composites; colors: 0 new, 1 open, 2 done.
        std::map<std::string, int> color;
        std::function<bool(const CompositeCps&)> visit = [&](const CompositeCps& composite) {
            int& c = color[composite.id];
            if (c == 1) return true;
            if (c == 2) return false;
            c = 1;
            bool cyclic = false;
            for (const auto& member : effective_members(composite)) {
                const CompositeCps* child = model_.find_composite(member);
                if (child != nullptr && visit(*child)) cyclic = true;
            }
            c = 2;
            return cyclic;
        };
        for (const auto& composite : model_.composites)
            if (color[composite.id] == 0 && visit(composite))
                emit("CYCLE", Severity::error, composite.id,
                     "composition hierarchy contains a cycle through this composite");
    }

    void check_equivalence() {
        std::set<std::string> canonicals;
        std::map<std::string, std::string> raw_class; // raw -> canonical
        for (const auto& cls : equivalence_.classes) {
            if (!canonicals.insert(cls.canonical).second)
                emit("EQ_CANONICAL_CLASH", Severity::error, cls.canonical,
                     "two equivalence classes share this canonical id");
            for (const auto& raw : cls.members) {
                const auto [it, inserted] = raw_class.emplace(raw, cls.canonical);
                if (!inserted && it->second != cls.canonical)
                    emit("EQ_OVERLAP", Severity::error, raw,
                         "raw function declared in classes '" + it->second + "' and '" +
                             cls.canonical + "'");
            }
        }

        std::set<std::string> offered;
        for (const auto& component : model_.components)
            offered.insert(component.offered_functions.begin(),
                           component.offered_functions.end());
        for (const auto& cls : equivalence_.classes)
            for (const auto& raw : cls.members)
                if (!offered.contains(raw))
                    emit("EQ_UNUSED_MEMBER", Severity::warning, raw,
                         "class '" + cls.canonical + "' member offered by no component");
        for (const auto& raw : offered)
            if (!raw_class.contains(raw) && canonicals.contains(raw))
                emit("EQ_CANONICAL_CLASH", Severity::error, raw,
                     "offered function collides with a declared canonical id");

        const ClassTable table = build_class_table(model_, equivalence_);
        for (const auto& entry : table.entries)
            if (entry.offered_physical && entry.offered_cyber)
                emit("LAYER_MIXED", Severity::info, entry.canonical,
                     "class offered by both physical and cyber components");
    }

    void check_orphans() {
        for (const auto& component : model_.components)
            if (component_ids_.contains(component.id) &&
                !component_owner_.contains(component.id))
                emit("ORPHAN_COMPONENT", Severity::warning, component.id,
                     "component not used by any atomic or composite");
    }

    const CpsModel& model_;
    const FunctionEquivalence& equivalence_;
    std::vector<Diagnostic> diagnostics_;
    std::set<std::string> component_ids_;
    std::set<std::string> cps_ids_;
    std::map<std::string, std::string> component_owner_;
};

} // namespace

std::vector<Diagnostic> validate_model(const CpsModel& model) {
    return validate_model(model, FunctionEquivalence{});
}

std::vector<Diagnostic> validate_model(const CpsModel& model,
                                       const FunctionEquivalence& equivalence) {
    return Validator(model, equivalence).run();
}

std::map<std::string, FunctionProfile>
atomic_function_profile(const CpsModel& model, const FunctionEquivalence& equivalence) {
    const ClassTable table = build_class_table(model, equivalence);
    std::map<std::string, FunctionProfile> profiles;
    for (const auto& atomic : model.atomics)
        add_profile(profiles[atomic.id], model, table, atomic.components);
    for (const auto& composite : model.composites)
        if (!composite.own_components.empty())
            add_profile(profiles[core_object_id(composite)], model, table,
                        composite.own_components);
    return profiles;
}

std::map<std::string, std::vector<std::string>>
inclusive_attributes(const CpsModel& model) {
    std::map<std::string, std::set<std::string>> memo;
    std::set<std::string> open;

    std::function<const std::set<std::string>&(const CompositeCps&)> collect =
        [&](const CompositeCps& composite) -> const std::set<std::string>& {
        const auto done = memo.find(composite.id);
        if (done != memo.end()) return done->second;
        if (!open.insert(composite.id).second)
            throw InputError("composition cycle involving '" + composite.id + "'");
        std::set<std::string> members;
        for (const auto& member : effective_members(composite)) {
            if (model.find_atomic(member) != nullptr) {
                members.insert(member);
            } else if (const CompositeCps* child = model.find_composite(member)) {
                const auto& nested = collect(*child);
                members.insert(nested.begin(), nested.end());
            }
        }
        if (!composite.own_components.empty()) members.insert(core_object_id(composite));
        open.erase(composite.id);
        return memo.emplace(composite.id, std::move(members)).first->second;
    };

    std::map<std::string, std::vector<std::string>> out;
    for (const auto& composite : model.composites) {
        const auto& members = collect(composite);
        out.emplace(composite.id, std::vector<std::string>(members.begin(), members.end()));
    }
    return out;
}

CompiledContext build_formal_context(const CpsModel& model,
                                     const FunctionEquivalence& equivalence,
                                     bool include_inclusive) {
    auto diagnostics = validate_model(model, equivalence);
    if (has_errors(diagnostics)) throw ValidationError(std::move(diagnostics));

    const ClassTable table = build_class_table(model, equivalence);
    const auto profiles = atomic_function_profile(model, equivalence);

    // Physical-side classes first, then cyber ones; declared classes keep
    // their declaration order and precede auto-singletons.
    std::vector<std::size_t> order;
    const auto append_group = [&](bool cyber_group) {
        std::vector<std::size_t> declared;
        std::vector<std::size_t> autos;
        for (std::size_t i = 0; i < table.entries.size(); ++i) {
            const bool is_cyber = kind_of(table.entries[i]) == AttrKind::cyber;
            if (is_cyber != cyber_group) continue;
            (table.entries[i].declared ? declared : autos).push_back(i);
        }
        std::sort(declared.begin(), declared.end(), [&](std::size_t a, std::size_t b) {
            return table.entries[a].decl_index < table.entries[b].decl_index;
        });
        std::sort(autos.begin(), autos.end(), [&](std::size_t a, std::size_t b) {
            return table.entries[a].appearance < table.entries[b].appearance;
        });
        order.insert(order.end(), declared.begin(), declared.end());
        order.insert(order.end(), autos.begin(), autos.end());
    };
    append_group(false);
    append_group(true);

    std::vector<std::string> attributes;
    std::vector<AttrKind> kinds;
    for (const std::size_t i : order) {
        attributes.push_back(table.entries[i].canonical);
        kinds.push_back(kind_of(table.entries[i]));
    }

    const auto inclusive = include_inclusive
                               ? inclusive_attributes(model)
                               : std::map<std::string, std::vector<std::string>>{};
    std::vector<std::pair<std::string, const std::vector<std::string>*>> inclusive_columns;
    if (include_inclusive) {
        for (std::size_t i = 0; i < model.composites.size(); ++i) {
            attributes.push_back("F_I^" + std::to_string(i + 1));
            kinds.push_back(AttrKind::inclusive);
            inclusive_columns.emplace_back(model.composites[i].id,
                                           &inclusive.at(model.composites[i].id));
        }
    }

    std::vector<std::string> objects;
    for (const auto& atomic : model.atomics) objects.push_back(atomic.id);
    for (const auto& composite : model.composites)
        if (!composite.own_components.empty()) objects.push_back(core_object_id(composite));

    std::map<std::string, std::size_t> attribute_index;
    for (std::size_t i = 0; i < attributes.size(); ++i) attribute_index.emplace(attributes[i], i);

    std::vector<fca::Bits> rows;
    rows.reserve(objects.size());
    for (const auto& object : objects) {
        fca::Bits row(attributes.size());
        const auto profile = profiles.find(object);
        if (profile != profiles.end()) {
            for (const auto* side : {&profile->second.physical, &profile->second.cyber})
                for (const auto& canonical : *side) row.set(attribute_index.at(canonical));
        }
        const std::size_t inclusive_base = attributes.size() - inclusive_columns.size();
        for (std::size_t k = 0; k < inclusive_columns.size(); ++k) {
            const auto& members = *inclusive_columns[k].second;
            if (std::binary_search(members.begin(), members.end(), object))
                row.set(inclusive_base + k);
        }
        rows.push_back(std::move(row));
    }

    return CompiledContext{
        fca::FormalContext(std::move(objects), std::move(attributes), std::move(rows)),
        std::move(kinds)};
}

std::vector<AttrKind> infer_attribute_kinds(const fca::FormalContext& ctx) {
    std::vector<AttrKind> kinds;
    kinds.reserve(ctx.attribute_count());
    for (const auto& name : ctx.attributes()) {
        if (name.starts_with("F_I"))
            kinds.push_back(AttrKind::inclusive);
        else if (name.ends_with("^P"))
            kinds.push_back(AttrKind::physical);
        else if (name.ends_with("^C"))
            kinds.push_back(AttrKind::cyber);
        else
            kinds.push_back(AttrKind::plain);
    }
    return kinds;
}

std::vector<std::string> attributes_for_layer(const fca::FormalContext& ctx,
                                              const std::vector<AttrKind>& kinds,
                                              Layer layer) {
    const AttrKind wanted = layer == Layer::physical ? AttrKind::physical : AttrKind::cyber;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ctx.attribute_count() && i < kinds.size(); ++i)
        if (kinds[i] == wanted || kinds[i] == AttrKind::mixed)
            out.push_back(ctx.attributes()[i]);
    return out;
}

const char* to_string(Layer layer) {
    return layer == Layer::physical ? "physical" : "cyber";
}

const char* to_string(PhysicalKind kind) {
    switch (kind) {
    case PhysicalKind::sensor: return "sensor";
    case PhysicalKind::actuator: return "actuator";
    case PhysicalKind::sensor_actuator: return "sensor_actuator";
    }
    return "sensor";
}

const char* to_string(Severity severity) {
    switch (severity) {
    case Severity::error: return "error";
    case Severity::warning: return "warning";
    case Severity::info: return "info";
    }
    return "error";
}

std::optional<Layer> layer_from_string(std::string_view text) {
    if (text == "physical") return Layer::physical;
    if (text == "cyber") return Layer::cyber;
    return std::nullopt;
}

std::optional<PhysicalKind> physical_kind_from_string(std::string_view text) {
    if (text == "sensor") return PhysicalKind::sensor;
    if (text == "actuator") return PhysicalKind::actuator;
    if (text == "sensor_actuator") return PhysicalKind::sensor_actuator;
    return std::nullopt;
}

} // namespace cpslat::cps
