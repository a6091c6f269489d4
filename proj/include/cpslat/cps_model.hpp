#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cpslat/errors.hpp"
#include "cpslat/fca_core.hpp"

namespace cpslat::cps {

enum class Layer { physical, cyber };
enum class PhysicalKind { sensor, actuator, sensor_actuator };

/// A physical or cyber component. Every component needs at least one input
/// port, one output port and one offered function; physical_kind is present
/// exactly for physical components.
struct Component {
    std::string id;
    Layer layer = Layer::physical;
    std::optional<PhysicalKind> physical_kind;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<std::string> offered_functions; // raw ids, e.g. "F_P2^1"

    friend bool operator==(const Component&, const Component&) = default;
};

/// A CPS without subsystems: it owns functional elements of both layers.
struct AtomicCps {
    std::string id;
    std::vector<std::string> components;

    friend bool operator==(const AtomicCps&, const AtomicCps&) = default;
};

/// A CPS aggregating other CPSs. "is physically part of" entails "logically
/// includes"; own_components hold the composite's proper elements (the P3/C3
/// case) and are carried by a synthesized "<id>.core" object in the compiled
/// context.
struct CompositeCps {
    std::string id;
    std::vector<std::string> physical_parts;
    std::vector<std::string> logical_members;
    std::vector<std::string> own_components;

    friend bool operator==(const CompositeCps&, const CompositeCps&) = default;
};

/// External sources/sinks. The two identifiers are reserved: they may appear
/// as link endpoints only and never provide functions.
struct Environment {
    std::string physical_id = "e_P";
    std::string cyber_id = "e_C";

    friend bool operator==(const Environment&, const Environment&) = default;
};

using LinkList = std::vector<std::pair<std::string, std::string>>;

struct CpsModel {
    std::vector<Component> components;
    std::vector<AtomicCps> atomics;
    std::vector<CompositeCps> composites;
    LinkList physical_links; // R^P
    LinkList cyber_links;    // R^C
    Environment environment;

    const Component* find_component(std::string_view id) const;
    const AtomicCps* find_atomic(std::string_view id) const;
    const CompositeCps* find_composite(std::string_view id) const;

    friend bool operator==(const CpsModel&, const CpsModel&) = default;
};

/// Expert-declared equivalence classes of raw component functions. Raw
/// functions without a declared class get an auto-created singleton class
/// named after the raw id.
struct FunctionEquivalence {
    struct Class {
        std::string canonical;
        std::vector<std::string> members;

        friend bool operator==(const Class&, const Class&) = default;
    };
    std::vector<Class> classes;

    friend bool operator==(const FunctionEquivalence&, const FunctionEquivalence&) = default;
};

enum class Severity { error, warning, info };

/// One validation finding. Codes are machine-stable; messages are not.
///
/// Error codes: RESERVED_ID, DUP_ID, PORT_MISSING, FUNCTION_MISSING,
/// KIND_MISSING, KIND_FORBIDDEN, UNKNOWN_REF, PHYSICAL_MISSING,
/// CYBER_MISSING, COMPONENT_SHARED, LINK_UNKNOWN, LINK_LAYER, MEMBERS_EMPTY,
/// CYCLE, EQ_OVERLAP, EQ_CANONICAL_CLASH.
/// Warnings: ORPHAN_COMPONENT, EQ_UNUSED_MEMBER.
/// Info: PART_ENTAILED, LAYER_MIXED.
struct Diagnostic {
    std::string code;
    Severity severity = Severity::error;
    std::string subject;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Carried by operations that refuse to run on an invalid model.
class ValidationError : public InputError {
public:
    explicit ValidationError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

/// All meta-model violations, in declaration order. An empty error set means
/// the model is valid; info/warning entries may still be present.
std::vector<Diagnostic> validate_model(const CpsModel& model);
std::vector<Diagnostic> validate_model(const CpsModel& model,
                                       const FunctionEquivalence& equivalence);

/// Canonical functions of one atomic CPS split by the layer of the offering
/// component (one class may appear on both sides).
struct FunctionProfile {
    std::vector<std::string> physical;
    std::vector<std::string> cyber;

    friend bool operator==(const FunctionProfile&, const FunctionProfile&) = default;
};

/// Profile per atomic CPS id, including synthesized "<composite>.core"
/// objects for composites with own components. Requires a valid model.
std::map<std::string, FunctionProfile>
atomic_function_profile(const CpsModel& model, const FunctionEquivalence& equivalence);

/// Atomic CPS ids transitively reachable from each composite through its
/// logical members (entailed physical parts included), sorted per composite.
std::map<std::string, std::vector<std::string>>
inclusive_attributes(const CpsModel& model);

/// Classification of a compiled context attribute. `mixed` marks a class
/// offered by components of both layers; `plain` a class whose layer is
/// unknown (declared but unoffered, or a bare interchange context).
enum class AttrKind { physical, cyber, mixed, plain, inclusive };

struct CompiledContext {
    fca::FormalContext context;
    std::vector<AttrKind> kinds; // one per attribute
};

/// Compile a model into its formal context. Objects are the atomic CPS ids
/// (plus "<id>.core" objects); attributes are the canonical function ids,
/// physical/mixed classes before cyber ones, declared classes before
/// auto-singletons, followed (when include_inclusive) by one "F_I^k"
/// attribute per composite in declaration order. Throws ValidationError when
/// the model has errors.
CompiledContext build_formal_context(const CpsModel& model,
                                     const FunctionEquivalence& equivalence,
                                     bool include_inclusive);

/// Attribute kinds recovered from the naming convention: "...^P" physical,
/// "...^C" cyber, "F_I..." inclusive, anything else plain.
std::vector<AttrKind> infer_attribute_kinds(const fca::FormalContext& ctx);

/// Attribute names visible from one layer: that layer's classes plus mixed
/// ones, in context order.
std::vector<std::string> attributes_for_layer(const fca::FormalContext& ctx,
                                              const std::vector<AttrKind>& kinds,
                                              Layer layer);

const char* to_string(Layer layer);
const char* to_string(PhysicalKind kind);
const char* to_string(Severity severity);
std::optional<Layer> layer_from_string(std::string_view text);
std::optional<PhysicalKind> physical_kind_from_string(std::string_view text);

} // namespace cpslat::cps
