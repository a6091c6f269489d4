#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "cpslat/errors.hpp"

namespace cpslat::fca {

using Bits = boost::dynamic_bitset<>;

/// A formal context (O, A, R): objects, attributes, and a binary incidence
/// relation stored as one bitset row per object. Identifiers must be unique
/// and non-empty; empty object or attribute lists are legal.
class FormalContext {
public:
    FormalContext() = default;
    FormalContext(std::vector<std::string> objects,
                  std::vector<std::string> attributes,
                  std::vector<Bits> incidence);

    const std::vector<std::string>& objects() const { return objects_; }
    const std::vector<std::string>& attributes() const { return attributes_; }
    std::size_t object_count() const { return objects_.size(); }
    std::size_t attribute_count() const { return attributes_.size(); }

    const Bits& row(std::size_t object) const { return rows_[object]; }
    bool incidence(std::size_t object, std::size_t attribute) const {
        return rows_[object].test(attribute);
    }

    /// Index lookups; the throwing forms name the offending identifier.
    std::size_t object_index(std::string_view id) const;
    std::size_t attribute_index(std::string_view id) const;
    bool has_object(std::string_view id) const;
    bool has_attribute(std::string_view id) const;

    /// Build a bitset from identifier sets (validates every id).
    Bits object_bits(std::span<const std::string> ids) const;
    Bits attribute_bits(std::span<const std::string> ids) const;

    /// Identifier lists for a bitset, sorted in code-point order.
    std::vector<std::string> object_ids(const Bits& bits) const;
    std::vector<std::string> attribute_ids(const Bits& bits) const;

    // Derivation (prime) operators over index bitsets. The empty object set
    // derives to all attributes and dually.
    Bits derive_intent_bits(const Bits& objects) const;
    Bits derive_extent_bits(const Bits& attributes) const;
    Bits closure_attrs_bits(const Bits& attributes) const;
    Bits closure_objects_bits(const Bits& objects) const;

    friend bool operator==(const FormalContext&, const FormalContext&) = default;

private:
    std::vector<std::string> objects_;
    std::vector<std::string> attributes_;
    std::vector<Bits> rows_;
    std::map<std::string, std::size_t, std::less<>> object_index_;
    std::map<std::string, std::size_t, std::less<>> attribute_index_;
};

/// A closed (extent, intent) pair. Member lists are sorted in code-point
/// order so value comparison is set comparison.
struct FormalConcept {
    std::vector<std::string> extent;
    std::vector<std::string> intent;

    friend bool operator==(const FormalConcept&, const FormalConcept&) = default;
};

/// Canonical concept order: |extent| descending, then lexicographic extent,
/// then lexicographic intent.
bool canonical_less(const FormalConcept& a, const FormalConcept& b);

/// All formal concepts of a context ordered by extent inclusion, plus the
/// cover (Hasse) edges of that order. Concepts are in canonical order;
/// cover_edges hold (child, parent) index pairs where the child extent is
/// strictly contained in the parent extent with nothing in between.
struct ConceptLattice {
    std::vector<FormalConcept> concepts;
    std::vector<Bits> extent_bits;   // aligned with concepts
    std::vector<Bits> intent_bits;   // aligned with concepts
    std::vector<std::pair<std::size_t, std::size_t>> cover_edges;
    std::size_t supremum_index = 0;
    std::size_t infimum_index = 0;
};

// Spec operations -----------------------------------------------------------

/// Attributes shared by every object in `objs` (all attributes for the empty
/// set). Unknown identifiers raise InputError.
std::vector<std::string> derive_intent(const FormalContext& ctx,
                                       std::span<const std::string> objs);

/// Objects carrying every attribute in `attrs` (all objects for the empty
/// set).
std::vector<std::string> derive_extent(const FormalContext& ctx,
                                       std::span<const std::string> attrs);

/// Double-prime closure of an attribute set.
std::vector<std::string> closure_attrs(const FormalContext& ctx,
                                       std::span<const std::string> attrs);

/// Ground-truth concept enumeration over all subsets of the smaller context
/// dimension. Guarded by limits::max_objects per side; raises CapacityError
/// beyond it. Result is in canonical order.
std::vector<FormalConcept> enumerate_concepts_bruteforce(const FormalContext& ctx);

/// Concept lattice via upper-neighbour (Bordat/Lindig style) generation.
/// Deterministic: canonical concept order, sorted cover edges.
ConceptLattice build_lattice(const FormalContext& ctx);

/// Restriction of a context to an attribute subset; attribute order of the
/// original context is preserved, objects are untouched.
FormalContext project_context(const FormalContext& ctx,
                              std::span<const std::string> attrs);

} // namespace cpslat::fca
