#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cpslat/cps_model.hpp"
#include "cpslat/fca_core.hpp"

namespace cpslat::analysis {

struct RedundancyOptions {
    std::optional<cps::Layer> layer; // project to one layer first
    bool include_inclusive = false;  // count F_I structure attributes too
};

/// Provider counts and duplicate-provider structure of a context. Functions
/// with exactly one provider are resiliency gaps (single points of failure);
/// functions with none are unavailable.
struct RedundancyReport {
    std::vector<std::pair<std::string, std::size_t>> multiplicity; // context order
    std::vector<std::vector<std::string>> duplicate_groups; // identical rows, size >= 2
    std::vector<std::string> gaps;
    std::vector<std::string> unavailable;

    friend bool operator==(const RedundancyReport&, const RedundancyReport&) = default;
};

RedundancyReport redundancy_report(const fca::FormalContext& ctx,
                                   const std::vector<cps::AttrKind>& kinds,
                                   const RedundancyOptions& options = {});
/// Same, with attribute kinds inferred from the naming convention.
RedundancyReport redundancy_report(const fca::FormalContext& ctx,
                                   const RedundancyOptions& options = {});

/// Functions with exactly one provider (inclusive attributes excluded).
std::vector<std::string> resiliency_gaps(const fca::FormalContext& ctx,
                                         const std::vector<cps::AttrKind>& kinds);
std::vector<std::string> resiliency_gaps(const fca::FormalContext& ctx);

/// Functions that had a provider and lose all of them when `removed` rows
/// disappear. Unknown object ids raise InputError.
std::vector<std::string> removal_impact(const fca::FormalContext& ctx,
                                        const std::vector<cps::AttrKind>& kinds,
                                        std::span<const std::string> removed);
std::vector<std::string> removal_impact(const fca::FormalContext& ctx,
                                        std::span<const std::string> removed);

/// One way to assemble a request from whole concepts: the concept indices
/// (canonical, ascending) and the union of their extents.
struct ConceptCombination {
    std::vector<std::size_t> concepts;
    std::vector<std::string> extent_union;

    friend bool operator==(const ConceptCombination&, const ConceptCombination&) = default;
};

struct QueryResult {
    std::vector<std::string> requested; // sorted, deduplicated
    std::vector<std::vector<std::string>> minimal_covers; // (size, lex) order
    std::vector<ConceptCombination> concept_combinations; // filled on demand
    bool satisfiable = false;

    friend bool operator==(const QueryResult&, const QueryResult&) = default;
};

struct QueryOptions {
    bool include_inclusive = false;
};

/// All inclusion-minimal subsystem sets whose combined functions contain the
/// request. Exact enumeration, guarded by limits::max_objects objects.
QueryResult satisfy_query(const fca::FormalContext& ctx,
                          const std::vector<cps::AttrKind>& kinds,
                          std::span<const std::string> requested,
                          const QueryOptions& options = {});
QueryResult satisfy_query(const fca::FormalContext& ctx,
                          std::span<const std::string> requested,
                          const QueryOptions& options = {});

/// All inclusion-minimal sets of non-infimum concepts whose intent union
/// contains the request.
std::vector<ConceptCombination>
concept_combinations(const fca::ConceptLattice& lattice,
                     std::span<const std::string> requested);

/// A dependency graph between functions (or between subsystems offering
/// them): an edge means the source's output feeds the target's input.
/// Node ids are unique, self-loops are rejected, and every node carries the
/// functions it provides; a query node provides exactly the function it asks
/// for.
struct FunctionGraph {
    struct Node {
        std::string id;
        std::vector<std::string> provides; // sorted

        friend bool operator==(const Node&, const Node&) = default;
    };
    std::vector<Node> nodes;
    std::vector<std::pair<std::string, std::string>> edges; // sorted, deduplicated

    friend bool operator==(const FunctionGraph&, const FunctionGraph&) = default;
};

FunctionGraph make_function_graph(std::vector<FunctionGraph::Node> nodes,
                                  std::vector<std::pair<std::string, std::string>> edges);

/// Graph of a function request: one node per requested function.
FunctionGraph make_query_graph(std::span<const std::string> functions,
                               std::vector<std::pair<std::string, std::string>> edges);

struct IsomorphismResult {
    bool isomorphic = false;
    std::vector<std::pair<std::string, std::string>> witness; // query -> candidate
};

/// Label-aware digraph isomorphism: a bijection preserving edges in both
/// directions where each query node maps to a candidate node providing its
/// function. Brute-force search, guarded at limits::max_graph_nodes nodes.
IsomorphismResult query_isomorphism_check(const FunctionGraph& candidate,
                                          const FunctionGraph& query);

} // namespace cpslat::analysis
