#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cpslat/analysis.hpp"
#include "cpslat/cps_model.hpp"
#include "cpslat/fca_core.hpp"

namespace cpslat::io {

/// Optional function request carried by a model document.
struct QuerySpec {
    std::vector<std::string> functions;
    std::vector<std::pair<std::string, std::string>> edges;

    friend bool operator==(const QuerySpec&, const QuerySpec&) = default;
};

/// Everything a "cps-lattice/1" model document carries.
struct ParsedModel {
    cps::CpsModel model;
    cps::FunctionEquivalence equivalences;
    std::optional<QuerySpec> query;

    friend bool operator==(const ParsedModel&, const ParsedModel&) = default;
};

/// Parse a JSON model document. Syntax errors raise ParseError (with
/// position), schema violations raise InputError naming the JSON path.
/// Semantic validation is validate_model's job.
ParsedModel parse_model(std::string_view bytes);

/// Deterministic serialization; parse_model(serialize_model(d)) == d.
std::string serialize_model(const ParsedModel& document);

/// Burmeister .cxt interchange: "B", blank, counts, blank, object names,
/// attribute names, then one './X' row per object. LF line endings.
fca::FormalContext read_cxt(std::string_view bytes);
std::string write_cxt(const fca::FormalContext& ctx);

enum class DotLabels { full, reduced };

/// Hasse diagram in DOT. One node per concept (node id = canonical index),
/// one edge per cover pair. Full labels print both sets; reduced labels show
/// attributes at their maximal and objects at their minimal concept.
std::string write_dot(const fca::ConceptLattice& lattice, DotLabels labels);

/// Definition-4 outcome for one minimal cover.
struct CoverCheck {
    std::vector<std::string> cover;
    analysis::IsomorphismResult outcome;
};

struct QueryReport {
    analysis::QueryResult result;
    bool with_combinations = false;
    std::optional<std::vector<CoverCheck>> isomorphism;
};

enum class ReportFormat { json, text };

std::string write_report(const analysis::RedundancyReport& report, ReportFormat format);
std::string write_report(const QueryReport& report, ReportFormat format);

} // namespace cpslat::io
