// Acceptance suite: runs every published result end to end and prints one
// pass/fail line per criterion. Exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpslat/analysis.hpp"
#include "cpslat/cli.hpp"
#include "cpslat/io_formats.hpp"
#include "support/test_util.hpp"

using namespace cpslat;
using namespace cpslat::fca;
using testutil::concept_of;

namespace {

#define REQUIRE_TRUE(condition, message)                                                 \
    do {                                                                                 \
        if (!(condition)) throw std::runtime_error(message);                             \
    } while (0)

std::vector<std::string> ids(std::vector<std::string> v) { return v; }

io::ParsedModel load_fixture(const std::string& name) {
    return io::parse_model(testutil::read_file(testutil::fixture_path(name)));
}

std::vector<FormalConcept> table3_concepts() {
    return testutil::canonical({
        concept_of({"SSF1", "SSF7"}, {"F1", "F2"}),
        concept_of({"SSF2", "SSF6", "SSF7"}, {"F2", "F3"}),
        concept_of({"SSF3", "SSF6"}, {"F3", "F4"}),
        concept_of({"SSF4", "SSF5"}, {"F4", "F5"}),
        concept_of({"SSF5"}, {"F4", "F5", "F6"}),
        concept_of({"SSF6"}, {"F2", "F3", "F4"}),
        concept_of({"SSF7"}, {"F1", "F2", "F3"}),
        concept_of({"SSF8"}, {"F2", "F4", "F6"}),
        concept_of({"SSF1", "SSF2", "SSF6", "SSF7", "SSF8"}, {"F2"}),
        concept_of({"SSF2", "SSF3", "SSF6", "SSF7"}, {"F3"}),
        concept_of({"SSF3", "SSF4", "SSF5", "SSF6", "SSF8"}, {"F4"}),
        concept_of({"SSF5", "SSF8"}, {"F4", "F6"}),
        concept_of({"SSF6", "SSF8"}, {"F2", "F4"}),
        concept_of({"SSF1", "SSF2", "SSF3", "SSF4", "SSF5", "SSF6", "SSF7", "SSF8"}, {}),
        concept_of({}, {"F1", "F2", "F3", "F4", "F5", "F6"}),
    });
}

std::vector<FormalConcept> table12_concepts() {
    return testutil::canonical({
        concept_of({"CPS1", "CPS2"}, {"FC"}),
        concept_of({"CPS3"}, {"FRa", "FW1", "FP1"}),
        concept_of({"CPS4", "CPS5"}, {"FRb", "FT"}),
        concept_of({"CPS5"}, {"FRb", "FW2", "FT"}),
        concept_of({"CPS6"}, {"FRa", "FP2"}),
        concept_of({"CPS3", "CPS6"}, {"FRa"}),
        concept_of({"CPS1", "CPS2", "CPS3", "CPS4", "CPS5", "CPS6"}, {}),
        concept_of({}, {"FC", "FRa", "FRb", "FW1", "FW2", "FP1", "FP2", "FT"}),
    });
}

// A pair is a formal concept iff it is closed both ways.
bool is_formal_concept(const FormalContext& ctx, const std::vector<std::string>& extent,
                       const std::vector<std::string>& intent) {
    const Bits extent_bits = ctx.object_bits(extent);
    const Bits intent_bits = ctx.attribute_bits(intent);
    return ctx.derive_intent_bits(extent_bits) == intent_bits &&
           ctx.derive_extent_bits(intent_bits) == extent_bits;
}

void criterion_table2_concepts() {
    const auto ctx = io::read_cxt(testutil::read_file(testutil::fixture_path("table2.cxt")));
    const auto lattice = build_lattice(ctx);
    REQUIRE_TRUE(lattice.concepts.size() == 15, "expected 15 concepts");
    REQUIRE_TRUE(lattice.concepts == table3_concepts(), "concept set differs from Table 3");
    REQUIRE_TRUE(enumerate_concepts_bruteforce(ctx) == table3_concepts(),
                 "oracle set differs from Table 3");
}

void criterion_production_line() {
    const auto doc = load_fixture("production_line.json");
    const auto compiled = cps::build_formal_context(doc.model, doc.equivalences, false);

    const auto& ctx = compiled.context;
    const auto reference = testutil::table11();
    REQUIRE_TRUE(ctx.objects() == reference.objects(), "object rows differ from Table 11");
    const std::set<std::string> attrs(ctx.attributes().begin(), ctx.attributes().end());
    const std::set<std::string> expected_attrs(reference.attributes().begin(),
                                               reference.attributes().end());
    REQUIRE_TRUE(attrs == expected_attrs, "attribute set differs from Table 11");
    for (const auto& object : ctx.objects())
        for (const auto& attribute : attrs)
            REQUIRE_TRUE(ctx.incidence(ctx.object_index(object),
                                       ctx.attribute_index(attribute)) ==
                             reference.incidence(reference.object_index(object),
                                                 reference.attribute_index(attribute)),
                         "incidence differs from Table 11 at " + object + "/" + attribute);

    const auto lattice = build_lattice(ctx);
    REQUIRE_TRUE(lattice.concepts.size() == 8, "expected 8 concepts");
    REQUIRE_TRUE(lattice.concepts == table12_concepts(),
                 "concept set differs from Table 12");
}

void criterion_figure5_context() {
    const auto doc = load_fixture("figure5.json");
    const auto compiled = cps::build_formal_context(doc.model, doc.equivalences, true);
    REQUIRE_TRUE(compiled.context == testutil::table8(),
                 "compiled context is not bit-identical to Table 8");
}

void criterion_resiliency_verdict() {
    const auto doc = load_fixture("figure5.json");
    const auto compiled = cps::build_formal_context(doc.model, doc.equivalences, true);
    const auto gaps = analysis::resiliency_gaps(compiled.context, compiled.kinds);
    REQUIRE_TRUE(gaps == ids({"F3^P", "F4^C", "F5^C"}),
                 "single points of failure differ from the published verdict");
}

void criterion_redundancy_pairs() {
    const auto doc = load_fixture("figure5.json");
    const auto compiled = cps::build_formal_context(doc.model, doc.equivalences, true);

    analysis::RedundancyOptions cyber;
    cyber.layer = cps::Layer::cyber;
    const auto cyber_groups =
        analysis::redundancy_report(compiled.context, compiled.kinds, cyber).duplicate_groups;
    REQUIRE_TRUE(std::find(cyber_groups.begin(), cyber_groups.end(), ids({"CPS2", "CPS6"})) !=
                     cyber_groups.end(),
                 "cyber projection misses the {CPS2, CPS6} duplicate group");

    analysis::RedundancyOptions physical;
    physical.layer = cps::Layer::physical;
    const auto physical_groups =
        analysis::redundancy_report(compiled.context, compiled.kinds, physical)
            .duplicate_groups;
    REQUIRE_TRUE(std::find(physical_groups.begin(), physical_groups.end(),
                           ids({"CPS4", "CPS6"})) != physical_groups.end(),
                 "physical projection misses the {CPS4, CPS6} duplicate group");
}

void criterion_query_combinations() {
    const auto ctx = testutil::table2();
    const auto lattice = build_lattice(ctx);
    const auto request = ids({"F1", "F2", "F3", "F5"});

    const auto index_of = [&](const FormalConcept& c) {
        const auto it = std::find(lattice.concepts.begin(), lattice.concepts.end(), c);
        REQUIRE_TRUE(it != lattice.concepts.end(), "expected concept missing from lattice");
        return static_cast<std::size_t>(it - lattice.concepts.begin());
    };
    const auto sorted = [](std::vector<std::size_t> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    const auto c1 = index_of(concept_of({"SSF1", "SSF7"}, {"F1", "F2"}));
    const auto c2 = index_of(concept_of({"SSF2", "SSF6", "SSF7"}, {"F2", "F3"}));
    const auto c3 = index_of(concept_of({"SSF3", "SSF6"}, {"F3", "F4"}));
    const auto c4 = index_of(concept_of({"SSF4", "SSF5"}, {"F4", "F5"}));
    const auto c7 = index_of(concept_of({"SSF7"}, {"F1", "F2", "F3"}));

    const auto combos = analysis::concept_combinations(lattice, request);
    for (const auto& expected :
         {sorted({c7, c4}), sorted({c1, c2, c4}), sorted({c1, c3, c4})}) {
        const bool present =
            std::any_of(combos.begin(), combos.end(),
                        [&](const auto& combo) { return combo.concepts == expected; });
        REQUIRE_TRUE(present, "a published combination is missing");
    }

    const auto result = analysis::satisfy_query(ctx, request);
    for (const auto& expected : {ids({"SSF4", "SSF7"}), ids({"SSF5", "SSF7"})})
        REQUIRE_TRUE(std::find(result.minimal_covers.begin(), result.minimal_covers.end(),
                               expected) != result.minimal_covers.end(),
                     "a published cover is missing");
    REQUIRE_TRUE(result.minimal_covers == testutil::cover_oracle(ctx, request),
                 "cover list differs from the subset oracle");
}

void criterion_table9_reconciliation() {
    const auto doc = load_fixture("figure5.json");
    const auto compiled = cps::build_formal_context(doc.model, doc.equivalences, true);
    const auto& ctx = compiled.context;

    REQUIRE_TRUE(build_lattice(ctx).concepts == enumerate_concepts_bruteforce(ctx),
                 "lattice disagrees with the brute-force oracle");

    // Published concept 5 lists F2^C on {CPS4, CPS6}; CPS4 lacks F2^C.
    REQUIRE_TRUE(!is_formal_concept(ctx, {"CPS4", "CPS6"},
                                    {"F2^C", "F3^C", "F4^P", "F_I^2", "F_I^3"}),
                 "erratum concept 5 unexpectedly closed");
    REQUIRE_TRUE(
        is_formal_concept(ctx, {"CPS4", "CPS6"}, {"F3^C", "F4^P", "F_I^2", "F_I^3"}),
        "corrected concept 5 missing");

    // Published concept 15 claims F2^P there as well; neither row has it.
    REQUIRE_TRUE(!is_formal_concept(ctx, {"CPS4", "CPS6"},
                                    {"F3^C", "F2^P", "F_I^2", "F_I^3"}),
                 "erratum concept 15 unexpectedly closed");

    // Published concept 18 puts every subsystem under F2^C; three carry it.
    REQUIRE_TRUE(!is_formal_concept(
                     ctx, {"CPS1", "CPS2", "CPS4", "CPS5", "CPS6", "CPS7"},
                     {"F2^C", "F_I^3"}),
                 "erratum concept 18 unexpectedly closed");
    REQUIRE_TRUE(is_formal_concept(ctx, {"CPS2", "CPS5", "CPS6"}, {"F2^C", "F_I^3"}),
                 "corrected concept 18 missing");
}

void criterion_property_suite() {
    std::mt19937 rng(42);
    std::size_t checked = 0;
    for (const double density : {0.1, 0.3, 0.5, 0.8}) {
        for (int iteration = 0; iteration < 130; ++iteration) {
            const auto ctx = testutil::random_context(rng, 12, 12, density);

            std::bernoulli_distribution bit(0.5);
            Bits objs(ctx.object_count());
            for (std::size_t i = 0; i < objs.size(); ++i)
                if (bit(rng)) objs.set(i);
            Bits attrs(ctx.attribute_count());
            for (std::size_t i = 0; i < attrs.size(); ++i)
                if (bit(rng)) attrs.set(i);

            REQUIRE_TRUE(objs.is_subset_of(ctx.derive_extent_bits(attrs)) ==
                             attrs.is_subset_of(ctx.derive_intent_bits(objs)),
                         "Galois connection violated");
            const Bits closed = ctx.closure_attrs_bits(attrs);
            REQUIRE_TRUE(attrs.is_subset_of(closed), "closure not extensive");
            REQUIRE_TRUE(ctx.closure_attrs_bits(closed) == closed, "closure not idempotent");

            const auto lattice = build_lattice(ctx);
            REQUIRE_TRUE(lattice.concepts == enumerate_concepts_bruteforce(ctx),
                         "lattice differs from the brute-force oracle");

            for (std::size_t a = 0; a + 1 < lattice.concepts.size(); a += 3)
                for (std::size_t b = a + 1; b < lattice.concepts.size(); b += 3) {
                    const Bits meet = lattice.extent_bits[a] & lattice.extent_bits[b];
                    REQUIRE_TRUE(std::find(lattice.extent_bits.begin(),
                                           lattice.extent_bits.end(),
                                           meet) != lattice.extent_bits.end(),
                                 "meet missing from lattice");
                    const Bits join = ctx.derive_extent_bits(lattice.intent_bits[a] &
                                                             lattice.intent_bits[b]);
                    REQUIRE_TRUE(std::find(lattice.extent_bits.begin(),
                                           lattice.extent_bits.end(),
                                           join) != lattice.extent_bits.end(),
                                 "join missing from lattice");
                }
            ++checked;
        }
    }
    REQUIRE_TRUE(checked >= 500, "fewer than 500 random contexts exercised");
}

void criterion_round_trips() {
    for (const char* name : {"figure5.json", "production_line.json"}) {
        const auto document = load_fixture(name);
        REQUIRE_TRUE(io::parse_model(io::serialize_model(document)) == document,
                     std::string("model round-trip failed for ") + name);
    }
    const auto table2_bytes = testutil::read_file(testutil::fixture_path("table2.cxt"));
    REQUIRE_TRUE(io::write_cxt(io::read_cxt(table2_bytes)) == table2_bytes,
                 "cxt byte round-trip failed");
    for (const auto& ctx : {testutil::table2(), testutil::table8(), testutil::table11()})
        REQUIRE_TRUE(io::read_cxt(io::write_cxt(ctx)) == ctx, "cxt value round-trip failed");

    const auto doc = load_fixture("figure5.json");
    const auto compiled = cps::build_formal_context(doc.model, doc.equivalences, true);
    const auto first_dot = io::write_dot(build_lattice(compiled.context), io::DotLabels::full);
    const auto second_dot =
        io::write_dot(build_lattice(compiled.context), io::DotLabels::full);
    REQUIRE_TRUE(first_dot == second_dot, "DOT output not byte-identical across runs");

    const auto report = analysis::redundancy_report(compiled.context, compiled.kinds);
    REQUIRE_TRUE(io::write_report(report, io::ReportFormat::json) ==
                     io::write_report(analysis::redundancy_report(compiled.context,
                                                                  compiled.kinds),
                                      io::ReportFormat::json),
                 "report output not byte-identical across runs");
}

void criterion_isomorphism_oracle() {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<std::size_t> node_count(0, 6);
    std::uniform_int_distribution<int> label(0, 2);
    std::bernoulli_distribution edge(0.3);

    const auto random_graph = [&](const std::string& prefix) {
        const std::size_t n = node_count(rng);
        std::vector<analysis::FunctionGraph::Node> nodes;
        for (std::size_t i = 0; i < n; ++i)
            nodes.push_back({prefix + std::to_string(i), {"L" + std::to_string(label(rng))}});
        std::vector<std::pair<std::string, std::string>> edges;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (a != b && edge(rng)) edges.emplace_back(nodes[a].id, nodes[b].id);
        return analysis::make_function_graph(std::move(nodes), std::move(edges));
    };
    const auto permuted = [&](const analysis::FunctionGraph& graph) {
        std::vector<std::size_t> order(graph.nodes.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        std::map<std::string, std::string> rename;
        std::vector<analysis::FunctionGraph::Node> nodes;
        for (std::size_t i = 0; i < order.size(); ++i) {
            rename[graph.nodes[order[i]].id] = "c" + std::to_string(i);
            nodes.push_back({"c" + std::to_string(i), graph.nodes[order[i]].provides});
        }
        std::vector<std::pair<std::string, std::string>> edges;
        for (const auto& [from, to] : graph.edges)
            edges.emplace_back(rename.at(from), rename.at(to));
        return analysis::make_function_graph(std::move(nodes), std::move(edges));
    };

    for (int pair = 0; pair < 200; ++pair) {
        const auto query = random_graph("q");
        const auto candidate = (pair % 2 == 0) ? permuted(query) : random_graph("c");
        const bool expected = testutil::isomorphism_oracle(candidate, query);
        const bool got = analysis::query_isomorphism_check(candidate, query).isomorphic;
        REQUIRE_TRUE(got == expected, "checker disagrees with the exhaustive oracle");
    }
}

struct Criterion {
    int number;
    std::string title;
    std::function<void()> body;
    long long time_budget_ms; // 0 = untimed
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "the 8x6 subsystem context yields exactly the 15 published concepts",
         criterion_table2_concepts, 1000},
        {2, "the production-line context yields exactly the 8 published concepts",
         criterion_production_line, 1000},
        {3, "the functional-model fixture compiles bit-for-bit to the published context",
         criterion_figure5_context, 0},
        {4, "the single points of failure are F3^P, F4^C and F5^C",
         criterion_resiliency_verdict, 0},
        {5, "layer projections find the duplicated cyber and physical providers",
         criterion_redundancy_pairs, 0},
        {6, "the published request is covered by the published combinations and covers",
         criterion_query_combinations, 0},
        {7, "the lattice matches the oracle; the published concept table errata stand",
         criterion_table9_reconciliation, 0},
        {8, "lattice laws hold on 500+ random contexts across four densities",
         criterion_property_suite, 60000},
        {9, "models, contexts, diagrams and reports round-trip deterministically",
         criterion_round_trips, 0},
        {10, "the isomorphism check agrees with exhaustive bijections on 200 pairs",
         criterion_isomorphism_oracle, 0},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string failure;
        try {
            criterion.body();
        } catch (const std::exception& e) {
            failure = e.what();
        }
        const auto elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                    std::chrono::steady_clock::now() - start)
                                    .count();
        if (failure.empty() && criterion.time_budget_ms > 0 &&
            elapsed_ms > criterion.time_budget_ms)
            failure = "exceeded " + std::to_string(criterion.time_budget_ms) + " ms budget";

        if (failure.empty()) {
            std::printf("[PASS] criterion %2d: %s (%lld ms)\n", criterion.number,
                        criterion.title.c_str(), static_cast<long long>(elapsed_ms));
        } else {
            ++failures;
            std::printf("[FAIL] criterion %2d: %s (%lld ms): %s\n", criterion.number,
                        criterion.title.c_str(), static_cast<long long>(elapsed_ms),
                        failure.c_str());
        }
    }
    std::printf("%zu of %zu criteria passed\n", criteria.size() - failures,
                criteria.size());
    return failures;
}
