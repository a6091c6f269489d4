#include "cpslat/cli.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "cpslat/analysis.hpp"
#include "cpslat/cps_model.hpp"
#include "cpslat/errors.hpp"
#include "cpslat/fca_core.hpp"
#include "cpslat/io_formats.hpp"

namespace cpslat::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << content;
}

std::string set_label(const std::vector<std::string>& items) {
    std::string out = "{";
    for (std::size_t i = 0; i < items.size(); ++i) out += (i > 0 ? ", " : "") + items[i];
    return out + "}";
}

std::vector<std::string> split_list(const std::string& text, char separator) {
    std::vector<std::string> out;
    if (text.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = text.find(separator, start);
        const std::string item = text.substr(start, end - start);
        if (item.empty()) throw InputError("empty item in list '" + text + "'");
        out.push_back(item);
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> parse_edge_list(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& item : split_list(text, ',')) {
        const std::size_t sep = item.find('>');
        if (sep == std::string::npos || item.find('>', sep + 1) != std::string::npos)
            throw InputError("edge '" + item + "' must have the form from>to");
        const std::string from = item.substr(0, sep);
        const std::string to = item.substr(sep + 1);
        if (from.empty() || to.empty())
            throw InputError("edge '" + item + "' must have the form from>to");
        out.emplace_back(from, to);
    }
    return out;
}

struct Input {
    fca::FormalContext context;
    std::vector<cps::AttrKind> kinds;
    std::optional<io::ParsedModel> document;
};

Input load_input(const std::string& path, bool include_inclusive) {
    if (path.ends_with(".json")) {
        auto document = io::parse_model(read_file(path));
        auto compiled =
            cps::build_formal_context(document.model, document.equivalences, include_inclusive);
        return {std::move(compiled.context), std::move(compiled.kinds), std::move(document)};
    }
    if (path.ends_with(".cxt")) {
        auto context = io::read_cxt(read_file(path));
        auto kinds = cps::infer_attribute_kinds(context);
        return {std::move(context), std::move(kinds), std::nullopt};
    }
    throw InputError("unrecognized input extension (expected .json or .cxt): '" + path + "'");
}

void print_diagnostics(const std::vector<cps::Diagnostic>& diagnostics, std::ostream& out) {
    for (const auto& d : diagnostics)
        out << cps::to_string(d.severity) << " " << d.code << " [" << d.subject
            << "]: " << d.message << "\n";
}

std::optional<cps::Layer> layer_option(const std::string& value) {
    if (value == "all") return std::nullopt;
    return cps::layer_from_string(value);
}

int cmd_validate(const std::string& path, std::ostream& out) {
    const auto document = io::parse_model(read_file(path));
    const auto diagnostics = cps::validate_model(document.model, document.equivalences);
    print_diagnostics(diagnostics, out);
    std::size_t errors = 0;
    std::size_t warnings = 0;
    std::size_t notes = 0;
    for (const auto& d : diagnostics) {
        if (d.severity == cps::Severity::error) ++errors;
        else if (d.severity == cps::Severity::warning) ++warnings;
        else ++notes;
    }
    out << errors << " error(s), " << warnings << " warning(s), " << notes << " note(s)\n";
    return errors == 0 ? 0 : 1;
}

int cmd_context(const std::string& path, bool include_inclusive,
                const std::string& output, std::ostream& out) {
    if (!path.ends_with(".json"))
        throw InputError("the context command needs a model document (.json)");
    const Input input = load_input(path, include_inclusive);
    const std::string text = io::write_cxt(input.context);
    if (output.empty())
        out << text;
    else
        write_file(output, text);
    return 0;
}

int cmd_lattice(const std::string& path, const std::string& layer, const std::string& dot_path,
                const std::string& label_mode, std::ostream& out) {
    Input input = load_input(path, true);
    fca::FormalContext context = std::move(input.context);
    if (const auto selected = layer_option(layer)) {
        const auto names = cps::attributes_for_layer(context, input.kinds, *selected);
        context = fca::project_context(context, names);
    }
    const fca::ConceptLattice lattice = fca::build_lattice(context);
    out << "concepts: " << lattice.concepts.size() << "\n";
    for (std::size_t i = 0; i < lattice.concepts.size(); ++i)
        out << i << ": " << set_label(lattice.concepts[i].extent) << " / "
            << set_label(lattice.concepts[i].intent) << "\n";
    if (!dot_path.empty()) {
        const auto labels =
            label_mode == "reduced" ? io::DotLabels::reduced : io::DotLabels::full;
        write_file(dot_path, io::write_dot(lattice, labels));
    }
    return 0;
}

int cmd_analyze(const std::string& path, const std::string& layer, bool fail_on_gaps,
                bool as_json, std::ostream& out) {
    const Input input = load_input(path, true);
    analysis::RedundancyOptions options;
    options.layer = layer_option(layer);
    const auto report = analysis::redundancy_report(input.context, input.kinds, options);
    out << io::write_report(report, as_json ? io::ReportFormat::json : io::ReportFormat::text);
    if (fail_on_gaps && (!report.gaps.empty() || !report.unavailable.empty())) return 1;
    return 0;
}

// Subsystem-level dependency edges of a cover: an edge A -> B when any
// physical or cyber link leads from a component of A into a component of B.
std::vector<std::pair<std::string, std::string>>
cover_dependencies(const cps::CpsModel& model, const std::set<std::string>& cover) {
    std::map<std::string, std::string> owner; // component -> context object
    for (const auto& atomic : model.atomics)
        for (const auto& component : atomic.components) owner.emplace(component, atomic.id);
    for (const auto& composite : model.composites)
        for (const auto& component : composite.own_components)
            owner.emplace(component, composite.id + ".core");

    std::set<std::pair<std::string, std::string>> edges;
    const auto add = [&](const cps::LinkList& links) {
        for (const auto& [from, to] : links) {
            const auto from_owner = owner.find(from);
            const auto to_owner = owner.find(to);
            if (from_owner == owner.end() || to_owner == owner.end()) continue;
            if (from_owner->second == to_owner->second) continue;
            if (!cover.contains(from_owner->second) || !cover.contains(to_owner->second))
                continue;
            edges.emplace(from_owner->second, to_owner->second);
        }
    };
    add(model.physical_links);
    add(model.cyber_links);
    return {edges.begin(), edges.end()};
}

int cmd_query(const std::string& path, const std::string& functions_csv,
              const std::string& edges_csv, bool with_concepts, bool as_json,
              std::ostream& out) {
    const Input input = load_input(path, true);

    // Structural attributes never take part in function requests.
    std::vector<std::string> working;
    for (std::size_t i = 0; i < input.context.attribute_count(); ++i)
        if (input.kinds[i] != cps::AttrKind::inclusive)
            working.push_back(input.context.attributes()[i]);
    const fca::FormalContext context = fca::project_context(input.context, working);
    const auto kinds = [&] {
        std::vector<cps::AttrKind> filtered;
        for (std::size_t i = 0; i < input.context.attribute_count(); ++i)
            if (input.kinds[i] != cps::AttrKind::inclusive) filtered.push_back(input.kinds[i]);
        return filtered;
    }();

    std::vector<std::string> functions = split_list(functions_csv, ',');
    std::vector<std::pair<std::string, std::string>> query_edges = parse_edge_list(edges_csv);
    if (functions.empty() && input.document && input.document->query) {
        functions = input.document->query->functions;
        if (query_edges.empty()) query_edges = input.document->query->edges;
    }
    if (functions.empty())
        throw InputError("no functions requested (use --functions or a model query block)");

    io::QueryReport report;
    report.result = analysis::satisfy_query(context, kinds, functions);
    if (with_concepts) {
        const fca::ConceptLattice lattice = fca::build_lattice(context);
        report.result.concept_combinations = analysis::concept_combinations(lattice, functions);
        report.with_combinations = true;
    }

    if (!query_edges.empty()) {
        const auto query_graph = analysis::make_query_graph(functions, query_edges);
        std::vector<io::CoverCheck> checks;
        for (const auto& cover : report.result.minimal_covers) {
            const std::set<std::string> members(cover.begin(), cover.end());
            std::vector<analysis::FunctionGraph::Node> nodes;
            for (const auto& object : cover) {
                const std::size_t o = context.object_index(object);
                nodes.push_back({object, context.attribute_ids(context.row(o))});
            }
            std::vector<std::pair<std::string, std::string>> edges;
            if (input.document)
                edges = cover_dependencies(input.document->model, members);
            const auto candidate = analysis::make_function_graph(std::move(nodes), std::move(edges));
            checks.push_back({cover, analysis::query_isomorphism_check(candidate, query_graph)});
        }
        report.isomorphism = std::move(checks);
    }

    out << io::write_report(report, as_json ? io::ReportFormat::json : io::ReportFormat::text);
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Concept-lattice redundancy and resiliency analysis for "
                 "cyber-physical system models.\nExact enumerations are guarded at 25 "
                 "objects; override with CPS_LATTICE_MAX_OBJECTS (exponential beyond "
                 "the default).",
                 "cpslat"};
    app.require_subcommand(1);

    std::string input_path;
    std::string output_path;
    std::string layer = "all";
    std::string labels = "full";
    std::string dot_path;
    std::string functions_csv;
    std::string edges_csv;
    bool no_inclusive = false;
    bool fail_on_gaps = false;
    bool with_concepts = false;
    bool as_json = false;

    auto* validate = app.add_subcommand(
        "validate", "Check a model document against the meta-model rules "
                    "(exit 1 when errors are found)");
    validate->add_option("model", input_path, "model document (.json)")->required();

    auto* context = app.add_subcommand(
        "context", "Compile a model into a Burmeister .cxt formal context");
    context->add_option("model", input_path, "model document (.json)")->required();
    context->add_flag("--no-inclusive", no_inclusive,
                      "omit the F_I composite-membership attributes");
    context->add_option("-o,--output", output_path, "write to a file instead of stdout");

    auto* lattice = app.add_subcommand(
        "lattice", "Enumerate the concept lattice of a model or context");
    lattice->add_option("input", input_path, "model (.json) or context (.cxt)")->required();
    lattice->add_option("--layer", layer, "restrict to one layer's attributes")
        ->check(CLI::IsMember({"physical", "cyber", "all"}))
        ->capture_default_str();
    lattice->add_option("--dot", dot_path, "also write a Hasse diagram in DOT format");
    lattice->add_option("--labels", labels, "DOT labeling style")
        ->check(CLI::IsMember({"full", "reduced"}))
        ->capture_default_str();

    auto* analyze = app.add_subcommand(
        "analyze", "Report redundancy multiplicities, duplicate providers and "
                   "resiliency gaps");
    analyze->add_option("input", input_path, "model (.json) or context (.cxt)")->required();
    analyze->add_option("--layer", layer, "restrict to one layer's attributes")
        ->check(CLI::IsMember({"physical", "cyber", "all"}))
        ->capture_default_str();
    analyze->add_flag("--fail-on-gaps", fail_on_gaps,
                      "exit 1 when any function has fewer than two providers");
    analyze->add_flag("--json", as_json, "machine-readable report");

    auto* query = app.add_subcommand(
        "query", "Enumerate minimal subsystem covers for a function request");
    query->add_option("input", input_path, "model (.json) or context (.cxt)")->required();
    query->add_option("--functions", functions_csv,
                      "comma-separated requested functions (defaults to the model's "
                      "query block)");
    query->add_option("--edges", edges_csv,
                      "comma-separated dependency edges from>to; enables the "
                      "composite-function isomorphism check");
    query->add_flag("--concepts", with_concepts,
                    "also list minimal concept combinations covering the request");
    query->add_flag("--json", as_json, "machine-readable report");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("cpslat");
    for (const auto& arg : args) argv.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) return cmd_validate(input_path, out);
        if (context->parsed()) return cmd_context(input_path, !no_inclusive, output_path, out);
        if (lattice->parsed()) return cmd_lattice(input_path, layer, dot_path, labels, out);
        if (analyze->parsed()) return cmd_analyze(input_path, layer, fail_on_gaps, as_json, out);
        if (query->parsed())
            return cmd_query(input_path, functions_csv, edges_csv, with_concepts, as_json, out);
    } catch (const cps::ValidationError& e) {
        print_diagnostics(e.diagnostics(), err);
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace cpslat::cli
