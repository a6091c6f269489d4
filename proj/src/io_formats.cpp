#include "cpslat/io_formats.hpp"

#include <algorithm>
#include <cstddef>
#include <iomanip>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace cpslat::io {

using njson = nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw InputError("schema error at '" + (path.empty() ? "/" : path) + "': " + what);
}

const njson& expect_object(const njson& value, const std::string& path) {
    if (!value.is_object()) schema_error(path, "expected an object");
    return value;
}

const njson& expect_array(const njson& value, const std::string& path) {
    if (!value.is_array()) schema_error(path, "expected an array");
    return value;
}

std::string expect_string(const njson& value, const std::string& path) {
    if (!value.is_string()) schema_error(path, "expected a string");
    return value.get<std::string>();
}

void check_keys(const njson& object, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : object.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            schema_error(path + "/" + key, "unknown key");
    }
}

std::vector<std::string> string_list(const njson& value, const std::string& path) {
    expect_array(value, path);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < value.size(); ++i)
        out.push_back(expect_string(value[i], path + "/" + std::to_string(i)));
    return out;
}

std::vector<std::pair<std::string, std::string>> pair_list(const njson& value,
                                                           const std::string& path) {
    expect_array(value, path);
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string item_path = path + "/" + std::to_string(i);
        expect_array(value[i], item_path);
        if (value[i].size() != 2) schema_error(item_path, "expected a pair");
        out.emplace_back(expect_string(value[i][0], item_path + "/0"),
                         expect_string(value[i][1], item_path + "/1"));
    }
    return out;
}

cps::Component parse_component(const njson& value, const std::string& path) {
    expect_object(value, path);
    check_keys(value, path, {"id", "layer", "physical_kind", "inputs", "outputs", "functions"});
    cps::Component component;
    if (!value.contains("id")) schema_error(path, "missing required key 'id'");
    component.id = expect_string(value["id"], path + "/id");
    if (!value.contains("layer")) schema_error(path, "missing required key 'layer'");
    const auto layer = cps::layer_from_string(expect_string(value["layer"], path + "/layer"));
    if (!layer) schema_error(path + "/layer", "expected 'physical' or 'cyber'");
    component.layer = *layer;
    if (value.contains("physical_kind")) {
        const auto kind = cps::physical_kind_from_string(
            expect_string(value["physical_kind"], path + "/physical_kind"));
        if (!kind)
            schema_error(path + "/physical_kind",
                         "expected 'sensor', 'actuator' or 'sensor_actuator'");
        component.physical_kind = *kind;
    }
    if (value.contains("inputs"))
        component.inputs = string_list(value["inputs"], path + "/inputs");
    if (value.contains("outputs"))
        component.outputs = string_list(value["outputs"], path + "/outputs");
    if (value.contains("functions"))
        component.offered_functions = string_list(value["functions"], path + "/functions");
    return component;
}

} // namespace

ParsedModel parse_model(std::string_view bytes) {
    njson root;
    try {
        root = njson::parse(bytes);
    } catch (const njson::parse_error& e) {
        throw ParseError(e.what());
    }
    expect_object(root, "");
    check_keys(root, "",
               {"format", "components", "atomics", "composites", "links", "equivalences",
                "query"});
    if (!root.contains("format")) schema_error("", "missing required key 'format'");
    const std::string format = expect_string(root["format"], "/format");
    if (format != "cps-lattice/1")
        schema_error("/format", "unsupported format '" + format + "'");

    ParsedModel document;
    if (root.contains("components")) {
        expect_array(root["components"], "/components");
        for (std::size_t i = 0; i < root["components"].size(); ++i)
            document.model.components.push_back(parse_component(
                root["components"][i], "/components/" + std::to_string(i)));
    }
    if (root.contains("atomics")) {
        expect_array(root["atomics"], "/atomics");
        for (std::size_t i = 0; i < root["atomics"].size(); ++i) {
            const std::string path = "/atomics/" + std::to_string(i);
            const njson& entry = expect_object(root["atomics"][i], path);
            check_keys(entry, path, {"id", "components"});
            if (!entry.contains("id")) schema_error(path, "missing required key 'id'");
            cps::AtomicCps atomic;
            atomic.id = expect_string(entry["id"], path + "/id");
            if (entry.contains("components"))
                atomic.components = string_list(entry["components"], path + "/components");
            document.model.atomics.push_back(std::move(atomic));
        }
    }
    if (root.contains("composites")) {
        expect_array(root["composites"], "/composites");
        for (std::size_t i = 0; i < root["composites"].size(); ++i) {
            const std::string path = "/composites/" + std::to_string(i);
            const njson& entry = expect_object(root["composites"][i], path);
            check_keys(entry, path,
                       {"id", "physical_parts", "logical_members", "own_components"});
            if (!entry.contains("id")) schema_error(path, "missing required key 'id'");
            cps::CompositeCps composite;
            composite.id = expect_string(entry["id"], path + "/id");
            if (entry.contains("physical_parts"))
                composite.physical_parts =
                    string_list(entry["physical_parts"], path + "/physical_parts");
            if (entry.contains("logical_members"))
                composite.logical_members =
                    string_list(entry["logical_members"], path + "/logical_members");
            if (entry.contains("own_components"))
                composite.own_components =
                    string_list(entry["own_components"], path + "/own_components");
            document.model.composites.push_back(std::move(composite));
        }
    }
    if (root.contains("links")) {
        const njson& links = expect_object(root["links"], "/links");
        check_keys(links, "/links", {"physical", "cyber"});
        if (links.contains("physical"))
            document.model.physical_links = pair_list(links["physical"], "/links/physical");
        if (links.contains("cyber"))
            document.model.cyber_links = pair_list(links["cyber"], "/links/cyber");
    }
    if (root.contains("equivalences")) {
        expect_array(root["equivalences"], "/equivalences");
        for (std::size_t i = 0; i < root["equivalences"].size(); ++i) {
            const std::string path = "/equivalences/" + std::to_string(i);
            const njson& entry = expect_object(root["equivalences"][i], path);
            check_keys(entry, path, {"canonical", "members"});
            if (!entry.contains("canonical"))
                schema_error(path, "missing required key 'canonical'");
            cps::FunctionEquivalence::Class cls;
            cls.canonical = expect_string(entry["canonical"], path + "/canonical");
            if (entry.contains("members"))
                cls.members = string_list(entry["members"], path + "/members");
            document.equivalences.classes.push_back(std::move(cls));
        }
    }
    if (root.contains("query")) {
        const njson& query = expect_object(root["query"], "/query");
        check_keys(query, "/query", {"functions", "edges"});
        QuerySpec spec;
        if (query.contains("functions"))
            spec.functions = string_list(query["functions"], "/query/functions");
        if (query.contains("edges")) spec.edges = pair_list(query["edges"], "/query/edges");
        document.query = std::move(spec);
    }
    return document;
}

std::string serialize_model(const ParsedModel& document) {
    njson root;
    root["format"] = "cps-lattice/1";

    njson components = njson::array();
    for (const auto& component : document.model.components) {
        njson entry;
        entry["id"] = component.id;
        entry["layer"] = cps::to_string(component.layer);
        if (component.physical_kind)
            entry["physical_kind"] = cps::to_string(*component.physical_kind);
        entry["inputs"] = component.inputs;
        entry["outputs"] = component.outputs;
        entry["functions"] = component.offered_functions;
        components.push_back(std::move(entry));
    }
    root["components"] = std::move(components);

    njson atomics = njson::array();
    for (const auto& atomic : document.model.atomics) {
        njson entry;
        entry["id"] = atomic.id;
        entry["components"] = atomic.components;
        atomics.push_back(std::move(entry));
    }
    root["atomics"] = std::move(atomics);

    njson composites = njson::array();
    for (const auto& composite : document.model.composites) {
        njson entry;
        entry["id"] = composite.id;
        entry["physical_parts"] = composite.physical_parts;
        entry["logical_members"] = composite.logical_members;
        entry["own_components"] = composite.own_components;
        composites.push_back(std::move(entry));
    }
    root["composites"] = std::move(composites);

    njson links;
    links["physical"] = njson::array();
    for (const auto& [from, to] : document.model.physical_links)
        links["physical"].push_back(njson::array({from, to}));
    links["cyber"] = njson::array();
    for (const auto& [from, to] : document.model.cyber_links)
        links["cyber"].push_back(njson::array({from, to}));
    root["links"] = std::move(links);

    njson equivalences = njson::array();
    for (const auto& cls : document.equivalences.classes) {
        njson entry;
        entry["canonical"] = cls.canonical;
        entry["members"] = cls.members;
        equivalences.push_back(std::move(entry));
    }
    root["equivalences"] = std::move(equivalences);

    if (document.query) {
        njson query;
        query["functions"] = document.query->functions;
        query["edges"] = njson::array();
        for (const auto& [from, to] : document.query->edges)
            query["edges"].push_back(njson::array({from, to}));
        root["query"] = std::move(query);
    }
    return root.dump(2) + "\n";
}

namespace {

std::vector<std::string> split_lines(std::string_view bytes) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= bytes.size()) {
        const std::size_t end = bytes.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < bytes.size()) lines.emplace_back(bytes.substr(start));
            break;
        }
        std::string line(bytes.substr(start, end - start));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

const std::string& cxt_line(const std::vector<std::string>& lines, std::size_t index,
                            const char* what) {
    if (index >= lines.size())
        throw ParseError("line " + std::to_string(index + 1) + ": unexpected end of file, expected " +
                         what);
    return lines[index];
}

std::size_t cxt_count(const std::vector<std::string>& lines, std::size_t index,
                      const char* what) {
    const std::string& line = cxt_line(lines, index, what);
    if (line.empty() || line.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("line " + std::to_string(index + 1) + ": expected " + what +
                         ", got '" + line + "'");
    return static_cast<std::size_t>(std::stoull(line));
}

} // namespace

fca::FormalContext read_cxt(std::string_view bytes) {
    const auto lines = split_lines(bytes);
    if (cxt_line(lines, 0, "header 'B'") != "B")
        throw ParseError("line 1: expected Burmeister header 'B'");
    if (!cxt_line(lines, 1, "blank line").empty())
        throw ParseError("line 2: expected a blank line after the header");
    const std::size_t object_count = cxt_count(lines, 2, "object count");
    const std::size_t attribute_count = cxt_count(lines, 3, "attribute count");
    if (!cxt_line(lines, 4, "blank line").empty())
        throw ParseError("line 5: expected a blank line after the counts");

    std::size_t at = 5;
    std::vector<std::string> objects;
    for (std::size_t i = 0; i < object_count; ++i)
        objects.push_back(cxt_line(lines, at++, "object name"));
    std::vector<std::string> attributes;
    for (std::size_t i = 0; i < attribute_count; ++i)
        attributes.push_back(cxt_line(lines, at++, "attribute name"));

    std::vector<fca::Bits> rows;
    for (std::size_t i = 0; i < object_count; ++i) {
        const std::string& line = cxt_line(lines, at, "incidence row");
        if (line.size() != attribute_count)
            throw ParseError("line " + std::to_string(at + 1) + ": row '" + objects[i] +
                             "' has " + std::to_string(line.size()) + " cells, expected " +
                             std::to_string(attribute_count));
        fca::Bits row(attribute_count);
        for (std::size_t a = 0; a < attribute_count; ++a) {
            if (line[a] == 'X')
                row.set(a);
            else if (line[a] != '.')
                throw ParseError("line " + std::to_string(at + 1) + ": invalid cell '" +
                                 std::string(1, line[a]) + "' in row '" + objects[i] + "'");
        }
        rows.push_back(std::move(row));
        ++at;
    }
    for (; at < lines.size(); ++at)
        if (!lines[at].empty())
            throw ParseError("line " + std::to_string(at + 1) + ": unexpected trailing content");
    return fca::FormalContext(std::move(objects), std::move(attributes), std::move(rows));
}

std::string write_cxt(const fca::FormalContext& ctx) {
    std::string out = "B\n\n";
    out += std::to_string(ctx.object_count()) + "\n";
    out += std::to_string(ctx.attribute_count()) + "\n\n";
    for (const auto& name : ctx.objects()) out += name + "\n";
    for (const auto& name : ctx.attributes()) out += name + "\n";
    for (std::size_t o = 0; o < ctx.object_count(); ++o) {
        for (std::size_t a = 0; a < ctx.attribute_count(); ++a)
            out += ctx.incidence(o, a) ? 'X' : '.';
        out += '\n';
    }
    return out;
}

namespace {

std::string dot_escape(const std::string& text) {
    std::string out;
    for (const char c : text) {
        if (c == '\\' || c == '"') out += '\\';
        out += c;
    }
    return out;
}

std::string join(const std::vector<std::string>& items, const char* separator) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += separator;
        out += item;
    }
    return out;
}

std::string set_label(const std::vector<std::string>& items) {
    return "{" + join(items, ", ") + "}";
}

} // namespace

std::string write_dot(const fca::ConceptLattice& lattice, DotLabels labels) {
    const std::size_t n = lattice.concepts.size();

    // Introducers: canonical order is extent-size descending, so the first
    // concept whose intent holds an attribute is that attribute's maximal
    // concept, and the last concept whose extent holds an object is minimal.
    std::vector<std::vector<std::string>> introduced_attrs(n);
    std::vector<std::vector<std::string>> introduced_objs(n);
    if (labels == DotLabels::reduced && n > 0) {
        std::set<std::string> attrs(lattice.concepts[lattice.infimum_index].intent.begin(),
                                    lattice.concepts[lattice.infimum_index].intent.end());
        std::set<std::string> objs(lattice.concepts[lattice.supremum_index].extent.begin(),
                                   lattice.concepts[lattice.supremum_index].extent.end());
        for (const auto& attr : attrs) {
            for (std::size_t i = 0; i < n; ++i) {
                const auto& intent = lattice.concepts[i].intent;
                if (std::binary_search(intent.begin(), intent.end(), attr)) {
                    introduced_attrs[i].push_back(attr);
                    break;
                }
            }
        }
        for (const auto& obj : objs) {
            for (std::size_t i = n; i-- > 0;) {
                const auto& extent = lattice.concepts[i].extent;
                if (std::binary_search(extent.begin(), extent.end(), obj)) {
                    introduced_objs[i].push_back(obj);
                    break;
                }
            }
        }
    }

    std::string out = "digraph concept_lattice {\n  rankdir=BT;\n  node [shape=box];\n";
    for (std::size_t i = 0; i < n; ++i) {
        std::string label;
        if (labels == DotLabels::full) {
            label = dot_escape(set_label(lattice.concepts[i].extent)) + "\\n" +
                    dot_escape(set_label(lattice.concepts[i].intent));
        } else {
            const std::string attrs = join(introduced_attrs[i], ", ");
            const std::string objs = join(introduced_objs[i], ", ");
            if (!attrs.empty() || !objs.empty())
                label = dot_escape(attrs) + "\\n" + dot_escape(objs);
        }
        out += "  n" + std::to_string(i) + " [label=\"" + label + "\"];\n";
    }
    for (const auto& [child, parent] : lattice.cover_edges)
        out += "  n" + std::to_string(child) + " -> n" + std::to_string(parent) + ";\n";
    out += "}\n";
    return out;
}

namespace {

std::string list_or_none(const std::vector<std::string>& items) {
    return items.empty() ? "none" : join(items, ", ");
}

} // namespace

std::string write_report(const analysis::RedundancyReport& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        njson doc;
        doc["format"] = "cps-lattice-report/1";
        doc["kind"] = "redundancy";
        njson multiplicity;
        for (const auto& [name, count] : report.multiplicity) multiplicity[name] = count;
        doc["multiplicity"] = std::move(multiplicity);
        doc["gaps"] = report.gaps;
        doc["unavailable"] = report.unavailable;
        doc["duplicate_groups"] = report.duplicate_groups;
        return doc.dump(2) + "\n";
    }

    std::size_t width = 8;
    for (const auto& [name, count] : report.multiplicity)
        width = std::max(width, name.size());
    std::ostringstream out;
    out << "providers per function:\n";
    for (const auto& [name, count] : report.multiplicity)
        out << "  " << std::left << std::setw(static_cast<int>(width + 2)) << name << count
            << "\n";
    out << "gaps (exactly one provider): " << list_or_none(report.gaps) << "\n";
    out << "unavailable (no provider): " << list_or_none(report.unavailable) << "\n";
    if (report.duplicate_groups.empty()) {
        out << "duplicate groups: none\n";
    } else {
        out << "duplicate groups:\n";
        for (const auto& group : report.duplicate_groups)
            out << "  " << set_label(group) << "\n";
    }
    return out.str();
}

std::string write_report(const QueryReport& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        njson doc;
        doc["format"] = "cps-lattice-report/1";
        doc["kind"] = "query";
        doc["requested"] = report.result.requested;
        doc["satisfiable"] = report.result.satisfiable;
        doc["minimal_covers"] = report.result.minimal_covers;
        if (report.with_combinations) {
            njson combos = njson::array();
            for (const auto& combo : report.result.concept_combinations) {
                njson entry;
                entry["concepts"] = combo.concepts;
                entry["extent_union"] = combo.extent_union;
                combos.push_back(std::move(entry));
            }
            doc["concept_combinations"] = std::move(combos);
        }
        if (report.isomorphism) {
            njson checks = njson::array();
            for (const auto& check : *report.isomorphism) {
                njson entry;
                entry["cover"] = check.cover;
                entry["isomorphic"] = check.outcome.isomorphic;
                njson witness = njson::array();
                for (const auto& [from, to] : check.outcome.witness)
                    witness.push_back(njson::array({from, to}));
                entry["witness"] = std::move(witness);
                checks.push_back(std::move(entry));
            }
            doc["isomorphism"] = std::move(checks);
        }
        return doc.dump(2) + "\n";
    }

    std::ostringstream out;
    out << "requested: " << list_or_none(report.result.requested) << "\n";
    out << "satisfiable: " << (report.result.satisfiable ? "yes" : "no") << "\n";
    if (report.result.minimal_covers.empty()) {
        out << "minimal covers: none\n";
    } else {
        out << "minimal covers (" << report.result.minimal_covers.size() << "):\n";
        for (const auto& cover : report.result.minimal_covers)
            out << "  " << set_label(cover) << "\n";
    }
    if (report.with_combinations) {
        if (report.result.concept_combinations.empty()) {
            out << "concept combinations: none\n";
        } else {
            out << "concept combinations (" << report.result.concept_combinations.size()
                << "):\n";
            for (const auto& combo : report.result.concept_combinations) {
                out << "  concepts {";
                for (std::size_t i = 0; i < combo.concepts.size(); ++i)
                    out << (i > 0 ? ", " : "") << combo.concepts[i];
                out << "} extent " << set_label(combo.extent_union) << "\n";
            }
        }
    }
    if (report.isomorphism) {
        out << "isomorphism checks:\n";
        if (report.isomorphism->empty()) out << "  none\n";
        for (const auto& check : *report.isomorphism) {
            out << "  " << set_label(check.cover) << ": "
                << (check.outcome.isomorphic ? "isomorphic" : "not isomorphic");
            if (check.outcome.isomorphic) {
                out << " (";
                for (std::size_t i = 0; i < check.outcome.witness.size(); ++i)
                    out << (i > 0 ? ", " : "") << check.outcome.witness[i].first << "->"
                        << check.outcome.witness[i].second;
                out << ")";
            }
            out << "\n";
        }
    }
    return out.str();
}

} // namespace cpslat::io
