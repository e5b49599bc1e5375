#include "kgbench/convert.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace fs = std::filesystem;

namespace kgbench {
namespace {

// --- CSV (RFC 4180 dialect: comma-separated, double-quote escaping,
// quoted fields may span lines, first row is the header) ---

bool needs_quoting(const std::string& field) {
    return field.find_first_of(",\"\r\n") != std::string::npos;
}

void write_csv_field(std::ostream& out, const std::string& field) {
    if (!needs_quoting(field)) {
        out << field;
        return;
    }
    out << '"';
    for (char c : field) {
        if (c == '"') out << "\"\"";
        else out << c;
    }
    out << '"';
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        write_csv_field(out, fields[i]);
    }
    out << '\n';
}

class CsvReader {
public:
    CsvReader(const fs::path& path) : path_(path), in_(path, std::ios::binary) {
        if (!in_) throw DataError("cannot open " + path.string());
    }

    // Reads one record; returns false at end of input. line() reports the
    // line the record started on, for diagnostics.
    bool next(std::vector<std::string>& fields) {
        fields.clear();
        int c = in_.get();
        if (c == EOF) return false;
        record_line_ = line_;
        std::string field;
        bool quoted = false;
        for (;;) {
            if (c == EOF) {
                if (quoted) fail("unterminated quoted field");
                fields.push_back(std::move(field));
                return true;
            }
            char ch = static_cast<char>(c);
            if (ch == '\n') ++line_;
            if (quoted) {
                if (ch == '"') {
                    int peek = in_.get();
                    if (peek == '"') {
                        field += '"';
                    } else {
                        quoted = false;
                        c = peek;
                        continue;
                    }
                } else {
                    field += ch;
                }
            } else if (ch == '"' && field.empty()) {
                quoted = true;
            } else if (ch == ',') {
                fields.push_back(std::move(field));
                field.clear();
            } else if (ch == '\r') {
                // swallowed; significant only inside quotes
            } else if (ch == '\n') {
                fields.push_back(std::move(field));
                return true;
            } else {
                field += ch;
            }
            c = in_.get();
        }
    }

    std::size_t line() const { return record_line_; }

    [[noreturn]] void fail(const std::string& what) const {
        throw DataError(path_.string() + ":" + std::to_string(record_line_) + ": " + what);
    }

private:
    fs::path path_;
    std::ifstream in_;
    std::size_t line_ = 1;
    std::size_t record_line_ = 1;
};

PropertyValue parse_properties(const std::string& text, const CsvReader& reader) {
    if (text.empty()) return PropertyValue::object();
    PropertyValue v = PropertyValue::parse(text, nullptr, false);
    if (v.is_discarded()) reader.fail("properties column is not valid JSON: " + text);
    if (!v.is_object()) reader.fail("properties column must be a JSON object: " + text);
    return v;
}

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& ext) {
    std::vector<fs::path> out;
    if (!fs::exists(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ext)
            out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

void check_collection_name(const std::string& name, const char* what) {
    if (name.empty() || name.find_first_of("/\\") != std::string::npos)
        throw DataError(std::string(what) + " \"" + name + "\" cannot be used as a file name");
}

std::string require_string(const PropertyValue& doc, const char* key, const std::string& where) {
    auto it = doc.find(key);
    if (it == doc.end() || !it->is_string())
        throw DataError(where + ": document is missing string field \"" + key + "\": " + doc.dump());
    return it->get<std::string>();
}

PropertyValue doc_properties(const PropertyValue& doc, const std::string& where) {
    auto it = doc.find("properties");
    if (it == doc.end()) return PropertyValue::object();
    if (!it->is_object()) throw DataError(where + ": properties field must be an object");
    return *it;
}

void reject_if_invalid(const KnowledgeGraph& kg, const std::string& source) {
    ValidationReport report = validate(kg);
    if (!report.ok()) throw DataError(source + ":\n" + report.to_string());
}

void write_jsonl(const fs::path& path, const std::vector<PropertyValue>& docs) {
    auto out = open_out(path);
    for (const auto& d : docs) out << d.dump() << '\n';
}

std::vector<PropertyValue> read_jsonl(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<PropertyValue> docs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        PropertyValue v = PropertyValue::parse(line, nullptr, false);
        if (v.is_discarded())
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": invalid JSON");
        docs.push_back(std::move(v));
    }
    return docs;
}

}  // namespace

std::string escape_key(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        if (c == '%') out += "%25";
        else if (c == '/') out += "%2F";
        else out += c;
    }
    return out;
}

std::string unescape_key(const std::string& escaped) {
    std::string out;
    out.reserve(escaped.size());
    for (std::size_t i = 0; i < escaped.size(); ++i) {
        if (escaped[i] == '%') {
            if (i + 2 >= escaped.size())
                throw DataError("truncated percent escape in key \"" + escaped + "\"");
            const std::string hex = escaped.substr(i + 1, 2);
            if (hex == "25") out += '%';
            else if (hex == "2F" || hex == "2f") out += '/';
            else throw DataError("unknown percent escape %" + hex + " in key \"" + escaped + "\"");
            i += 2;
        } else {
            out += escaped[i];
        }
    }
    return out;
}

std::string make_handle(const std::string& collection, const std::string& raw_id) {
    return collection + "/" + escape_key(raw_id);
}

std::pair<std::string, std::string> split_handle(const std::string& handle) {
    const auto pos = handle.find('/');
    if (pos == std::string::npos || pos == 0 || pos + 1 == handle.size())
        throw DataError("malformed handle \"" + handle + "\", expected <collection>/<_key>");
    return {handle.substr(0, pos), handle.substr(pos + 1)};
}

KnowledgeGraph load_csv_bundle(const fs::path& dir) {
    if (!fs::exists(dir)) throw DataError("bundle directory " + dir.string() + " does not exist");
    KnowledgeGraph kg;

    // One node id may appear in exactly one label file.
    std::unordered_map<std::string, std::string> id_to_label;

    for (const auto& path : sorted_files(dir / "nodes", ".csv")) {
        const std::string label = path.stem().string();
        CsvReader reader(path);
        std::vector<std::string> row;
        if (!reader.next(row) || row.size() != 2 || row[0] != "id" || row[1] != "properties")
            reader.fail("expected header id,properties");
        while (reader.next(row)) {
            if (row.size() != 2) reader.fail("expected 2 fields, got " + std::to_string(row.size()));
            auto [it, inserted] = id_to_label.emplace(row[0], label);
            if (!inserted && it->second != label)
                throw DataError("node id \"" + row[0] + "\" appears with labels \"" + it->second +
                                "\" and \"" + label + "\"; exactly one class label is allowed");
            kg.nodes.push_back({row[0], label, parse_properties(row[1], reader)});
        }
    }

    for (const auto& path : sorted_files(dir / "edges", ".csv")) {
        const std::string rel = path.stem().string();
        CsvReader reader(path);
        std::vector<std::string> row;
        if (!reader.next(row) || row.size() != 4 || row[0] != "id" || row[1] != "from" ||
            row[2] != "to" || row[3] != "properties")
            reader.fail("expected header id,from,to,properties");
        while (reader.next(row)) {
            if (row.size() != 4) reader.fail("expected 4 fields, got " + std::to_string(row.size()));
            kg.edges.push_back({row[0], rel, row[1], row[2], parse_properties(row[3], reader)});
        }
    }

    reject_if_invalid(kg, "csv bundle " + dir.string());
    return kg;
}

void write_csv_bundle(const fs::path& dir, const KnowledgeGraph& kg) {
    ensure_dir(dir / "nodes");
    ensure_dir(dir / "edges");

    std::map<std::string, std::vector<const Node*>> by_label;
    for (const auto& n : kg.nodes) by_label[n.label].push_back(&n);
    for (const auto& [label, nodes] : by_label) {
        check_collection_name(label, "class name");
        auto out = open_out(dir / "nodes" / (label + ".csv"));
        out << "id,properties\n";
        for (const Node* n : nodes)
            write_csv_row(out, {n->id, n->properties.empty() ? "" : n->properties.dump()});
    }

    std::map<std::string, std::vector<const Edge*>> by_rel;
    for (const auto& e : kg.edges) by_rel[e.rel_type].push_back(&e);
    for (const auto& [rel, edges] : by_rel) {
        check_collection_name(rel, "relationship type");
        auto out = open_out(dir / "edges" / (rel + ".csv"));
        out << "id,from,to,properties\n";
        for (const Edge* e : edges)
            write_csv_row(out, {e->id, e->from, e->to,
                                e->properties.empty() ? "" : e->properties.dump()});
    }
}

std::map<std::string, std::string> build_lookup_table(const KnowledgeGraph& kg) {
    std::map<std::string, std::string> table;
    for (const auto& n : kg.nodes) table.emplace(n.id, n.label);
    return table;
}

DocumentDump to_document_dump(const KnowledgeGraph& kg) {
    DocumentDump dump;
    for (const auto& n : kg.nodes)
        dump.node_collections[n.label].push_back(
            PropertyValue{{"_id", n.id}, {"label", n.label}, {"properties", n.properties}});
    for (const auto& e : kg.edges)
        dump.relationship_collections[e.rel_type].push_back(PropertyValue{
            {"id", e.id}, {"from", e.from}, {"to", e.to}, {"properties", e.properties}});
    return dump;
}

MultiModelDump to_multimodel_dump(const KnowledgeGraph& kg) {
    MultiModelDump dump;
    dump.lookup = build_lookup_table(kg);
    for (const auto& n : kg.nodes)
        dump.vertex_collections[n.label].push_back(
            PropertyValue{{"_key", escape_key(n.id)}, {"properties", n.properties}});
    for (const auto& e : kg.edges) {
        const auto from_label = dump.lookup.find(e.from);
        const auto to_label = dump.lookup.find(e.to);
        if (from_label == dump.lookup.end() || to_label == dump.lookup.end())
            throw DataError("edge \"" + e.id + "\" references a node absent from the lookup table");
        dump.edge_collections[e.rel_type].push_back(
            PropertyValue{{"_key", escape_key(e.id)},
                          {"_from", make_handle(from_label->second, e.from)},
                          {"_to", make_handle(to_label->second, e.to)},
                          {"properties", e.properties}});
    }
    return dump;
}

KnowledgeGraph load_document_dump(const DocumentDump& dump) {
    KnowledgeGraph kg;
    for (const auto& [label, docs] : dump.node_collections)
        for (const auto& doc : docs) {
            const std::string where = "document collection " + label;
            kg.nodes.push_back(
                {require_string(doc, "_id", where), label, doc_properties(doc, where)});
        }
    for (const auto& [rel, docs] : dump.relationship_collections)
        for (const auto& doc : docs) {
            const std::string where = "relationship collection " + rel;
            kg.edges.push_back({require_string(doc, "id", where), rel,
                                require_string(doc, "from", where),
                                require_string(doc, "to", where), doc_properties(doc, where)});
        }
    reject_if_invalid(kg, "document dump");
    return kg;
}

KnowledgeGraph load_multimodel_dump(const MultiModelDump& dump) {
    KnowledgeGraph kg;
    std::unordered_set<std::string> vertex_handles;
    for (const auto& [label, docs] : dump.vertex_collections)
        for (const auto& doc : docs) {
            const std::string where = "vertex collection " + label;
            const std::string key = require_string(doc, "_key", where);
            vertex_handles.insert(label + "/" + key);
            kg.nodes.push_back({unescape_key(key), label, doc_properties(doc, where)});
        }

    auto resolve = [&](const std::string& handle) -> std::string {
        auto [collection, key] = split_handle(handle);
        const std::string raw = unescape_key(key);
        const auto looked_up = dump.lookup.find(raw);
        if (looked_up == dump.lookup.end() || looked_up->second != collection ||
            !vertex_handles.count(handle))
            throw DataError("edge reference \"" + handle +
                            "\" does not resolve to an existing vertex document");
        return raw;
    };

    for (const auto& [rel, docs] : dump.edge_collections)
        for (const auto& doc : docs) {
            const std::string where = "edge collection " + rel;
            kg.edges.push_back({unescape_key(require_string(doc, "_key", where)), rel,
                                resolve(require_string(doc, "_from", where)),
                                resolve(require_string(doc, "_to", where)),
                                doc_properties(doc, where)});
        }
    reject_if_invalid(kg, "multi-model dump");
    return kg;
}

void write_document_dump(const fs::path& dir, const DocumentDump& dump) {
    ensure_dir(dir / "nodes");
    ensure_dir(dir / "relationships");
    for (const auto& [label, docs] : dump.node_collections) {
        check_collection_name(label, "class name");
        write_jsonl(dir / "nodes" / (label + ".jsonl"), docs);
    }
    for (const auto& [rel, docs] : dump.relationship_collections) {
        check_collection_name(rel, "relationship type");
        write_jsonl(dir / "relationships" / (rel + ".jsonl"), docs);
    }
}

DocumentDump read_document_dump(const fs::path& dir) {
    DocumentDump dump;
    for (const auto& path : sorted_files(dir / "nodes", ".jsonl"))
        dump.node_collections[path.stem().string()] = read_jsonl(path);
    for (const auto& path : sorted_files(dir / "relationships", ".jsonl"))
        dump.relationship_collections[path.stem().string()] = read_jsonl(path);
    return dump;
}

void write_multimodel_dump(const fs::path& dir, const MultiModelDump& dump) {
    ensure_dir(dir / "vertices");
    ensure_dir(dir / "edges");
    for (const auto& [label, docs] : dump.vertex_collections) {
        check_collection_name(label, "class name");
        write_jsonl(dir / "vertices" / (label + ".jsonl"), docs);
    }
    for (const auto& [rel, docs] : dump.edge_collections) {
        check_collection_name(rel, "relationship type");
        write_jsonl(dir / "edges" / (rel + ".jsonl"), docs);
    }
    auto out = open_out(dir / "lookup.json");
    out << PropertyValue(dump.lookup).dump(2) << '\n';
}

MultiModelDump read_multimodel_dump(const fs::path& dir) {
    MultiModelDump dump;
    for (const auto& path : sorted_files(dir / "vertices", ".jsonl"))
        dump.vertex_collections[path.stem().string()] = read_jsonl(path);
    for (const auto& path : sorted_files(dir / "edges", ".jsonl"))
        dump.edge_collections[path.stem().string()] = read_jsonl(path);
    std::ifstream in(dir / "lookup.json", std::ios::binary);
    if (!in) throw DataError("cannot open " + (dir / "lookup.json").string());
    PropertyValue table = PropertyValue::parse(in, nullptr, false);
    if (table.is_discarded() || !table.is_object())
        throw DataError((dir / "lookup.json").string() + ": expected a JSON object");
    for (const auto& [id, label] : table.items()) {
        if (!label.is_string())
            throw DataError("lookup table entry for \"" + id + "\" is not a string");
        dump.lookup.emplace(id, label.get<std::string>());
    }
    return dump;
}

}  // namespace kgbench
