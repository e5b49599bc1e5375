#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kgbench/errors.hpp"
#include "kgbench/graph.hpp"

namespace kgbench {

// Document-paradigm representation: one collection per node class holding
// {_id, label, properties} documents, one per relationship type holding
// {id, from, to, properties} documents.
struct DocumentDump {
    std::map<std::string, std::vector<PropertyValue>> node_collections;
    std::map<std::string, std::vector<PropertyValue>> relationship_collections;
};

// Multi-model representation: vertex collections of {_key, properties},
// edge collections of {_key, _from, _to, properties} where _from/_to are
// "<collection>/<_key>" handles, plus a global id -> class lookup table.
struct MultiModelDump {
    std::map<std::string, std::vector<PropertyValue>> vertex_collections;
    std::map<std::string, std::vector<PropertyValue>> edge_collections;
    std::map<std::string, std::string> lookup;
};

// Percent-escaping of '/' (and '%' itself) so ids embed unambiguously
// into "<collection>/<_key>" handles.
std::string escape_key(const std::string& raw);
std::string unescape_key(const std::string& escaped);
std::string make_handle(const std::string& collection, const std::string& raw_id);
// Splits on the first '/'; throws DataError when no separator is present.
std::pair<std::string, std::string> split_handle(const std::string& handle);

// CSV bundle layout: <dir>/nodes/<Label>.csv with header id,properties and
// <dir>/edges/<RelType>.csv with header id,from,to,properties. Class and
// relationship-type names are taken verbatim from the file names. The
// properties column holds JSON text; an empty column means no properties.
KnowledgeGraph load_csv_bundle(const std::filesystem::path& dir);
void write_csv_bundle(const std::filesystem::path& dir, const KnowledgeGraph& kg);

// Total map over node ids; values are class names.
std::map<std::string, std::string> build_lookup_table(const KnowledgeGraph& kg);

DocumentDump to_document_dump(const KnowledgeGraph& kg);
MultiModelDump to_multimodel_dump(const KnowledgeGraph& kg);

// Inverse conversions. Both validate the reloaded graph and throw DataError
// on unresolvable references, naming the offending ids/handles.
KnowledgeGraph load_document_dump(const DocumentDump& dump);
KnowledgeGraph load_multimodel_dump(const MultiModelDump& dump);

// On-disk form: JSON-lines, one file per collection.
//   document/nodes/<Label>.jsonl, document/relationships/<RelType>.jsonl
//   multimodel/vertices/<Label>.jsonl, multimodel/edges/<RelType>.jsonl,
//   multimodel/lookup.json
void write_document_dump(const std::filesystem::path& dir, const DocumentDump& dump);
DocumentDump read_document_dump(const std::filesystem::path& dir);
void write_multimodel_dump(const std::filesystem::path& dir, const MultiModelDump& dump);
MultiModelDump read_multimodel_dump(const std::filesystem::path& dir);

}  // namespace kgbench
