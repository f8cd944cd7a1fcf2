#pragma once

// JSON forms of every data type. Top-level documents carry a "kind"; nested
// objects may repeat it (it must then match). Unknown keys are rejected. A
// string in place of a nested graph is a path relative to the document.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "grafcat/bm.hpp"
#include "grafcat/cospan.hpp"
#include "grafcat/oracle.hpp"
#include "grafcat/species.hpp"

namespace grafcat {

using nlohmann::json;

/// Malformed JSON or a document of the wrong shape.
class ParseError : public Error {
 public:
  using Error::Error;
};

namespace kind {
inline constexpr const char* jk_graph = "jk-graph";
inline constexpr const char* bm_graph = "bm-graph";
inline constexpr const char* bm_morphism = "bm-morphism";
inline constexpr const char* etale = "etale";
inline constexpr const char* refinement = "refinement";
inline constexpr const char* cospan = "cospan";
inline constexpr const char* species = "species";
inline constexpr const char* decorated_graph = "decorated-graph";
}  // namespace kind

struct Document {
  std::string kind;
  json body;
  std::filesystem::path base;  // directory used to resolve file references
};

/// Throws ParseError on unreadable files, bad JSON or a missing "kind".
Document load_document(const std::filesystem::path& path);
Document parse_document(const std::string& text, const std::filesystem::path& base = {});

json to_json(const JKGraph& g);
json to_json(const BMGraph& g);
json to_json(const BMMorphism& h);
json to_json(const EtaleMorphism& m);
json to_json(const Refinement& r);
json to_json(const GraphCospan& c);
json to_json(const GraphicalSpecies& f);
json to_json(const DecoratedGraph& g);
json to_json(const HomCountRow& row);

JKGraph jk_graph_from_json(const json& j, const std::filesystem::path& base = {});
BMGraph bm_graph_from_json(const json& j, const std::filesystem::path& base = {});
BMMorphism bm_morphism_from_json(const json& j, const std::filesystem::path& base = {});
EtaleMorphism etale_from_json(const json& j, const std::filesystem::path& base = {});
Refinement refinement_from_json(const json& j, const std::filesystem::path& base = {});
GraphCospan cospan_from_json(const json& j, const std::filesystem::path& base = {});
GraphicalSpecies species_from_json(const json& j, const std::filesystem::path& base = {});
DecoratedGraph decorated_graph_from_json(const json& j, const std::filesystem::path& base = {});

/// Pretty-printed with a trailing newline; keys sorted, so output is stable.
std::string dump(const json& j);

}  // namespace grafcat
