#include "grafcat/json_io.hpp"

#include <fstream>
#include <sstream>

namespace grafcat {

namespace fs = std::filesystem;

namespace {

void expect_keys(const json& j, const std::string& what, std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) throw ParseError(what + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = key == "kind";
    for (const char* k : required) known = known || key == k;
    for (const char* k : optional) known = known || key == k;
    if (!known) throw ParseError(what + ": unknown key '" + key + "'");
  }
  for (const char* k : required)
    if (!j.contains(k)) throw ParseError(what + ": missing key '" + std::string(k) + "'");
}

std::string as_string(const json& j, const std::string& what) {
  if (!j.is_string()) throw ParseError(what + ": expected a string");
  return j.get<std::string>();
}

std::set<Id> string_set(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected an array of strings");
  std::set<Id> out;
  for (const auto& e : j)
    if (!out.insert(as_string(e, what)).second) throw ParseError(what + ": duplicate entry '" + e.get<std::string>() + "'");
  return out;
}

std::map<Id, Id> string_map(const json& j, const std::string& what) {
  if (!j.is_object()) throw ParseError(what + ": expected an object of strings");
  std::map<Id, Id> out;
  for (const auto& [k, v] : j.items()) out[k] = as_string(v, what + "." + k);
  return out;
}

// A nested value: either inline (optional matching "kind") or a file path.
std::pair<json, fs::path> resolve(const json& j, const std::string& expected, const fs::path& base,
                                  const std::string& what) {
  if (j.is_string()) {
    Document doc = load_document(base / j.get<std::string>());
    if (doc.kind != expected) throw ParseError(what + ": referenced file has kind '" + doc.kind + "', expected '" + expected + "'");
    return {doc.body, doc.base};
  }
  if (!j.is_object()) throw ParseError(what + ": expected an object or a file reference");
  if (j.contains("kind") && j.at("kind") != expected)
    throw ParseError(what + ": kind '" + j.at("kind").dump() + "' does not match '" + expected + "'");
  return {j, base};
}

json strings(const std::set<Id>& s) { return json(std::vector<Id>(s.begin(), s.end())); }

}  // namespace

Document parse_document(const std::string& text, const fs::path& base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ParseError("document has no \"kind\" string");
  return {j.at("kind").get<std::string>(), j, base};
}

Document load_document(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str(), path.parent_path());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

json to_json(const JKGraph& g) {
  json flags = json::object();
  for (const auto& h : g.flags) flags[h] = {{"arc", g.embed.at(h)}, {"vertex", g.incidence.at(h)}};
  return {{"kind", kind::jk_graph},
          {"arcs", strings(g.arcs)},
          {"involution", g.involution},
          {"flags", flags},
          {"vertices", strings(g.vertices)}};
}

JKGraph jk_graph_from_json(const json& in, const fs::path& base) {
  auto [j, b] = resolve(in, kind::jk_graph, base, "jk-graph");
  expect_keys(j, "jk-graph", {"arcs", "involution", "flags", "vertices"});
  JKGraph g;
  g.arcs = string_set(j.at("arcs"), "arcs");
  g.involution = string_map(j.at("involution"), "involution");
  g.vertices = string_set(j.at("vertices"), "vertices");
  if (!j.at("flags").is_object()) throw ParseError("flags: expected an object");
  for (const auto& [h, v] : j.at("flags").items()) {
    expect_keys(v, "flag '" + h + "'", {"arc", "vertex"});
    g.flags.insert(h);
    g.embed[h] = as_string(v.at("arc"), "flag arc");
    g.incidence[h] = as_string(v.at("vertex"), "flag vertex");
  }
  return g;
}

json to_json(const BMGraph& g) {
  return {{"kind", kind::bm_graph},
          {"vertices", strings(g.vertices)},
          {"flags", strings(g.flags)},
          {"boundary", g.boundary},
          {"involution", g.involution}};
}

BMGraph bm_graph_from_json(const json& in, const fs::path& base) {
  auto [j, b] = resolve(in, kind::bm_graph, base, "bm-graph");
  expect_keys(j, "bm-graph", {"vertices", "flags", "boundary", "involution"});
  return {string_set(j.at("vertices"), "vertices"), string_set(j.at("flags"), "flags"),
          string_map(j.at("boundary"), "boundary"), string_map(j.at("involution"), "involution")};
}

json to_json(const BMMorphism& h) {
  json s = to_json(h.source), t = to_json(h.target);
  s.erase("kind");
  t.erase("kind");
  return {{"kind", kind::bm_morphism},
          {"source", s},
          {"target", t},
          {"flag_map", h.flag_map},
          {"vertex_map", h.vertex_map},
          {"complement_involution", h.complement_involution}};
}

BMMorphism bm_morphism_from_json(const json& in, const fs::path& base) {
  auto [j, b] = resolve(in, kind::bm_morphism, base, "bm-morphism");
  expect_keys(j, "bm-morphism", {"source", "target", "flag_map", "vertex_map"}, {"complement_involution"});
  BMMorphism h{bm_graph_from_json(j.at("source"), b), bm_graph_from_json(j.at("target"), b),
               string_map(j.at("flag_map"), "flag_map"), string_map(j.at("vertex_map"), "vertex_map"), {}};
  if (j.contains("complement_involution"))
    h.complement_involution = string_map(j.at("complement_involution"), "complement_involution");
  return h;
}

json to_json(const EtaleMorphism& m) {
  json s = to_json(m.source), t = to_json(m.target);
  s.erase("kind");
  t.erase("kind");
  return {{"kind", kind::etale},     {"source", s},
          {"target", t},             {"arc_map", m.arc_map},
          {"flag_map", m.flag_map},  {"vertex_map", m.vertex_map}};
}

EtaleMorphism etale_from_json(const json& in, const fs::path& base) {
  auto [j, b] = resolve(in, kind::etale, base, "etale");
  expect_keys(j, "etale", {"source", "target", "arc_map", "flag_map", "vertex_map"});
  return {jk_graph_from_json(j.at("source"), b), jk_graph_from_json(j.at("target"), b),
          string_map(j.at("arc_map"), "arc_map"), string_map(j.at("flag_map"), "flag_map"),
          string_map(j.at("vertex_map"), "vertex_map")};
}

json to_json(const Refinement& r) {
  json s = to_json(r.source), t = to_json(r.target);
  s.erase("kind");
  t.erase("kind");
  json vmap = json::object(), fmap = json::object();
  for (const auto& [x, w] : r.vertex_map) vmap[x] = strings(w);
  for (const auto& [h, f] : r.flag_map)
    fmap[h] = {{"subgraph", strings(r.vertex_map.at(r.source.vertex_of(h)))}, {"outer_flag", f}};
  return {{"kind", kind::refinement}, {"source", s},       {"target", t},
          {"arc_map", r.arc_map},     {"vertex_map", vmap}, {"flag_map", fmap}};
}

Refinement refinement_from_json(const json& in, const fs::path& base) {
  auto [j, b] = resolve(in, kind::refinement, base, "refinement");
  expect_keys(j, "refinement", {"source", "target", "arc_map", "vertex_map", "flag_map"});
  Refinement r;
  r.source = jk_graph_from_json(j.at("source"), b);
  r.target = jk_graph_from_json(j.at("target"), b);
  r.arc_map = string_map(j.at("arc_map"), "arc_map");
  if (!j.at("vertex_map").is_object()) throw ParseError("vertex_map: expected an object");
  for (const auto& [x, w] : j.at("vertex_map").items()) r.vertex_map[x] = string_set(w, "vertex_map." + x);
  if (!j.at("flag_map").is_object()) throw ParseError("flag_map: expected an object");
  for (const auto& [h, v] : j.at("flag_map").items()) {
    expect_keys(v, "flag_map." + h, {"subgraph", "outer_flag"});
    r.flag_map[h] = as_string(v.at("outer_flag"), "outer_flag");
    auto sub = string_set(v.at("subgraph"), "subgraph");
    auto owner = r.source.incidence.find(h);
    if (owner == r.source.incidence.end() || !r.vertex_map.contains(owner->second) ||
        r.vertex_map.at(owner->second) != sub)
      throw ParseError("flag_map." + h + ": subgraph disagrees with the vertex map");
  }
  return r;
}

json to_json(const GraphCospan& c) {
  json l = to_json(c.left), r = to_json(c.right);
  return {{"kind", kind::cospan}, {"left", l}, {"right", r}};
}

GraphCospan cospan_from_json(const json& in, const fs::path& base) {
  auto [j, b] = resolve(in, kind::cospan, base, "cospan");
  expect_keys(j, "cospan", {"left", "right"});
  return {etale_from_json(j.at("left"), b), refinement_from_json(j.at("right"), b)};
}

json to_json(const GraphicalSpecies& f) {
  json ops = json::array();
  for (const auto& [name, op] : f.operations) ops.push_back({{"name", name}, {"arity", op.arity}, {"profile", op.profile}});
  json action = json::array();
  for (const auto& [key, result] : f.action) {
    std::vector<std::size_t> perm;
    for (auto k : key.second) perm.push_back(k + 1);
    action.push_back({{"operation", key.first}, {"permutation", perm}, {"result", result}});
  }
  return {{"kind", kind::species},
          {"colours", strings(f.colours)},
          {"colour_involution", f.colour_involution},
          {"operations", ops},
          {"action", action}};
}

GraphicalSpecies species_from_json(const json& in, const fs::path& base) {
  auto [j, b] = resolve(in, kind::species, base, "species");
  expect_keys(j, "species", {"colours", "colour_involution", "operations"}, {"action"});
  auto colours = string_set(j.at("colours"), "colours");
  auto inv = string_map(j.at("colour_involution"), "colour_involution");
  if (!j.at("operations").is_array()) throw ParseError("operations: expected an array");
  std::vector<Operation> ops;
  for (const auto& o : j.at("operations")) {
    expect_keys(o, "operation", {"name", "arity", "profile"});
    Operation op;
    op.name = as_string(o.at("name"), "operation name");
    if (!o.at("arity").is_number_unsigned()) throw ParseError("operation arity: expected a natural number");
    op.arity = o.at("arity").get<std::size_t>();
    if (!o.at("profile").is_array()) throw ParseError("operation profile: expected an array");
    for (const auto& c : o.at("profile")) op.profile.push_back(as_string(c, "profile colour"));
    ops.push_back(std::move(op));
  }
  try {
    if (!j.contains("action")) return free_species(colours, inv, ops);
    std::map<std::pair<Id, Permutation>, Id> action;
    if (!j.at("action").is_array()) throw ParseError("action: expected an array");
    for (const auto& e : j.at("action")) {
      expect_keys(e, "action entry", {"operation", "permutation", "result"});
      Permutation p;
      if (!e.at("permutation").is_array()) throw ParseError("permutation: expected an array");
      for (const auto& k : e.at("permutation")) {
        if (!k.is_number_unsigned() || k.get<std::size_t>() == 0) throw ParseError("permutation: expected 1-based indices");
        p.push_back(k.get<std::size_t>() - 1);
      }
      action[{as_string(e.at("operation"), "operation"), p}] = as_string(e.at("result"), "result");
    }
    return species_with_action(colours, inv, ops, action);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

json to_json(const DecoratedGraph& g) {
  json graph = to_json(g.graph);
  graph.erase("kind");
  json labels = json::object();
  for (const auto& [v, lab] : g.decoration.labels) labels[v] = {{"operation", lab.op}, {"slots", lab.slots}};
  return {{"kind", kind::decorated_graph}, {"graph", graph}, {"colouring", g.decoration.colouring}, {"labels", labels}};
}

DecoratedGraph decorated_graph_from_json(const json& in, const fs::path& base) {
  auto [j, b] = resolve(in, kind::decorated_graph, base, "decorated-graph");
  expect_keys(j, "decorated-graph", {"graph", "colouring", "labels"});
  DecoratedGraph g{jk_graph_from_json(j.at("graph"), b), {string_map(j.at("colouring"), "colouring"), {}}};
  if (!j.at("labels").is_object()) throw ParseError("labels: expected an object");
  for (const auto& [v, lab] : j.at("labels").items()) {
    expect_keys(lab, "label of '" + v + "'", {"operation", "slots"});
    VertexLabel l{as_string(lab.at("operation"), "operation"), {}};
    if (!lab.at("slots").is_array()) throw ParseError("slots: expected an array");
    for (const auto& s : lab.at("slots")) l.slots.push_back(as_string(s, "slot"));
    g.decoration.labels[v] = l;
  }
  return g;
}

json to_json(const HomCountRow& row) {
  json s = to_json(row.source), t = to_json(row.target);
  s.erase("kind");
  t.erase("kind");
  json out = {{"source", s},
              {"target", t},
              {"bm_count", row.bm_count},
              {"cospan_count", row.cospan_count},
              {"bijection_verified", row.bijection_verified}};
  if (!row.note.empty()) out["note"] = row.note;
  return out;
}

}  // namespace grafcat
