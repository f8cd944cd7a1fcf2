#include "grafcat/cospan.hpp"

namespace grafcat {

namespace {

std::map<Id, Id> inverse_of(const std::map<Id, Id>& m) {
  std::map<Id, Id> out;
  for (const auto& [k, v] : m) out[v] = k;
  return out;
}

// The apex map forced by the left legs: phi(left1(z)) = left2(z). Reduced
// covers are surjective on every level, so this is the only candidate.
std::optional<GraphIso> forced_apex_map(const ReducedCover& l1, const ReducedCover& l2) {
  GraphIso phi;
  auto push = [](std::map<Id, Id>& m, const Id& k, const Id& v) {
    auto [it, fresh] = m.emplace(k, v);
    return fresh || it->second == v;
  };
  for (const auto& [a, b] : l1.arc_map)
    if (!push(phi.arcs, b, l2.arc_map.at(a))) return std::nullopt;
  for (const auto& [h, f] : l1.flag_map)
    if (!push(phi.flags, f, l2.flag_map.at(h))) return std::nullopt;
  for (const auto& [v, w] : l1.vertex_map)
    if (!push(phi.vertices, w, l2.vertex_map.at(v))) return std::nullopt;
  return phi;
}

bool is_graph_iso(const JKGraph& a, const JKGraph& b, const GraphIso& phi) {
  auto bijective = [](const std::map<Id, Id>& m, const std::set<Id>& dom, const std::set<Id>& cod) {
    if (m.size() != dom.size() || dom.size() != cod.size()) return false;
    std::set<Id> img;
    for (const auto& [k, v] : m)
      if (!dom.contains(k) || !cod.contains(v)) return false;
      else img.insert(v);
    return img.size() == cod.size();
  };
  if (!bijective(phi.arcs, a.arcs, b.arcs) || !bijective(phi.flags, a.flags, b.flags) ||
      !bijective(phi.vertices, a.vertices, b.vertices))
    return false;
  for (const auto& x : a.arcs)
    if (phi.arcs.at(a.inv(x)) != b.inv(phi.arcs.at(x))) return false;
  for (const auto& h : a.flags) {
    if (phi.arcs.at(a.arc_of(h)) != b.arc_of(phi.flags.at(h))) return false;
    if (phi.vertices.at(a.vertex_of(h)) != b.vertex_of(phi.flags.at(h))) return false;
  }
  return true;
}

}  // namespace

ValidationReport validate_cospan(const GraphCospan& c) {
  ValidationReport r;
  r.merge(validate_reduced_cover(c.left), "left leg: ");
  r.merge(validate_refinement(c.right), "right leg: ");
  if (c.left.target != c.right.target) r.add("legs do not share the apex");
  return r;
}

GraphCospan identity_cospan(const JKGraph& g) { return {identity_etale(g), identity_refinement(g)}; }

GraphCospan compose_cospan(const GraphCospan& c1, const GraphCospan& c2) {
  if (c1.right.source != c2.left.source) throw Error("compose_cospan: foot mismatch");
  auto po = pushout_gen_rc(c1.right, c2.left);
  return {compose_etale(c1.left, po.cover), compose_refinements(c2.right, po.generic)};
}

std::vector<GraphIso> cospan_comparisons(const GraphCospan& c1, const GraphCospan& c2) {
  if (c1.left_foot() != c2.left_foot() || c1.right_foot() != c2.right_foot()) return {};
  auto phi = forced_apex_map(c1.left, c2.left);
  if (!phi || !is_graph_iso(c1.apex(), c2.apex(), *phi)) return {};
  if (transport_target(c1.right, c2.apex(), *phi) != c2.right) return {};
  return {*phi};
}

bool cospan_equal(const GraphCospan& c1, const GraphCospan& c2) { return !cospan_comparisons(c1, c2).empty(); }

CospanFactorisation cospan_factorise(const GraphCospan& c) {
  return {{c.left, identity_refinement(c.apex())}, {identity_etale(c.apex()), c.right}};
}

// ---------------------------------------------------------------------------

JKGraph phi1_graph(const BMGraph& g) {
  JKGraph out;
  out.vertices = g.vertices;
  out.flags = g.flags;
  for (const auto& f : g.flags) {
    out.embed[f] = f;
    out.incidence[f] = g.boundary.at(f);
    out.arcs.insert(f);
  }
  for (const auto& [f, j] : g.involution) {
    if (f != j) {
      out.involution[f] = j;
      continue;
    }
    Id copy = f + "^";
    if (g.flags.contains(copy)) throw Error("phi1_graph: tail copy '" + copy + "' clashes with a flag");
    out.arcs.insert(copy);
    out.involution[f] = copy;
    out.involution[copy] = f;
  }
  return out;
}

BMGraph phi1_graph_inv(const JKGraph& g) {
  if (!isolated_edges(g).empty()) throw Error("phi1_graph_inv: graph has isolated edges");
  BMGraph out{g.vertices, g.flags, g.incidence, {}};
  for (const auto& f : g.flags) {
    auto partner = g.flag_of_arc(g.inv(g.arc_of(f)));
    out.involution[f] = partner ? *partner : f;
  }
  return out;
}

ReducedCover phi1_mor(const BMMorphism& g) {
  if (!is_grafting(g)) throw Error("phi1_mor: not a grafting");
  ReducedCover m;
  m.source = phi1_graph(g.source);
  m.target = phi1_graph(g.target);
  auto to_target = inverse_of(g.flag_map);  // tau flag -> sigma flag
  m.vertex_map = g.vertex_map;
  for (const auto& [f, r] : to_target) {
    m.flag_map[f] = r;
    m.arc_map[f] = r;
    if (g.source.involution.at(f) == f) m.arc_map[m.source.inv(f)] = m.target.inv(r);
  }
  return m;
}

BMMorphism phi1_mor_inv(const ReducedCover& rc) {
  auto rep = validate_reduced_cover(rc);
  if (!rep) throw Error("phi1_mor_inv: not a reduced cover: " + rep.str());
  return {phi1_graph_inv(rc.source), phi1_graph_inv(rc.target), inverse_of(rc.flag_map), rc.vertex_map, {}};
}

Refinement phi2_mor(const BMMorphism& c) {
  if (!is_compression(c)) throw Error("phi2_mor: not a compression");
  Refinement r;
  r.source = phi1_graph(c.target);
  r.target = phi1_graph(c.source);
  for (const auto& x : c.target.vertices) r.vertex_map[x];
  for (const auto& [v, x] : c.vertex_map) r.vertex_map[x].insert(v);
  for (const auto& [rf, sf] : c.flag_map) {
    r.flag_map[rf] = sf;
    r.arc_map[rf] = sf;
    if (c.target.involution.at(rf) == rf) r.arc_map[r.source.inv(rf)] = r.target.inv(sf);
  }
  return r;
}

BMMorphism phi2_mor_inv(const Refinement& r) {
  auto rep = validate_refinement(r);
  if (!rep) throw Error("phi2_mor_inv: not a refinement: " + rep.str());
  BMMorphism c{phi1_graph_inv(r.target), phi1_graph_inv(r.source), r.flag_map, {}, {}};
  for (const auto& [x, w] : r.vertex_map)
    for (const auto& v : w) c.vertex_map[v] = x;
  std::set<Id> image;
  for (const auto& [h, f] : r.flag_map) image.insert(f);
  for (const auto& f : c.source.flags)
    if (!image.contains(f)) c.complement_involution[f] = c.source.involution.at(f);
  return c;
}

GraphCospan phi(const BMMorphism& h) {
  auto fac = factorise_bm(h);
  return {phi1_mor(fac.grafting), phi2_mor(fac.compression)};
}

BMMorphism phi_inv(const GraphCospan& c) { return compose_bm(phi1_mor_inv(c.left), phi2_mor_inv(c.right)); }

}  // namespace grafcat
