#include "grafcat/etale.hpp"

#include <algorithm>

namespace grafcat {

namespace {

template <class Set>
bool map_total_into(const std::map<Id, Id>& m, const Set& dom, const Set& cod) {
  if (m.size() != dom.size()) return false;
  for (const auto& [k, v] : m)
    if (!dom.contains(k) || !cod.contains(v)) return false;
  return true;
}

Id fresh_label(Id base, const std::set<Id>& used) {
  do base += "^";
  while (used.contains(base));
  return base;
}

}  // namespace

ValidationReport validate_etale(const EtaleMorphism& m) {
  ValidationReport r;
  r.merge(validate_graph(m.source), "source: ");
  r.merge(validate_graph(m.target), "target: ");
  if (!r) return r;
  if (!map_total_into(m.arc_map, m.source.arcs, m.target.arcs)) r.add("arc map not total into target arcs");
  if (!map_total_into(m.flag_map, m.source.flags, m.target.flags)) r.add("flag map not total into target flags");
  if (!map_total_into(m.vertex_map, m.source.vertices, m.target.vertices))
    r.add("vertex map not total into target vertices");
  if (!r) return r;

  for (const auto& a : m.source.arcs)
    if (m.arc_map.at(m.source.inv(a)) != m.target.inv(m.arc_map.at(a)))
      r.add("involution: arc map does not commute with i at '" + a + "'");
  for (const auto& h : m.source.flags) {
    const Id& h2 = m.flag_map.at(h);
    if (m.arc_map.at(m.source.arc_of(h)) != m.target.arc_of(h2))
      r.add("left square: s does not commute at flag '" + h + "'");
    if (m.vertex_map.at(m.source.vertex_of(h)) != m.target.vertex_of(h2))
      r.add("right square: p does not commute at flag '" + h + "'");
  }
  for (const auto& v : m.source.vertices) {
    std::set<Id> image;
    for (const auto& h : m.source.flags_at(v)) image.insert(m.flag_map.at(h));
    auto at_target = m.target.flags_at(m.vertex_map.at(v));
    if (image != std::set<Id>(at_target.begin(), at_target.end()) || image.size() != m.source.valence(v))
      r.add("pullback: flags at vertex '" + v + "' do not biject onto flags at its image");
  }
  return r;
}

EtaleMorphism identity_etale(const JKGraph& g) {
  auto id = identity_iso(g);
  return {g, g, id.arcs, id.flags, id.vertices};
}

EtaleMorphism compose_etale(const EtaleMorphism& first, const EtaleMorphism& second) {
  if (first.target != second.source) throw Error("compose_etale: endpoint mismatch");
  EtaleMorphism out{first.source, second.target, {}, {}, {}};
  for (const auto& [k, v] : first.arc_map) out.arc_map[k] = second.arc_map.at(v);
  for (const auto& [k, v] : first.flag_map) out.flag_map[k] = second.flag_map.at(v);
  for (const auto& [k, v] : first.vertex_map) out.vertex_map[k] = second.vertex_map.at(v);
  return out;
}

bool is_levelwise_bijective(const EtaleMorphism& m) {
  auto bij = [](const std::map<Id, Id>& f, std::size_t cod) {
    std::set<Id> img;
    for (const auto& [k, v] : f) img.insert(v);
    return img.size() == f.size() && img.size() == cod;
  };
  return bij(m.arc_map, m.target.arcs.size()) && bij(m.flag_map, m.target.flags.size()) &&
         bij(m.vertex_map, m.target.vertices.size());
}

EtaleMorphism iso_as_etale(const JKGraph& source, const JKGraph& target, const GraphIso& iso) {
  return {source, target, iso.arcs, iso.flags, iso.vertices};
}

Inclusion open_subgraph(const JKGraph& g, const std::set<Id>& vertices) {
  if (vertices.empty()) throw Error("open_subgraph: empty vertex set");
  JKGraph sub;
  for (const auto& v : vertices) {
    if (!g.vertices.contains(v)) throw Error("open_subgraph: unknown vertex '" + v + "'");
    sub.vertices.insert(v);
  }
  for (const auto& [h, v] : g.incidence) {
    if (!vertices.contains(v)) continue;
    const Id& a = g.arc_of(h);
    const Id& b = g.inv(a);
    sub.flags.insert(h);
    sub.incidence[h] = v;
    sub.embed[h] = a;
    sub.arcs.insert(a);
    sub.arcs.insert(b);
    sub.involution[a] = b;
    sub.involution[b] = a;
  }
  auto id = identity_iso(sub);
  return {sub, EtaleMorphism{sub, g, id.arcs, id.flags, id.vertices}};
}

Inclusion glue_ports(const JKGraph& g, const Id& a, const Id& b) {
  auto ps = ports(g);
  if (!ps.contains(a)) throw Error("glue_ports: '" + a + "' is not a port");
  if (!ps.contains(b)) throw Error("glue_ports: '" + b + "' is not a port");
  if (g.inv(a) == b || a == b) throw Error("glue_ports: ports lie on the same edge");
  if (ps.contains(g.inv(a)) || ps.contains(g.inv(b))) throw Error("glue_ports: isolated edge");
  auto q = coequalise(g, {{a, g.inv(b)}, {g.inv(a), b}});
  auto id = identity_iso(g);
  return {q.graph, EtaleMorphism{g, q.graph, q.arc_map, id.flags, id.vertices}};
}

bool is_covering_family(const std::vector<EtaleMorphism>& family) {
  if (family.empty()) return false;
  const JKGraph& x = family.front().target;
  std::set<Edge> hit_edges;
  std::set<Id> hit_vertices;
  for (const auto& m : family) {
    if (m.target != x || !validate_etale(m)) return false;
    for (const auto& [a, b] : m.arc_map) hit_edges.insert(Edge::of(x, b));
    for (const auto& [v, w] : m.vertex_map) hit_vertices.insert(w);
  }
  return hit_edges.size() == edges(x).size() && hit_vertices == x.vertices;
}

EtaleMorphism sum_family(const std::vector<EtaleMorphism>& family) {
  if (family.empty()) throw Error("sum_family: empty family");
  EtaleMorphism out;
  out.target = family.front().target;
  for (std::size_t k = 0; k < family.size(); ++k) {
    const auto& m = family[k];
    if (m.target != out.target) throw Error("sum_family: members have different targets");
    auto [piece, ren] = prefixed(m.source, std::to_string(k) + ".");
    JKGraph& s = out.source;
    s.arcs.insert(piece.arcs.begin(), piece.arcs.end());
    s.involution.insert(piece.involution.begin(), piece.involution.end());
    s.flags.insert(piece.flags.begin(), piece.flags.end());
    s.embed.insert(piece.embed.begin(), piece.embed.end());
    s.incidence.insert(piece.incidence.begin(), piece.incidence.end());
    s.vertices.insert(piece.vertices.begin(), piece.vertices.end());
    for (const auto& [a, b] : m.arc_map) out.arc_map[ren.arcs.at(a)] = b;
    for (const auto& [h, f] : m.flag_map) out.flag_map[ren.flags.at(h)] = f;
    for (const auto& [v, w] : m.vertex_map) out.vertex_map[ren.vertices.at(v)] = w;
  }
  return out;
}

ValidationReport validate_reduced_cover(const EtaleMorphism& m) {
  ValidationReport r = validate_etale(m);
  if (!r) return r;
  if (!isolated_edges(m.source).empty()) r.add("source has isolated edges");
  if (!isolated_edges(m.target).empty()) r.add("target has isolated edges");
  if (m.source.empty() != m.target.empty()) r.add("exactly one of source and target is empty");
  std::set<Id> vimg;
  for (const auto& [v, w] : m.vertex_map) vimg.insert(w);
  if (vimg.size() != m.vertex_map.size() || vimg != m.target.vertices) r.add("reduced: not bijective on vertices");
  std::set<Id> aimg;
  for (const auto& [a, b] : m.arc_map) aimg.insert(b);
  if (aimg != m.target.arcs) r.add("cover: not surjective on edges");
  return r;
}

bool is_reduced_cover(const EtaleMorphism& m) { return validate_reduced_cover(m).ok(); }

std::vector<Edge> glued_edges(const ReducedCover& m) {
  std::map<Id, std::size_t> preimages;
  for (const auto& [a, b] : m.arc_map) ++preimages[b];
  std::vector<Edge> out;
  for (const auto& e : inner_edges(m.target))
    if (preimages[e.first] == 2) out.push_back(e);
  return out;
}

std::vector<GluingStep> decompose_reduced_cover(const ReducedCover& m) {
  std::vector<GluingStep> steps;
  auto src_ports = ports(m.source);
  for (const auto& e : glued_edges(m)) {
    // Exactly two source ports lie over the edge; the one over e.second is
    // glued onto the flag arc over e.second.
    std::vector<Id> over;
    for (const auto& p : src_ports) {
      const Id& img = m.arc_map.at(p);
      if (e.contains(img)) over.push_back(p);
    }
    if (over.size() != 2) throw Error("decompose_reduced_cover: edge not glued from two ports");
    const Id& p_first = m.arc_map.at(over[0]) == e.first ? over[0] : over[1];
    const Id& p_second = p_first == over[0] ? over[1] : over[0];
    steps.push_back({p_second, p_first});
  }
  return steps;
}

Inclusion replay_gluings(const JKGraph& g, const std::vector<GluingStep>& steps) {
  Inclusion acc{g, identity_etale(g)};
  for (const auto& step : steps) {
    const Id& a = acc.inclusion.arc_map.at(step.a);
    const Id& b = acc.inclusion.arc_map.at(step.b);
    auto next = glue_ports(acc.graph, a, b);
    acc.inclusion = compose_etale(acc.inclusion, next.inclusion);
    acc.graph = next.graph;
  }
  return acc;
}

ReducedCover cut_inner_edges(const JKGraph& x, const std::vector<Edge>& cut) {
  auto inner = inner_edges(x);
  ReducedCover m = identity_etale(x);
  JKGraph& y = m.source;
  for (const auto& e : cut) {
    if (std::find(inner.begin(), inner.end(), e) == inner.end())
      throw Error("cut_inner_edges: '" + e.first + "' is not on an inner edge");
    // Each side keeps its flag arc and receives a fresh port lying over the
    // other side's flag arc.
    Id p1 = fresh_label(e.second, y.arcs);
    y.arcs.insert(p1);
    Id p2 = fresh_label(e.first, y.arcs);
    y.arcs.insert(p2);
    y.involution[e.first] = p1;
    y.involution[p1] = e.first;
    y.involution[e.second] = p2;
    y.involution[p2] = e.second;
    m.arc_map[p1] = e.second;
    m.arc_map[p2] = e.first;
  }
  return m;
}

std::vector<ReducedCover> reduced_covers_of(const JKGraph& x) {
  if (!is_effective(x)) throw Error("reduced_covers_of: graph is not effective");
  auto inner = inner_edges(x);
  if (inner.size() >= 20) throw Error("reduced_covers_of: too many inner edges");
  std::vector<ReducedCover> out;
  for (std::size_t bits = 0; bits < (std::size_t{1} << inner.size()); ++bits) {
    std::vector<Edge> cut;
    for (std::size_t k = 0; k < inner.size(); ++k)
      if ((bits >> k) & 1U) cut.push_back(inner[k]);
    out.push_back(cut_inner_edges(x, cut));
  }
  return out;
}

std::optional<GraphIso> comparison_over_source(const EtaleMorphism& m1, const EtaleMorphism& m2) {
  if (m1.source != m2.source) return std::nullopt;
  std::optional<GraphIso> found;
  for_each_isomorphism(m1.target, m2.target, [&](const GraphIso& phi) {
    for (const auto& [a, b] : m1.arc_map)
      if (phi.arcs.at(b) != m2.arc_map.at(a)) return true;
    for (const auto& [h, f] : m1.flag_map)
      if (phi.flags.at(f) != m2.flag_map.at(h)) return true;
    for (const auto& [v, w] : m1.vertex_map)
      if (phi.vertices.at(w) != m2.vertex_map.at(v)) return true;
    found = phi;
    return false;
  });
  return found;
}

}  // namespace grafcat
