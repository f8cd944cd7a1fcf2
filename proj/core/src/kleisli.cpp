#include "grafcat/kleisli.hpp"

#include <algorithm>
#include <numeric>

namespace grafcat {

namespace {

Id fresh_label(Id base, const std::set<Id>& used) {
  do base += "^";
  while (used.contains(base));
  return base;
}

void merge_into(JKGraph& dst, const JKGraph& src) {
  dst.arcs.insert(src.arcs.begin(), src.arcs.end());
  dst.involution.insert(src.involution.begin(), src.involution.end());
  dst.flags.insert(src.flags.begin(), src.flags.end());
  dst.embed.insert(src.embed.begin(), src.embed.end());
  dst.incidence.insert(src.incidence.begin(), src.incidence.end());
  dst.vertices.insert(src.vertices.begin(), src.vertices.end());
}

std::set<Id> image_flags_at(const Refinement& r, const Id& x) {
  std::set<Id> out;
  for (const auto& h : r.source.flags_at(x)) out.insert(r.flag_map.at(h));
  return out;
}

}  // namespace

FlaggedSubgraphRef flagged_ref(const Refinement& r, const Id& flag) {
  return {{r.vertex_map.at(r.source.vertex_of(flag))}, r.flag_map.at(flag)};
}

ValidationReport validate_refinement(const Refinement& r) {
  ValidationReport rep;
  rep.merge(validate_graph(r.source), "source: ");
  rep.merge(validate_graph(r.target), "target: ");
  if (!rep) return rep;
  const JKGraph& R = r.source;
  const JKGraph& S = r.target;
  if (!isolated_edges(R).empty()) rep.add("source has isolated edges");
  if (!isolated_edges(S).empty()) rep.add("target has isolated edges");

  // Vertex level: the pieces partition V_S.
  std::map<Id, Id> owner;  // S vertex -> R vertex
  for (const auto& [x, w] : r.vertex_map) {
    if (!R.vertices.contains(x)) rep.add("vertex map: '" + x + "' is not a source vertex");
    if (w.empty()) rep.add("vertex map: subgraph of '" + x + "' is empty (not effective)");
    for (const auto& v : w) {
      if (!S.vertices.contains(v)) {
        rep.add("vertex map: '" + v + "' is not a target vertex");
      } else if (!owner.emplace(v, x).second) {
        rep.add("covering family: vertex '" + v + "' lies in two subgraphs");
      }
    }
  }
  for (const auto& x : R.vertices)
    if (!r.vertex_map.contains(x)) rep.add("vertex map: undefined on '" + x + "'");
  for (const auto& v : S.vertices)
    if (!owner.contains(v)) rep.add("covering family: vertex '" + v + "' is not covered");

  // Flag level.
  std::set<Id> image;
  for (const auto& [h, f] : r.flag_map) {
    if (!R.flags.contains(h)) {
      rep.add("flag map: '" + h + "' is not a source flag");
      continue;
    }
    if (!S.flags.contains(f)) {
      rep.add("flag map: '" + f + "' is not a target flag");
      continue;
    }
    if (!image.insert(f).second) rep.add("flag map: not injective at '" + f + "'");
    auto it = owner.find(S.vertex_of(f));
    if (it == owner.end() || it->second != R.vertex_of(h))
      rep.add("right square: outer flag '" + f + "' of '" + h + "' lies outside its subgraph");
  }
  for (const auto& h : R.flags)
    if (!r.flag_map.contains(h)) rep.add("flag map: undefined on '" + h + "'");

  // Arc level.
  for (const auto& [a, b] : r.arc_map)
    if (!R.arcs.contains(a) || !S.arcs.contains(b)) rep.add("arc map: entry '" + a + "' out of range");
  for (const auto& a : R.arcs)
    if (!r.arc_map.contains(a)) rep.add("arc map: undefined on '" + a + "'");
  if (!rep) return rep;

  for (const auto& h : R.flags)
    if (r.arc_map.at(R.arc_of(h)) != S.arc_of(r.flag_map.at(h)))
      rep.add("left square: s does not commute at flag '" + h + "'");
  for (const auto& a : R.arcs)
    if (r.arc_map.at(R.inv(a)) != S.inv(r.arc_map.at(a)))
      rep.add("involution: arc map does not commute with i at '" + a + "'");

  // Outer flags: every flag of a piece not chosen as an outer flag must be
  // joined to another such flag of the same piece.
  for (const auto& f : S.flags) {
    if (image.contains(f) || !owner.contains(S.vertex_of(f))) continue;
    auto partner = S.flag_of_arc(S.inv(S.arc_of(f)));
    if (!partner || image.contains(*partner) || owner.at(S.vertex_of(*partner)) != owner.at(S.vertex_of(f)))
      rep.add("outer flags: flag '" + f + "' leaves its subgraph but is not an outer flag");
  }

  std::set<Id> port_image;
  auto s_ports = ports(S);
  for (const auto& a : ports(R)) {
    const Id& b = r.arc_map.at(a);
    if (!s_ports.contains(b) || !port_image.insert(b).second) rep.add("ports: arc map not bijective on ports at '" + a + "'");
  }
  if (port_image.size() != s_ports.size()) rep.add("ports: arc map not surjective on ports");
  return rep;
}

Refinement identity_refinement(const JKGraph& g) {
  Refinement r{g, g, {}, {}, {}};
  for (const auto& a : g.arcs) r.arc_map[a] = a;
  for (const auto& h : g.flags) r.flag_map[h] = h;
  for (const auto& v : g.vertices) r.vertex_map[v] = {v};
  return r;
}

Piece piece_of(const Refinement& r, const Id& x) {
  const JKGraph& S = r.target;
  const auto& w = r.vertex_map.at(x);
  auto outer = image_flags_at(r, x);
  Piece out;
  JKGraph& p = out.graph;
  p.vertices = w;
  std::set<Id> used = S.arcs;
  std::map<Id, Id> port_of_flag;
  for (const auto& v : w)
    for (const auto& f : S.flags_at(v)) {
      p.flags.insert(f);
      p.incidence[f] = v;
      p.embed[f] = S.arc_of(f);
      p.arcs.insert(S.arc_of(f));
    }
  for (const auto& f : p.flags) {
    const Id& a = S.arc_of(f);
    if (outer.contains(f)) {
      Id q = fresh_label(a, used);
      used.insert(q);
      p.arcs.insert(q);
      p.involution[a] = q;
      p.involution[q] = a;
      port_of_flag[f] = q;
      out.into_target.arc_map[q] = S.inv(a);
    } else {
      p.involution[a] = S.inv(a);
      p.involution[S.inv(a)] = a;
      p.arcs.insert(S.inv(a));
    }
    out.into_target.arc_map[a] = a;
    out.into_target.flag_map[f] = f;
  }
  for (const auto& v : w) out.into_target.vertex_map[v] = v;
  out.into_target.source = p;
  out.into_target.target = S;
  for (const auto& h : r.source.flags_at(x))
    out.interface[r.source.inv(r.source.arc_of(h))] = port_of_flag.at(r.flag_map.at(h));
  return out;
}

Refined refine(const JKGraph& r, const std::map<Id, Substitution>& assignment) {
  require_valid(r);
  if (!isolated_edges(r).empty()) throw Error("refine: graph has isolated edges");
  for (const auto& [x, sub] : assignment)
    if (!r.vertices.contains(x)) throw Error("refine: '" + x + "' is not a vertex");

  JKGraph S;
  Refinement ref;
  std::map<Id, Id> flag_arc;  // R flag -> arc of its image flag in S
  std::set<Id> dropped;       // piece ports, replaced by the gluing
  for (const auto& x : r.vertices) {
    auto it = assignment.find(x);
    if (it == assignment.end()) throw Error("refine: no substitution for vertex '" + x + "'");
    const Substitution& sub = it->second;
    require_valid(sub.graph);
    if (sub.graph.vertices.empty() && !sub.graph.arcs.empty())
      throw Error("refine: the unit graph cannot be substituted for vertex '" + x + "'");
    if (!is_effective(sub.graph)) throw Error("refine: substitution for '" + x + "' is not effective");
    auto li = local_interface(r, x);
    auto sp = ports(sub.graph);
    std::set<Id> keys, vals;
    for (const auto& [a, q] : sub.interface) {
      keys.insert(a);
      vals.insert(q);
    }
    if (keys != li || vals != sp || vals.size() != sub.interface.size())
      throw Error("refine: interface mismatch at vertex '" + x + "'");

    auto [piece, ren] = prefixed(sub.graph, x + ".");
    merge_into(S, piece);
    std::set<Id> w;
    for (const auto& v : sub.graph.vertices) w.insert(ren.vertices.at(v));
    ref.vertex_map[x] = w;
    for (const auto& h : r.flags_at(x)) {
      const Id& q = ren.arcs.at(sub.interface.at(r.inv(r.arc_of(h))));
      const Id& fa = piece.inv(q);
      auto img = piece.flag_of_arc(fa);
      if (!img) throw Error("refine: substitution for '" + x + "' has an isolated edge");
      ref.flag_map[h] = *img;
      flag_arc[h] = fa;
      dropped.insert(q);
    }
  }
  for (const auto& q : dropped) {
    S.arcs.erase(q);
    S.involution.erase(q);
  }
  for (const auto& [h, fa] : flag_arc) {
    const Id& partner = r.inv(r.arc_of(h));
    ref.arc_map[r.arc_of(h)] = fa;
    if (auto h2 = r.flag_of_arc(partner)) {
      S.involution[fa] = flag_arc.at(*h2);
    } else {
      if (S.arcs.contains(partner)) throw Error("refine: port label '" + partner + "' clashes with a piece label");
      S.arcs.insert(partner);
      S.involution[fa] = partner;
      S.involution[partner] = fa;
      ref.arc_map[partner] = partner;
    }
  }
  ref.source = r;
  ref.target = S;
  auto rep = validate_refinement(ref);
  if (!rep) throw Error("refine: result is not a refinement: " + rep.str());
  return {S, ref};
}

Refinement compose_refinements(const Refinement& r1, const Refinement& r2) {
  if (r1.target != r2.source) throw Error("compose_refinements: endpoint mismatch");
  Refinement out{r1.source, r2.target, {}, {}, {}};
  for (const auto& [a, b] : r1.arc_map) out.arc_map[a] = r2.arc_map.at(b);
  for (const auto& [h, f] : r1.flag_map) out.flag_map[h] = r2.flag_map.at(f);
  for (const auto& [x, w] : r1.vertex_map) {
    std::set<Id>& acc = out.vertex_map[x];
    for (const auto& y : w) {
      const auto& w2 = r2.vertex_map.at(y);
      acc.insert(w2.begin(), w2.end());
    }
  }
  return out;
}

std::optional<GraphIso> refinement_comparison(const Refinement& r1, const Refinement& r2) {
  if (r1.target != r2.target) return std::nullopt;
  std::optional<GraphIso> found;
  for_each_isomorphism(r1.source, r2.source, [&](const GraphIso& phi) {
    for (const auto& [a, b] : r1.arc_map)
      if (r2.arc_map.at(phi.arcs.at(a)) != b) return true;
    for (const auto& [h, f] : r1.flag_map)
      if (r2.flag_map.at(phi.flags.at(h)) != f) return true;
    for (const auto& [x, w] : r1.vertex_map)
      if (r2.vertex_map.at(phi.vertices.at(x)) != w) return true;
    found = phi;
    return false;
  });
  return found;
}

bool refinements_equivalent(const Refinement& r1, const Refinement& r2) {
  return refinement_comparison(r1, r2).has_value();
}

Refinement transport_target(const Refinement& r, const JKGraph& new_target, const GraphIso& iso) {
  Refinement out{r.source, new_target, {}, {}, {}};
  for (const auto& [a, b] : r.arc_map) out.arc_map[a] = iso.arcs.at(b);
  for (const auto& [h, f] : r.flag_map) out.flag_map[h] = iso.flags.at(f);
  for (const auto& [x, w] : r.vertex_map)
    for (const auto& v : w) out.vertex_map[x].insert(iso.vertices.at(v));
  return out;
}

// ---------------------------------------------------------------------------

CoveringFamily refinement_to_cover(const Refinement& r) {
  CoveringFamily out;
  ReducedCover& m = out.cover;
  m.target = r.target;
  for (const auto& x : r.source.vertices) {
    Piece piece = piece_of(r, x);
    auto [copy, ren] = prefixed(piece.graph, x + ".");
    merge_into(m.source, copy);
    for (const auto& [a, b] : piece.into_target.arc_map) m.arc_map[ren.arcs.at(a)] = b;
    for (const auto& [h, f] : piece.into_target.flag_map) m.flag_map[ren.flags.at(h)] = f;
    for (const auto& [v, w] : piece.into_target.vertex_map) {
      m.vertex_map[ren.vertices.at(v)] = w;
      out.members[x].insert(ren.vertices.at(v));
    }
  }
  return out;
}

Refinement cover_to_refinement(const CoveringFamily& family) {
  const ReducedCover& m = family.cover;
  const JKGraph& Y = m.source;
  const JKGraph& S = m.target;
  std::map<Id, Id> member_of;
  for (const auto& [name, vs] : family.members)
    for (const auto& v : vs)
      if (!member_of.emplace(v, name).second) throw Error("cover_to_refinement: members overlap at '" + v + "'");
  if (member_of.size() != Y.vertices.size()) throw Error("cover_to_refinement: members do not partition the vertices");
  for (const auto& e : inner_edges(Y))
    if (member_of.at(Y.vertex_of(*Y.flag_of_arc(e.first))) != member_of.at(Y.vertex_of(*Y.flag_of_arc(e.second))))
      throw Error("cover_to_refinement: an inner edge joins two members");

  Refinement r;
  JKGraph& R = r.source;
  r.target = S;
  auto y_ports = ports(Y);
  for (const auto& h : Y.flags) {
    if (!y_ports.contains(Y.inv(Y.arc_of(h)))) continue;
    const Id& f = m.flag_map.at(h);
    const Id& name = member_of.at(Y.vertex_of(h));
    R.flags.insert(f);
    R.embed[f] = S.arc_of(f);
    R.incidence[f] = name;
    R.arcs.insert(S.arc_of(f));
    R.arcs.insert(S.inv(S.arc_of(f)));
  }
  for (const auto& a : R.arcs) R.involution[a] = S.inv(a);
  for (const auto& [name, vs] : family.members) {
    R.vertices.insert(name);
    auto& w = r.vertex_map[name];
    for (const auto& v : vs) w.insert(m.vertex_map.at(v));
  }
  for (const auto& a : R.arcs) r.arc_map[a] = a;
  for (const auto& f : R.flags) r.flag_map[f] = f;
  return r;
}

Refinement cover_to_refinement(const ReducedCover& cover) {
  CoveringFamily family{cover, {}};
  for (const auto& c : components(cover.source)) family.members[*c.vertices.begin()] = c.vertices;
  return cover_to_refinement(family);
}

std::optional<GraphIso> cover_comparison(const EtaleMorphism& m1, const EtaleMorphism& m2) {
  if (m1.target != m2.target) return std::nullopt;
  std::optional<GraphIso> found;
  for_each_isomorphism(m1.source, m2.source, [&](const GraphIso& phi) {
    for (const auto& [a, b] : m1.arc_map)
      if (m2.arc_map.at(phi.arcs.at(a)) != b) return true;
    for (const auto& [h, f] : m1.flag_map)
      if (m2.flag_map.at(phi.flags.at(h)) != f) return true;
    for (const auto& [v, w] : m1.vertex_map)
      if (m2.vertex_map.at(phi.vertices.at(v)) != w) return true;
    found = phi;
    return false;
  });
  return found;
}

// ---------------------------------------------------------------------------

GenRcPushout pushout_gen_rc(const Refinement& gen, const ReducedCover& rc, const std::vector<std::size_t>& order) {
  if (gen.source != rc.source) throw Error("pushout_gen_rc: the legs have different sources");
  auto steps = decompose_reduced_cover(rc);
  if (!order.empty()) {
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> expect(steps.size());
    std::iota(expect.begin(), expect.end(), 0);
    if (sorted != expect) throw Error("pushout_gen_rc: order is not a permutation of the gluing steps");
    std::vector<GluingStep> permuted;
    for (auto k : order) permuted.push_back(steps[k]);
    steps = permuted;
  }
  // Refinements preserve ports, so each gluing of R has a counterpart in S.
  std::vector<GluingStep> moved;
  for (const auto& st : steps) moved.push_back({gen.arc_map.at(st.a), gen.arc_map.at(st.b)});
  Inclusion glued = replay_gluings(gen.target, moved);

  GenRcPushout out;
  out.cover = glued.inclusion;
  Refinement& g = out.generic;
  g.source = rc.target;
  g.target = glued.graph;
  for (const auto& [x, w] : gen.vertex_map) g.vertex_map[rc.vertex_map.at(x)] = w;
  for (const auto& [h, f] : gen.flag_map) g.flag_map[rc.flag_map.at(h)] = glued.inclusion.flag_map.at(f);
  for (const auto& [a, b] : gen.arc_map) {
    const Id& image = glued.inclusion.arc_map.at(b);
    auto [it, fresh] = g.arc_map.emplace(rc.arc_map.at(a), image);
    if (!fresh && it->second != image) throw Error("pushout_gen_rc: arc map is not well defined");
  }
  return out;
}

// ---------------------------------------------------------------------------

KleisliMorphism kleisli_morphism(const Refinement& gen, const EtaleMorphism& free) {
  if (gen.target != free.source) throw Error("kleisli_morphism: endpoint mismatch");
  return {gen, free};
}

bool is_generic(const KleisliMorphism& k) { return is_levelwise_bijective(k.free); }

bool kleisli_equal(const KleisliMorphism& k1, const KleisliMorphism& k2) {
  if (k1.generic.source != k2.generic.source || k1.free.target != k2.free.target) return false;
  bool found = false;
  for_each_isomorphism(k1.generic.target, k2.generic.target, [&](const GraphIso& phi) {
    if (transport_target(k1.generic, k2.generic.target, phi) != k2.generic) return true;
    for (const auto& [a, b] : k1.free.arc_map)
      if (k2.free.arc_map.at(phi.arcs.at(a)) != b) return true;
    for (const auto& [h, f] : k1.free.flag_map)
      if (k2.free.flag_map.at(phi.flags.at(h)) != f) return true;
    for (const auto& [v, w] : k1.free.vertex_map)
      if (k2.free.vertex_map.at(phi.vertices.at(v)) != w) return true;
    found = true;
    return false;
  });
  return found;
}

KleisliMorphism precompose_refinement(const Refinement& r, const KleisliMorphism& k) {
  return {compose_refinements(r, k.generic), k.free};
}

KleisliMorphism precompose_cover(const ReducedCover& rc, const KleisliMorphism& k) {
  if (rc.target != k.generic.source) throw Error("precompose_cover: endpoint mismatch");
  const Refinement& g = k.generic;
  const JKGraph& U = g.target;
  std::vector<Edge> cut;
  for (const auto& e : glued_edges(rc)) cut.push_back(Edge::of(U, g.arc_map.at(e.first)));
  ReducedCover c = cut_inner_edges(U, cut);
  const JKGraph& Ut = c.source;
  const JKGraph& R = rc.source;

  Refinement out{R, Ut, {}, {}, {}};
  for (const auto& x : R.vertices) out.vertex_map[x] = g.vertex_map.at(rc.vertex_map.at(x));
  for (const auto& h : R.flags) {
    const Id& f = g.flag_map.at(rc.flag_map.at(h));
    out.flag_map[h] = f;
    out.arc_map[R.arc_of(h)] = Ut.arc_of(f);
    if (!R.flag_of_arc(R.inv(R.arc_of(h)))) out.arc_map[R.inv(R.arc_of(h))] = Ut.inv(Ut.arc_of(f));
  }
  return {out, compose_etale(c, k.free)};
}

}  // namespace grafcat
