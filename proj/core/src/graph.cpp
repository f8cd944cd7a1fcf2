#include "grafcat/graph.hpp"

#include <algorithm>
#include <numeric>

namespace grafcat {

namespace {

const Id& lookup(const std::map<Id, Id>& m, const Id& key, const char* what) {
  auto it = m.find(key);
  if (it == m.end()) throw Error(std::string("unknown ") + what + " '" + key + "'");
  return it->second;
}

// Plain union-find over a fixed label set; each class is named by its least
// member.
class LabelUnion {
 public:
  explicit LabelUnion(const std::set<Id>& labels) {
    for (const auto& l : labels) {
      index_.emplace(l, names_.size());
      names_.push_back(l);
    }
    parent_.resize(names_.size());
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(const Id& a, const Id& b) {
    auto ra = find(at(a));
    auto rb = find(at(b));
    if (ra == rb) return;
    // Keep the lexicographically least label as root.
    if (names_[rb] < names_[ra]) std::swap(ra, rb);
    parent_[rb] = ra;
  }

  const Id& name(const Id& a) { return names_[find(at(a))]; }

 private:
  std::size_t at(const Id& a) const {
    auto it = index_.find(a);
    if (it == index_.end()) throw Error("unknown arc '" + a + "' in identification");
    return it->second;
  }

  std::map<Id, std::size_t> index_;
  std::vector<Id> names_;
  std::vector<std::size_t> parent_;
};

}  // namespace

const Id& JKGraph::inv(const Id& arc) const { return lookup(involution, arc, "arc"); }
const Id& JKGraph::arc_of(const Id& flag) const { return lookup(embed, flag, "flag"); }
const Id& JKGraph::vertex_of(const Id& flag) const { return lookup(incidence, flag, "flag"); }

std::vector<Id> JKGraph::flags_at(const Id& v) const {
  std::vector<Id> out;
  for (const auto& [h, w] : incidence)
    if (w == v) out.push_back(h);
  return out;
}

std::size_t JKGraph::valence(const Id& v) const {
  std::size_t n = 0;
  for (const auto& [h, w] : incidence)
    if (w == v) ++n;
  return n;
}

std::optional<Id> JKGraph::flag_of_arc(const Id& arc) const {
  for (const auto& [h, a] : embed)
    if (a == arc) return h;
  return std::nullopt;
}

Edge Edge::of(const JKGraph& g, const Id& arc) {
  const Id& other = g.inv(arc);
  return arc < other ? Edge{arc, other} : Edge{other, arc};
}

ValidationReport validate_graph(const JKGraph& g) {
  ValidationReport r;
  for (const auto& a : g.arcs) {
    auto it = g.involution.find(a);
    if (it == g.involution.end()) {
      r.add("involution total: arc '" + a + "' has no involute");
      continue;
    }
    if (!g.arcs.contains(it->second)) {
      r.add("involution total: involute of '" + a + "' is not an arc");
      continue;
    }
    if (it->second == a) r.add("fixpoint-free: involution fixes arc '" + a + "'");
    auto back = g.involution.find(it->second);
    if (back != g.involution.end() && back->second != a)
      r.add("involution: i(i('" + a + "')) != '" + a + "'");
  }
  for (const auto& [a, b] : g.involution)
    if (!g.arcs.contains(a)) r.add("involution domain: '" + a + "' is not an arc");

  std::map<Id, Id> seen;
  for (const auto& h : g.flags) {
    auto s = g.embed.find(h);
    if (s == g.embed.end()) {
      r.add("s total: flag '" + h + "' has no arc");
    } else if (!g.arcs.contains(s->second)) {
      r.add("s total: arc of flag '" + h + "' is not an arc");
    } else if (auto [it, fresh] = seen.emplace(s->second, h); !fresh) {
      r.add("s injective: flags '" + it->second + "' and '" + h + "' share arc '" + s->second + "'");
    }
    auto p = g.incidence.find(h);
    if (p == g.incidence.end())
      r.add("p total: flag '" + h + "' has no vertex");
    else if (!g.vertices.contains(p->second))
      r.add("p total: vertex of flag '" + h + "' is not a vertex");
  }
  for (const auto& [h, a] : g.embed)
    if (!g.flags.contains(h)) r.add("s domain: '" + h + "' is not a flag");
  for (const auto& [h, v] : g.incidence)
    if (!g.flags.contains(h)) r.add("p domain: '" + h + "' is not a flag");
  return r;
}

void require_valid(const JKGraph& g) {
  auto r = validate_graph(g);
  if (!r) throw Error("invalid graph: " + r.str());
}

namespace {

std::set<Id> embed_image(const JKGraph& g) {
  std::set<Id> img;
  for (const auto& [h, a] : g.embed) img.insert(a);
  return img;
}

}  // namespace

std::vector<Edge> edges(const JKGraph& g) {
  std::set<Edge> out;
  for (const auto& a : g.arcs) out.insert(Edge::of(g, a));
  return {out.begin(), out.end()};
}

std::vector<Edge> inner_edges(const JKGraph& g) {
  auto img = embed_image(g);
  std::vector<Edge> out;
  for (const auto& e : edges(g))
    if (img.contains(e.first) && img.contains(e.second)) out.push_back(e);
  return out;
}

std::vector<Edge> isolated_edges(const JKGraph& g) {
  auto img = embed_image(g);
  std::vector<Edge> out;
  for (const auto& e : edges(g))
    if (!img.contains(e.first) && !img.contains(e.second)) out.push_back(e);
  return out;
}

std::set<Id> ports(const JKGraph& g) {
  auto img = embed_image(g);
  std::set<Id> out;
  for (const auto& a : g.arcs)
    if (!img.contains(a)) out.insert(a);
  return out;
}

std::set<Id> local_interface(const JKGraph& g, const Id& v) {
  if (!g.vertices.contains(v)) throw Error("unknown vertex '" + v + "'");
  std::set<Id> out;
  for (const auto& h : g.flags_at(v)) out.insert(g.inv(g.arc_of(h)));
  return out;
}

bool is_effective(const JKGraph& g) { return !g.empty() && isolated_edges(g).empty(); }

std::vector<JKGraph> components(const JKGraph& g) {
  // Vertices joined through inner edges; isolated edges are components of
  // their own.
  LabelUnion uf(g.vertices);
  for (const auto& e : inner_edges(g)) {
    auto h1 = g.flag_of_arc(e.first);
    auto h2 = g.flag_of_arc(e.second);
    uf.unite(g.vertex_of(*h1), g.vertex_of(*h2));
  }
  std::map<Id, std::set<Id>> classes;
  for (const auto& v : g.vertices) classes[uf.name(v)].insert(v);

  std::vector<JKGraph> out;
  for (const auto& [root, vs] : classes) {
    JKGraph c;
    c.vertices = vs;
    for (const auto& [h, v] : g.incidence) {
      if (!vs.contains(v)) continue;
      const Id& a = g.arc_of(h);
      const Id& b = g.inv(a);
      c.flags.insert(h);
      c.incidence[h] = v;
      c.embed[h] = a;
      c.arcs.insert(a);
      c.arcs.insert(b);
      c.involution[a] = b;
      c.involution[b] = a;
    }
    out.push_back(std::move(c));
  }
  for (const auto& e : isolated_edges(g)) {
    JKGraph c;
    c.arcs = {e.first, e.second};
    c.involution = {{e.first, e.second}, {e.second, e.first}};
    out.push_back(std::move(c));
  }
  return out;
}

bool is_connected(const JKGraph& g) { return components(g).size() == 1; }

bool is_elementary(const JKGraph& g) { return is_connected(g) && inner_edges(g).empty(); }

JKGraph unit_graph() {
  JKGraph g;
  g.arcs = {"u", "u*"};
  g.involution = {{"u", "u*"}, {"u*", "u"}};
  return g;
}

JKGraph corolla(const std::vector<Id>& port_labels) {
  JKGraph g;
  const Id v = "v";
  g.vertices.insert(v);
  for (const auto& p : port_labels) {
    Id f = p + "*";
    if (g.arcs.contains(p) || g.arcs.contains(f)) throw Error("corolla: duplicate port label '" + p + "'");
    g.arcs.insert(p);
    g.arcs.insert(f);
    g.involution[p] = f;
    g.involution[f] = p;
    g.flags.insert(f);
    g.embed[f] = f;
    g.incidence[f] = v;
  }
  return g;
}

JKGraph corolla(std::size_t n) {
  std::vector<Id> labels;
  for (std::size_t k = 1; k <= n; ++k) labels.push_back(std::to_string(k));
  return corolla(labels);
}

std::pair<JKGraph, GraphIso> prefixed(const JKGraph& g, const std::string& prefix) {
  GraphIso ren;
  for (const auto& a : g.arcs) ren.arcs[a] = prefix + a;
  for (const auto& h : g.flags) ren.flags[h] = prefix + h;
  for (const auto& v : g.vertices) ren.vertices[v] = prefix + v;
  return {relabel(g, ren), ren};
}

JKGraph relabel(const JKGraph& g, const GraphIso& ren) {
  JKGraph out;
  for (const auto& a : g.arcs) out.arcs.insert(lookup(ren.arcs, a, "arc"));
  for (const auto& [a, b] : g.involution) out.involution[lookup(ren.arcs, a, "arc")] = lookup(ren.arcs, b, "arc");
  for (const auto& h : g.flags) out.flags.insert(lookup(ren.flags, h, "flag"));
  for (const auto& [h, a] : g.embed) out.embed[lookup(ren.flags, h, "flag")] = lookup(ren.arcs, a, "arc");
  for (const auto& [h, v] : g.incidence)
    out.incidence[lookup(ren.flags, h, "flag")] = lookup(ren.vertices, v, "vertex");
  for (const auto& v : g.vertices) out.vertices.insert(lookup(ren.vertices, v, "vertex"));
  if (out.arcs.size() != g.arcs.size() || out.flags.size() != g.flags.size() ||
      out.vertices.size() != g.vertices.size())
    throw Error("relabel: renaming is not injective");
  return out;
}

Sum disjoint_union(const JKGraph& g1, const JKGraph& g2) {
  auto [l, lren] = prefixed(g1, "L.");
  auto [r, rren] = prefixed(g2, "R.");
  JKGraph u = l;
  u.arcs.insert(r.arcs.begin(), r.arcs.end());
  u.involution.insert(r.involution.begin(), r.involution.end());
  u.flags.insert(r.flags.begin(), r.flags.end());
  u.embed.insert(r.embed.begin(), r.embed.end());
  u.incidence.insert(r.incidence.begin(), r.incidence.end());
  u.vertices.insert(r.vertices.begin(), r.vertices.end());
  Sum s{u, EtaleMorphism{g1, u, lren.arcs, lren.flags, lren.vertices},
        EtaleMorphism{g2, u, rren.arcs, rren.flags, rren.vertices}};
  return s;
}

Quotient coequalise(const JKGraph& g, const std::vector<std::pair<Id, Id>>& identify) {
  LabelUnion uf(g.arcs);
  for (const auto& [a, b] : identify) uf.unite(a, b);

  Quotient q;
  for (const auto& a : g.arcs) q.arc_map[a] = uf.name(a);
  JKGraph& y = q.graph;
  y.vertices = g.vertices;
  y.flags = g.flags;
  y.incidence = g.incidence;
  for (const auto& a : g.arcs) y.arcs.insert(q.arc_map[a]);
  for (const auto& a : g.arcs) {
    const Id& ca = q.arc_map[a];
    const Id& cb = q.arc_map[g.inv(a)];
    auto [it, fresh] = y.involution.emplace(ca, cb);
    if (!fresh && it->second != cb)
      throw Error("coequaliser: involution not well defined on class '" + ca + "'");
    if (ca == cb) throw Error("coequaliser: class '" + ca + "' would be a fixpoint of the involution");
  }
  std::set<Id> used;
  for (const auto& [h, a] : g.embed) {
    const Id& c = q.arc_map[a];
    if (!used.insert(c).second) throw Error("coequaliser: two flags collapse onto arc '" + c + "'");
    y.embed[h] = c;
  }
  return q;
}

Recipe elements(const JKGraph& g) {
  Recipe r;
  std::map<Id, std::size_t> vindex;
  std::map<Id, Id> corolla_flag;  // graph flag -> corolla flag
  for (const auto& v : g.vertices) {
    VertexElement el;
    el.vertex = v;
    auto fl = g.flags_at(v);
    el.corolla = corolla(fl.size());
    for (std::size_t k = 0; k < fl.size(); ++k) {
      Id cf = std::to_string(k + 1) + "*";
      el.flag_to_graph[cf] = fl[k];
      corolla_flag[fl[k]] = cf;
    }
    vindex[v] = r.vertices.size();
    r.vertices.push_back(std::move(el));
  }
  for (const auto& e : edges(g)) {
    std::size_t k = r.edges.size();
    r.edges.push_back({e});
    for (int end = 0; end < 2; ++end) {
      const Id& arc = end == 0 ? e.first : e.second;
      if (auto h = g.flag_of_arc(arc))
        r.incidences.push_back({k, end, vindex.at(g.vertex_of(*h)), corolla_flag.at(*h)});
    }
  }
  return r;
}

JKGraph colimit(const Recipe& recipe) {
  JKGraph sum;
  auto absorb = [&sum](const JKGraph& piece) {
    sum.arcs.insert(piece.arcs.begin(), piece.arcs.end());
    sum.involution.insert(piece.involution.begin(), piece.involution.end());
    sum.flags.insert(piece.flags.begin(), piece.flags.end());
    sum.embed.insert(piece.embed.begin(), piece.embed.end());
    sum.incidence.insert(piece.incidence.begin(), piece.incidence.end());
    sum.vertices.insert(piece.vertices.begin(), piece.vertices.end());
  };
  std::vector<std::string> vprefix;
  for (std::size_t j = 0; j < recipe.vertices.size(); ++j) {
    vprefix.push_back("V" + std::to_string(j) + ".");
    absorb(prefixed(recipe.vertices[j].corolla, vprefix.back()).first);
  }
  for (std::size_t k = 0; k < recipe.edges.size(); ++k) {
    std::string p = "E" + std::to_string(k) + ".";
    JKGraph unit;
    unit.arcs = {p + "0", p + "1"};
    unit.involution = {{p + "0", p + "1"}, {p + "1", p + "0"}};
    absorb(unit);
  }
  std::vector<std::pair<Id, Id>> identify;
  for (const auto& inc : recipe.incidences) {
    const auto& el = recipe.vertices.at(inc.vertex_element);
    std::string p = "E" + std::to_string(inc.edge_element) + ".";
    const Id& out = el.corolla.arc_of(inc.corolla_flag);
    const Id& in = el.corolla.inv(out);
    identify.emplace_back(p + std::to_string(inc.end), vprefix[inc.vertex_element] + out);
    identify.emplace_back(p + std::to_string(1 - inc.end), vprefix[inc.vertex_element] + in);
  }
  return coequalise(sum, identify).graph;
}

// ---------------------------------------------------------------------------

namespace {

std::map<Id, Id> arc_owner(const JKGraph& g) {
  std::map<Id, Id> out;
  for (const auto& [h, a] : g.embed) out[a] = h;
  return out;
}

std::multiset<std::size_t> valences(const JKGraph& g) {
  std::multiset<std::size_t> out;
  for (const auto& v : g.vertices) out.insert(g.valence(v));
  return out;
}

class IsoSearch {
 public:
  IsoSearch(const JKGraph& g1, const JKGraph& g2, const std::function<bool(const GraphIso&)>& visit)
      : g1_(g1), g2_(g2), visit_(visit), owner1_(arc_owner(g1)), owner2_(arc_owner(g2)) {
    verts1_.assign(g1.vertices.begin(), g1.vertices.end());
    for (const auto& v : g1.vertices) flags1_[v] = g1.flags_at(v);
    for (const auto& v : g2.vertices) flags2_[v] = g2.flags_at(v);
    iso1_ = isolated_edges(g1);
    iso2_ = isolated_edges(g2);
  }

  void run() { assign_vertex(0); }

 private:
  bool partner_consistent(const Id& h1) const {
    const Id& h2 = fmap_.at(h1);
    auto p1 = owner1_.find(g1_.inv(g1_.arc_of(h1)));
    auto p2 = owner2_.find(g2_.inv(g2_.arc_of(h2)));
    if (p1 == owner1_.end()) return p2 == owner2_.end();
    if (p2 == owner2_.end()) return false;
    auto mapped = fmap_.find(p1->second);
    return mapped == fmap_.end() || mapped->second == p2->second;
  }

  void assign_vertex(std::size_t idx) {
    if (stop_) return;
    if (idx == verts1_.size()) {
      finish();
      return;
    }
    const Id& v = verts1_[idx];
    const auto& fl1 = flags1_.at(v);
    for (const auto& w : g2_.vertices) {
      if (used_.contains(w)) continue;
      auto fl2 = flags2_.at(w);
      if (fl2.size() != fl1.size()) continue;
      used_.insert(w);
      vmap_[v] = w;
      do {
        for (std::size_t k = 0; k < fl1.size(); ++k) fmap_[fl1[k]] = fl2[k];
        bool ok = true;
        for (const auto& h : fl1)
          if (!partner_consistent(h)) {
            ok = false;
            break;
          }
        if (ok) assign_vertex(idx + 1);
        for (const auto& h : fl1) fmap_.erase(h);
        if (stop_) break;
      } while (std::next_permutation(fl2.begin(), fl2.end()));
      vmap_.erase(v);
      used_.erase(w);
      if (stop_) return;
    }
  }

  void finish() {
    GraphIso iso;
    iso.vertices = vmap_;
    iso.flags = fmap_;
    for (const auto& [h1, h2] : fmap_) {
      const Id& a1 = g1_.arc_of(h1);
      const Id& a2 = g2_.arc_of(h2);
      iso.arcs[a1] = a2;
      const Id& b1 = g1_.inv(a1);
      if (!owner1_.contains(b1)) iso.arcs[b1] = g2_.inv(a2);
    }
    if (iso1_.empty()) {
      stop_ = !visit_(iso);
      return;
    }
    std::vector<std::size_t> perm(iso2_.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    const std::size_t k = iso1_.size();
    do {
      for (std::size_t bits = 0; bits < (std::size_t{1} << k); ++bits) {
        GraphIso full = iso;
        for (std::size_t e = 0; e < k; ++e) {
          const Edge& src = iso1_[e];
          const Edge& dst = iso2_[perm[e]];
          bool flip = (bits >> e) & 1U;
          full.arcs[src.first] = flip ? dst.second : dst.first;
          full.arcs[src.second] = flip ? dst.first : dst.second;
        }
        if (!visit_(full)) {
          stop_ = true;
          return;
        }
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  const JKGraph& g1_;
  const JKGraph& g2_;
  const std::function<bool(const GraphIso&)>& visit_;
  std::map<Id, Id> owner1_, owner2_;
  std::vector<Id> verts1_;
  std::map<Id, std::vector<Id>> flags1_, flags2_;
  std::vector<Edge> iso1_, iso2_;
  std::map<Id, Id> vmap_, fmap_;
  std::set<Id> used_;
  bool stop_ = false;
};

}  // namespace

void for_each_isomorphism(const JKGraph& g1, const JKGraph& g2,
                          const std::function<bool(const GraphIso&)>& visit) {
  if (g1.arcs.size() != g2.arcs.size() || g1.flags.size() != g2.flags.size() ||
      g1.vertices.size() != g2.vertices.size())
    return;
  if (valences(g1) != valences(g2)) return;
  if (isolated_edges(g1).size() != isolated_edges(g2).size()) return;
  if (inner_edges(g1).size() != inner_edges(g2).size()) return;
  IsoSearch(g1, g2, visit).run();
}

std::vector<GraphIso> find_isomorphisms(const JKGraph& g1, const JKGraph& g2) {
  std::vector<GraphIso> out;
  for_each_isomorphism(g1, g2, [&out](const GraphIso& iso) {
    out.push_back(iso);
    return true;
  });
  return out;
}

bool is_isomorphic(const JKGraph& g1, const JKGraph& g2) {
  bool found = false;
  for_each_isomorphism(g1, g2, [&found](const GraphIso&) {
    found = true;
    return false;
  });
  return found;
}

GraphIso identity_iso(const JKGraph& g) {
  GraphIso iso;
  for (const auto& a : g.arcs) iso.arcs[a] = a;
  for (const auto& h : g.flags) iso.flags[h] = h;
  for (const auto& v : g.vertices) iso.vertices[v] = v;
  return iso;
}

}  // namespace grafcat
