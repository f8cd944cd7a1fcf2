#include "grafcat/bm.hpp"

#include <algorithm>
#include <functional>

namespace grafcat {

namespace {

std::set<Id> image_of(const std::map<Id, Id>& m) {
  std::set<Id> out;
  for (const auto& [k, v] : m) out.insert(v);
  return out;
}

std::map<Id, Id> inverse_of(const std::map<Id, Id>& m) {
  std::map<Id, Id> out;
  for (const auto& [k, v] : m) out[v] = k;
  return out;
}

std::vector<Id> flags_at(const BMGraph& g, const Id& v) {
  std::vector<Id> out;
  for (const auto& [f, w] : g.boundary)
    if (w == v) out.push_back(f);
  return out;
}

// Minimal union-find keyed by label.
struct Partition {
  std::map<Id, Id> parent;
  Id find(const Id& x) {
    auto it = parent.find(x);
    if (it == parent.end() || it->second == x) return x;
    Id root = find(it->second);
    parent[x] = root;
    return root;
  }
  void unite(const Id& a, const Id& b) {
    Id ra = find(a), rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
};

}  // namespace

ValidationReport validate_bm_graph(const BMGraph& g) {
  ValidationReport r;
  for (const auto& f : g.flags) {
    auto b = g.boundary.find(f);
    if (b == g.boundary.end())
      r.add("boundary total: flag '" + f + "' has no vertex");
    else if (!g.vertices.contains(b->second))
      r.add("boundary total: vertex of flag '" + f + "' is not a vertex");
    auto j = g.involution.find(f);
    if (j == g.involution.end()) {
      r.add("involution total: flag '" + f + "' has no involute");
    } else if (!g.flags.contains(j->second)) {
      r.add("involution total: involute of '" + f + "' is not a flag");
    } else if (g.involution.at(j->second) != f) {
      r.add("involution: j(j('" + f + "')) != '" + f + "'");
    }
  }
  for (const auto& [f, v] : g.boundary)
    if (!g.flags.contains(f)) r.add("boundary domain: '" + f + "' is not a flag");
  for (const auto& [f, v] : g.involution)
    if (!g.flags.contains(f)) r.add("involution domain: '" + f + "' is not a flag");
  return r;
}

std::set<Id> tails(const BMGraph& g) {
  std::set<Id> out;
  for (const auto& [f, j] : g.involution)
    if (f == j) out.insert(f);
  return out;
}

std::vector<std::pair<Id, Id>> bm_edges(const BMGraph& g) {
  std::vector<std::pair<Id, Id>> out;
  for (const auto& [f, j] : g.involution)
    if (f < j) out.emplace_back(f, j);
  return out;
}

ValidationReport validate_bm_morphism(const BMMorphism& h) {
  ValidationReport r;
  r.merge(validate_bm_graph(h.source), "source: ");
  r.merge(validate_bm_graph(h.target), "target: ");
  if (!r) return r;
  const BMGraph& tau = h.source;
  const BMGraph& sigma = h.target;

  for (const auto& [k, v] : h.flag_map)
    if (!sigma.flags.contains(k) || !tau.flags.contains(v)) r.add("flag map: entry '" + k + "' out of range");
  if (h.flag_map.size() != sigma.flags.size()) r.add("flag map: not defined on every target flag");
  for (const auto& [k, v] : h.vertex_map)
    if (!tau.vertices.contains(k) || !sigma.vertices.contains(v)) r.add("vertex map: entry '" + k + "' out of range");
  if (h.vertex_map.size() != tau.vertices.size()) r.add("vertex map: not defined on every source vertex");
  if (!r) return r;

  // (i)
  auto img = image_of(h.flag_map);
  if (img.size() != h.flag_map.size()) r.add("(i) h^F is not injective");
  if (image_of(h.vertex_map) != sigma.vertices) r.add("(i) h_V is not surjective");

  std::set<Id> complement;
  for (const auto& f : tau.flags)
    if (!img.contains(f)) complement.insert(f);

  // (ii)
  for (const auto& f : img)
    if (!img.contains(tau.involution.at(f))) r.add("(ii) image of h^F is not j-invariant at '" + f + "'");

  // (ii')
  const auto& jh = h.complement_involution;
  bool jh_ok = true;
  for (const auto& [f, g] : jh)
    if (!complement.contains(f) || !complement.contains(g)) {
      r.add("(ii') j_h is not an involution on the complement at '" + f + "'");
      jh_ok = false;
    }
  for (const auto& f : complement) {
    auto it = jh.find(f);
    if (it == jh.end()) {
      r.add("(ii') j_h undefined on contracted flag '" + f + "'");
      jh_ok = false;
      continue;
    }
    if (it->second == f) r.add("(ii') involution j_h is not fixpoint free at '" + f + "'");
    auto back = jh.find(it->second);
    if (back == jh.end() || back->second != f) {
      r.add("(ii') j_h is not an involution at '" + f + "'");
      jh_ok = false;
    }
    const Id& jt = tau.involution.at(f);
    if (jt != f && it->second != jt) r.add("(ii') j_h disagrees with j on the edge at '" + f + "'");
  }

  // (iii)
  for (const auto& [fs, ft] : h.flag_map)
    if (h.vertex_map.at(tau.boundary.at(ft)) != sigma.boundary.at(fs))
      r.add("(iii) boundary of uncontracted flag '" + ft + "' not preserved");
  if (jh_ok)
    for (const auto& [f, g] : jh)
      if (f < g && h.vertex_map.at(tau.boundary.at(f)) != h.vertex_map.at(tau.boundary.at(g)))
        r.add("(iii) ends of contracted edge {" + f + "," + g + "} have different images");

  // (iv)
  auto inv = inverse_of(h.flag_map);
  for (const auto& [fs, ft] : h.flag_map) {
    const Id& jt = tau.involution.at(ft);
    if (jt == ft || !inv.contains(jt)) continue;
    if (sigma.involution.at(fs) != inv.at(jt))
      r.add("(iv) edge {" + ft + "," + jt + "} is not sent to an edge");
  }
  return r;
}

BMMorphism identity_bm(const BMGraph& g) {
  BMMorphism h{g, g, {}, {}, {}};
  for (const auto& f : g.flags) h.flag_map[f] = f;
  for (const auto& v : g.vertices) h.vertex_map[v] = v;
  return h;
}

BMMorphism compose_bm(const BMMorphism& g, const BMMorphism& c) {
  if (g.target != c.source) throw Error("compose_bm: endpoint mismatch");
  BMMorphism h{g.source, c.target, {}, {}, {}};
  for (const auto& [v, w] : g.vertex_map) h.vertex_map[v] = c.vertex_map.at(w);
  for (const auto& [f, m] : c.flag_map) h.flag_map[f] = g.flag_map.at(m);
  h.complement_involution = g.complement_involution;
  for (const auto& [f, j] : c.complement_involution) h.complement_involution[g.flag_map.at(f)] = g.flag_map.at(j);
  return h;
}

bool is_grafting(const BMMorphism& h) {
  return image_of(h.vertex_map).size() == h.source.vertices.size() &&
         h.vertex_map.size() == h.target.vertices.size() && h.flag_map.size() == h.source.flags.size() &&
         image_of(h.flag_map).size() == h.source.flags.size();
}

bool is_compression(const BMMorphism& h) {
  std::set<Id> tail_image;
  auto ts = tails(h.target);
  for (const auto& t : ts) tail_image.insert(h.flag_map.at(t));
  return tail_image.size() == ts.size() && tail_image == tails(h.source);
}

BMClass classify_bm(const BMMorphism& h) {
  BMClass c;
  c.grafting = is_grafting(h);
  c.compression = is_compression(h);
  c.isomorphism = c.grafting && c.compression;
  if (c.compression) {
    std::set<Id> edge_image;
    std::size_t edge_flags = 0;
    for (const auto& [f, j] : h.target.involution)
      if (f != j) {
        edge_image.insert(h.flag_map.at(f));
        ++edge_flags;
      }
    std::set<Id> source_edge_flags;
    for (const auto& [f, j] : h.source.involution)
      if (f != j) source_edge_flags.insert(f);
    c.merger = edge_image.size() == edge_flags && edge_image == source_edge_flags;

    // Contracted edges, actual or virtual, are the orbits of j_h.
    Partition reach;
    for (const auto& [f, g] : h.complement_involution)
      reach.unite(h.source.boundary.at(f), h.source.boundary.at(g));
    c.contraction = true;
    std::map<Id, Id> fibre_root;
    for (const auto& [v, x] : h.vertex_map) {
      Id root = reach.find(v);
      auto [it, fresh] = fibre_root.emplace(x, root);
      if (!fresh && it->second != root) c.contraction = false;
    }
  }
  return c;
}

BMFactorisation factorise_bm(const BMMorphism& h) {
  const BMGraph& tau = h.source;
  const BMGraph& rho = h.target;
  BMGraph sigma{tau.vertices, tau.flags, tau.boundary, {}};
  for (const auto& [r, f] : h.flag_map) sigma.involution[f] = h.flag_map.at(rho.involution.at(r));
  for (const auto& [f, j] : h.complement_involution) sigma.involution[f] = j;

  BMMorphism g = identity_bm(tau);
  g.target = sigma;
  BMMorphism c{sigma, rho, h.flag_map, h.vertex_map, h.complement_involution};
  return {sigma, g, c};
}

BMGraph ghost_graph(const BMMorphism& h) { return factorise_bm(h).ghost; }

BMFactorisation commute_bm(const BMMorphism& h, const BMMorphism& k) {
  if (!is_compression(h)) throw Error("commute_bm: first morphism is not a compression");
  if (!is_grafting(k)) throw Error("commute_bm: second morphism is not a grafting");
  if (h.target != k.source) throw Error("commute_bm: endpoint mismatch");
  const BMGraph& tau = h.source;
  const BMGraph& omega = h.target;
  const BMGraph& rho = k.target;
  auto k_inv = inverse_of(k.flag_map);  // omega flag -> rho flag

  // sigma: vertices and flags of tau. Tails of tau correspond (via h) to
  // tails of omega; g grafts them exactly when k grafts those.
  BMGraph sigma{tau.vertices, tau.flags, tau.boundary, tau.involution};
  for (const auto& t : tails(omega)) {
    const Id& f = h.flag_map.at(t);
    const Id& r = k_inv.at(t);
    const Id& jr = rho.involution.at(r);
    sigma.involution[f] = jr == r ? f : h.flag_map.at(k.flag_map.at(jr));
  }
  BMMorphism g = identity_bm(tau);
  g.target = sigma;

  // c compresses the same subgraphs as h, read through k's bijections.
  BMMorphism c{sigma, rho, {}, {}, h.complement_involution};
  for (const auto& [v, w] : h.vertex_map) c.vertex_map[v] = k.vertex_map.at(w);
  for (const auto& [r, w] : k.flag_map) c.flag_map[r] = h.flag_map.at(w);
  return {sigma, g, c};
}

// ---------------------------------------------------------------------------

namespace {

void search_bm_isos(const BMGraph& a, const BMGraph& b, const std::function<bool(const BMIso&)>& visit) {
  if (a.vertices.size() != b.vertices.size() || a.flags.size() != b.flags.size()) return;
  if (tails(a).size() != tails(b).size()) return;
  std::vector<Id> va(a.vertices.begin(), a.vertices.end());
  std::map<Id, std::vector<Id>> fa, fb;
  for (const auto& v : a.vertices) fa[v] = flags_at(a, v);
  for (const auto& v : b.vertices) fb[v] = flags_at(b, v);

  BMIso cur;
  std::set<Id> used;
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t idx) {
    if (stop) return;
    if (idx == va.size()) {
      stop = !visit(cur);
      return;
    }
    const Id& v = va[idx];
    const auto& fl = fa.at(v);
    for (const auto& w : b.vertices) {
      if (used.contains(w)) continue;
      auto fl2 = fb.at(w);
      if (fl2.size() != fl.size()) continue;
      used.insert(w);
      cur.vertices[v] = w;
      do {
        for (std::size_t k = 0; k < fl.size(); ++k) cur.flags[fl[k]] = fl2[k];
        bool ok = true;
        for (const auto& f : fl) {
          const Id& g = cur.flags.at(f);
          const Id& jf = a.involution.at(f);
          const Id& jg = b.involution.at(g);
          if ((jf == f) != (jg == g)) ok = false;
          auto m = cur.flags.find(jf);
          if (m != cur.flags.end() && m->second != jg) ok = false;
          if (!ok) break;
        }
        if (ok) rec(idx + 1);
        for (const auto& f : fl) cur.flags.erase(f);
        if (stop) break;
      } while (std::next_permutation(fl2.begin(), fl2.end()));
      cur.vertices.erase(v);
      used.erase(w);
      if (stop) return;
    }
  };
  rec(0);
}

}  // namespace

std::vector<BMIso> find_bm_isomorphisms(const BMGraph& a, const BMGraph& b) {
  std::vector<BMIso> out;
  search_bm_isos(a, b, [&out](const BMIso& iso) {
    out.push_back(iso);
    return true;
  });
  return out;
}

bool is_bm_isomorphic(const BMGraph& a, const BMGraph& b) {
  bool found = false;
  search_bm_isos(a, b, [&found](const BMIso&) {
    found = true;
    return false;
  });
  return found;
}

BMMorphism iso_as_bm(const BMGraph& a, const BMGraph& b, const BMIso& iso) {
  BMMorphism h{a, b, inverse_of(iso.flags), iso.vertices, {}};
  return h;
}

BMGraph relabel_bm(const BMGraph& g, const BMIso& ren) {
  BMGraph out;
  for (const auto& v : g.vertices) out.vertices.insert(ren.vertices.at(v));
  for (const auto& f : g.flags) out.flags.insert(ren.flags.at(f));
  for (const auto& [f, v] : g.boundary) out.boundary[ren.flags.at(f)] = ren.vertices.at(v);
  for (const auto& [f, j] : g.involution) out.involution[ren.flags.at(f)] = ren.flags.at(j);
  if (out.vertices.size() != g.vertices.size() || out.flags.size() != g.flags.size())
    throw Error("relabel_bm: renaming is not injective");
  return out;
}

}  // namespace grafcat
