#include "grafcat/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace grafcat {

namespace {

using BMKey = std::tuple<std::size_t, std::size_t, std::vector<std::size_t>, std::size_t, std::size_t>;

BMKey invariant_key(const BMGraph& g) {
  std::map<Id, std::size_t> val;
  for (const auto& v : g.vertices) val[v] = 0;
  for (const auto& [f, v] : g.boundary) ++val[v];
  std::vector<std::size_t> vals;
  for (const auto& [v, n] : val) vals.push_back(n);
  std::sort(vals.begin(), vals.end());
  std::size_t loops = 0;
  for (const auto& [a, b] : bm_edges(g))
    if (g.boundary.at(a) == g.boundary.at(b)) ++loops;
  return {g.vertices.size(), g.flags.size(), vals, tails(g).size(), loops};
}

void for_each_involution(std::size_t n, const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> inv(n, n);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    while (k < n && inv[k] != n) ++k;
    if (k == n) {
      visit(inv);
      return;
    }
    inv[k] = k;
    rec(k + 1);
    for (std::size_t m = k + 1; m < n; ++m) {
      if (inv[m] != n) continue;
      inv[k] = m;
      inv[m] = k;
      rec(k + 1);
      inv[m] = n;
    }
    inv[k] = n;
  };
  rec(0);
}

void for_each_matching(const std::vector<Id>& items, const std::function<void(const std::vector<std::pair<Id, Id>>&)>& visit) {
  std::vector<std::pair<Id, Id>> pairs;
  std::vector<bool> used(items.size(), false);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    while (k < items.size() && used[k]) ++k;
    if (k == items.size()) {
      visit(pairs);
      return;
    }
    used[k] = true;
    for (std::size_t m = k + 1; m < items.size(); ++m) {
      if (used[m]) continue;
      used[m] = true;
      pairs.emplace_back(items[k], items[m]);
      rec(k + 1);
      pairs.pop_back();
      used[m] = false;
    }
    used[k] = false;
  };
  rec(0);
}

// Every function from `domain` to `codomain`, as maps.
void for_each_function(const std::vector<Id>& domain, const std::vector<Id>& codomain,
                       const std::function<void(const std::map<Id, Id>&)>& visit) {
  std::map<Id, Id> f;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == domain.size()) {
      visit(f);
      return;
    }
    for (const auto& c : codomain) {
      f[domain[k]] = c;
      rec(k + 1);
    }
    f.erase(domain[k]);
  };
  rec(0);
}

void for_each_injection(const std::vector<Id>& domain, const std::vector<Id>& codomain,
                        const std::function<void(const std::map<Id, Id>&)>& visit) {
  std::map<Id, Id> f;
  std::set<Id> used;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == domain.size()) {
      visit(f);
      return;
    }
    for (const auto& c : codomain) {
      if (used.contains(c)) continue;
      used.insert(c);
      f[domain[k]] = c;
      rec(k + 1);
      used.erase(c);
    }
    f.erase(domain[k]);
  };
  rec(0);
}

template <class Set>
std::vector<Id> as_vector(const Set& s) {
  return {s.begin(), s.end()};
}

// phi1 of a BM graph with its tail copies renamed "1".."n" in the given order.
JKGraph with_port_labels(const BMGraph& g, const std::vector<Id>& tail_order) {
  JKGraph x = phi1_graph(g);
  GraphIso ren = identity_iso(x);
  for (std::size_t k = 0; k < tail_order.size(); ++k) ren.arcs[x.inv(tail_order[k])] = std::to_string(k + 1);
  return relabel(x, ren);
}

}  // namespace

std::vector<BMGraph> enumerate_bm_graphs(const EnumBounds& b) {
  std::vector<BMGraph> out;
  std::map<BMKey, std::vector<std::size_t>> buckets;
  for (std::size_t nv = 0; nv <= b.max_vertices; ++nv)
    for (std::size_t nf = 0; nf <= b.max_flags; ++nf) {
      if (nv == 0 && nf > 0) continue;
      // Non-increasing valence sequences reach every class.
      std::vector<std::size_t> val(nv);
      std::function<void(std::size_t, std::size_t, std::size_t)> split = [&](std::size_t pos, std::size_t left,
                                                                             std::size_t cap) {
        if (pos == nv) {
          if (left != 0) return;
          BMGraph base;
          std::vector<Id> flags;
          for (std::size_t v = 0; v < nv; ++v) {
            Id vid = "v" + std::to_string(v);
            base.vertices.insert(vid);
            for (std::size_t k = 0; k < val[v]; ++k) {
              Id f = "f" + std::to_string(flags.size());
              flags.push_back(f);
              base.flags.insert(f);
              base.boundary[f] = vid;
            }
          }
          for_each_involution(nf, [&](const std::vector<std::size_t>& inv) {
            BMGraph g = base;
            for (std::size_t k = 0; k < nf; ++k) g.involution[flags[k]] = flags[inv[k]];
            auto& bucket = buckets[invariant_key(g)];
            for (auto idx : bucket)
              if (is_bm_isomorphic(out[idx], g)) return;
            bucket.push_back(out.size());
            out.push_back(std::move(g));
          });
          return;
        }
        for (std::size_t d = std::min(left, cap) + 1; d-- > 0;) {
          val[pos] = d;
          split(pos + 1, left - d, d);
        }
      };
      split(0, nf, nf);
    }
  return out;
}

std::vector<BMMorphism> enumerate_bm_morphisms(const BMGraph& tau, const BMGraph& rho) {
  std::vector<BMMorphism> out;
  auto ft = as_vector(tau.flags);
  auto fr = as_vector(rho.flags);
  auto vt = as_vector(tau.vertices);
  auto vr = as_vector(rho.vertices);
  if (fr.size() > ft.size()) return out;
  if ((ft.size() - fr.size()) % 2) return out;
  std::vector<std::map<Id, Id>> vmaps;
  for_each_function(vt, vr, [&](const std::map<Id, Id>& m) {
    std::set<Id> img;
    for (const auto& [k, v] : m) img.insert(v);
    if (img.size() == vr.size()) vmaps.push_back(m);
  });
  if (vmaps.empty()) return out;
  for_each_injection(fr, ft, [&](const std::map<Id, Id>& fmap) {
    std::set<Id> img;
    for (const auto& [k, v] : fmap) img.insert(v);
    std::vector<Id> comp;
    for (const auto& f : ft)
      if (!img.contains(f)) comp.push_back(f);
    for_each_matching(comp, [&](const std::vector<std::pair<Id, Id>>& pairs) {
      std::map<Id, Id> jh;
      for (const auto& [a, c] : pairs) {
        jh[a] = c;
        jh[c] = a;
      }
      for (const auto& vm : vmaps) {
        BMMorphism h{tau, rho, fmap, vm, jh};
        if (validate_bm_morphism(h)) out.push_back(std::move(h));
      }
    });
  });
  return out;
}

std::vector<Refinement> enumerate_refinements(const JKGraph& r, const JKGraph& s) {
  std::vector<Refinement> out;
  if (!isolated_edges(r).empty() || !isolated_edges(s).empty()) return out;
  auto vr = as_vector(r.vertices);
  auto vs = as_vector(s.vertices);
  auto hr = as_vector(r.flags);
  for_each_function(vs, vr, [&](const std::map<Id, Id>& owner) {
    std::map<Id, std::set<Id>> blocks;
    for (const auto& [v, x] : owner) blocks[x].insert(v);
    if (blocks.size() != vr.size()) return;
    std::map<Id, Id> fmap;
    std::set<Id> used;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (k == hr.size()) {
        Refinement ref{r, s, {}, fmap, blocks};
        for (const auto& h : hr) {
          const Id& a = r.arc_of(h);
          ref.arc_map[a] = s.arc_of(fmap.at(h));
          if (!r.flag_of_arc(r.inv(a))) ref.arc_map[r.inv(a)] = s.inv(s.arc_of(fmap.at(h)));
        }
        if (validate_refinement(ref)) out.push_back(std::move(ref));
        return;
      }
      const Id& h = hr[k];
      for (const auto& v : blocks.at(r.vertex_of(h)))
        for (const auto& f : s.flags_at(v)) {
          if (used.contains(f)) continue;
          used.insert(f);
          fmap[h] = f;
          rec(k + 1);
          used.erase(f);
        }
      fmap.erase(h);
    };
    rec(0);
  });
  return out;
}

std::vector<ReducedCover> enumerate_port_gluings(const JKGraph& t) {
  std::vector<ReducedCover> out;
  auto ps = as_vector(ports(t));
  // Partial matchings: each port either stays open or pairs with a later one.
  std::vector<GluingStep> steps;
  std::vector<bool> used(ps.size(), false);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    while (k < ps.size() && used[k]) ++k;
    if (k == ps.size()) {
      out.push_back(replay_gluings(t, steps).inclusion);
      return;
    }
    used[k] = true;
    rec(k + 1);
    for (std::size_t m = k + 1; m < ps.size(); ++m) {
      if (used[m]) continue;
      used[m] = true;
      steps.push_back({ps[k], ps[m]});
      rec(k + 1);
      steps.pop_back();
      used[m] = false;
    }
    used[k] = false;
  };
  rec(0);
  return out;
}

std::vector<GraphCospan> enumerate_cospans(const JKGraph& t, const JKGraph& r, const EnumBounds& b) {
  std::vector<GraphCospan> out;
  if (t.vertices.size() > b.max_apex_vertices) return out;
  if (!isolated_edges(t).empty() || !isolated_edges(r).empty()) return out;
  for (const auto& cover : enumerate_port_gluings(t))
    for (auto& ref : enumerate_refinements(r, cover.target)) {
      GraphCospan c{cover, std::move(ref)};
      bool dup = std::any_of(out.begin(), out.end(), [&](const GraphCospan& d) { return cospan_equal(c, d); });
      if (!dup) out.push_back(std::move(c));
    }
  return out;
}

std::vector<ReducedCover> reduced_cover_maps(const JKGraph& y, const JKGraph& x) {
  std::vector<ReducedCover> out;
  if (y.vertices.size() != x.vertices.size() || y.flags.size() != x.flags.size()) return out;
  if (!isolated_edges(y).empty()) return out;
  auto vy = as_vector(y.vertices);
  auto vx = as_vector(x.vertices);
  std::vector<Id> perm = vx;
  do {
    bool ok = true;
    for (std::size_t k = 0; k < vy.size() && ok; ++k) ok = y.valence(vy[k]) == x.valence(perm[k]);
    if (!ok) continue;
    // Flags vertex by vertex, keeping inner edges of y on inner edges of x.
    std::vector<Id> hy;
    for (const auto& v : vy)
      for (const auto& h : y.flags_at(v)) hy.push_back(h);
    std::map<Id, Id> vmap;
    for (std::size_t k = 0; k < vy.size(); ++k) vmap[vy[k]] = perm[k];
    std::map<Id, Id> fmap;
    std::set<Id> used;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (k == hy.size()) {
        ReducedCover m{y, x, {}, fmap, vmap};
        for (const auto& h : hy) {
          const Id& a = y.arc_of(h);
          m.arc_map[a] = x.arc_of(fmap.at(h));
          if (!y.flag_of_arc(y.inv(a))) m.arc_map[y.inv(a)] = x.inv(x.arc_of(fmap.at(h)));
        }
        if (validate_reduced_cover(m)) out.push_back(std::move(m));
        return;
      }
      const Id& h = hy[k];
      for (const auto& f : x.flags_at(vmap.at(y.vertex_of(h)))) {
        if (used.contains(f)) continue;
        auto partner = y.flag_of_arc(y.inv(y.arc_of(h)));
        if (partner && fmap.contains(*partner) && x.inv(x.arc_of(f)) != x.arc_of(fmap.at(*partner))) continue;
        used.insert(f);
        fmap[h] = f;
        rec(k + 1);
        fmap.erase(h);
        used.erase(f);
      }
    };
    rec(0);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<ReducedCover> brute_force_reduced_covers(const JKGraph& x) {
  std::vector<ReducedCover> out;
  EnumBounds b{x.vertices.size(), x.flags.size(), 0};
  for (const auto& g : enumerate_bm_graphs(b)) {
    if (g.vertices.size() != x.vertices.size() || g.flags.size() != x.flags.size()) continue;
    for (auto& m : reduced_cover_maps(phi1_graph(g), x)) {
      bool dup = std::any_of(out.begin(), out.end(), [&](const ReducedCover& d) {
        return cover_comparison(m, d).has_value();
      });
      if (!dup) out.push_back(std::move(m));
    }
  }
  return out;
}

std::vector<Decoration> brute_force_decorations(const GraphicalSpecies& f, const JKGraph& g) {
  std::set<Decoration> found;
  auto es = edges(g);
  auto cols = as_vector(f.colours);
  auto vs = as_vector(g.vertices);
  if (!es.empty() && cols.empty()) return {};
  std::vector<std::size_t> idx(es.size(), 0);
  while (true) {
    Decoration base;
    for (std::size_t k = 0; k < es.size(); ++k) {
      base.colouring[es[k].first] = cols[idx[k]];
      base.colouring[es[k].second] = f.dual(cols[idx[k]]);
    }
    // Candidate labels per vertex: any operation, any slot order.
    std::vector<std::vector<VertexLabel>> cand(vs.size());
    for (std::size_t j = 0; j < vs.size(); ++j) {
      auto fl = g.flags_at(vs[j]);
      for (const auto& [name, op] : f.operations) {
        if (op.arity != fl.size()) continue;
        auto slots = fl;
        do {
          bool ok = true;
          for (std::size_t k = 0; k < slots.size() && ok; ++k)
            ok = base.colouring.at(g.arc_of(slots[k])) == op.profile[op.arity + k] &&
                 base.colouring.at(g.inv(g.arc_of(slots[k]))) == op.profile[k];
          if (ok) cand[j].push_back({name, slots});
        } while (std::next_permutation(slots.begin(), slots.end()));
      }
    }
    std::function<void(std::size_t, Decoration&)> rec = [&](std::size_t j, Decoration& d) {
      if (j == vs.size()) {
        if (validate_decoration(f, g, d)) found.insert(canonical_decoration(f, g, d));
        return;
      }
      for (const auto& lab : cand[j]) {
        d.labels[vs[j]] = lab;
        rec(j + 1, d);
      }
      d.labels.erase(vs[j]);
    };
    rec(0, base);
    std::size_t p = 0;
    while (p < idx.size() && ++idx[p] == cols.size()) idx[p++] = 0;
    if (p == idx.size()) break;
  }
  return {found.begin(), found.end()};
}

std::vector<DecoratedGraph> brute_force_truncated_free(const GraphicalSpecies& f, std::size_t n,
                                                       std::size_t max_vertices) {
  auto arities = f.arities();
  std::vector<DecoratedGraph> out;
  if (arities.empty()) return out;
  EnumBounds b{max_vertices, max_vertices * *arities.rbegin(), 0};
  for (const auto& g : enumerate_bm_graphs(b)) {
    if (g.vertices.empty() || tails(g).size() != n) continue;
    std::map<Id, std::size_t> val;
    for (const auto& [fl, v] : g.boundary) ++val[v];
    bool ok = true;
    for (const auto& v : g.vertices) ok = ok && arities.contains(val[v]);
    if (!ok) continue;
    auto order = as_vector(tails(g));
    do {
      JKGraph x = with_port_labels(g, order);
      for (const auto& d : brute_force_decorations(f, x)) {
        DecoratedGraph cand{x, d};
        bool dup = std::any_of(out.begin(), out.end(), [&](const DecoratedGraph& e) {
          return e.graph.vertices.size() == x.vertices.size() && e.graph.flags.size() == x.flags.size() &&
                 decorated_isomorphic(f, cand, e, true);
        });
        if (!dup) out.push_back(std::move(cand));
      }
    } while (std::next_permutation(order.begin(), order.end()));
  }
  return out;
}

// ---------------------------------------------------------------------------

bool EquivalenceReport::ok() const { return failures() == 0; }

std::size_t EquivalenceReport::failures() const {
  return std::count_if(rows.begin(), rows.end(), [](const HomCountRow& r) { return !r.bijection_verified; });
}

HomCountRow hom_count(const BMGraph& tau, const BMGraph& rho, const EnumBounds& b, const PhiFunction& phi_fn) {
  HomCountRow row{tau, rho, 0, 0, false, {}};
  auto homs = enumerate_bm_morphisms(tau, rho);
  auto cospans = enumerate_cospans(phi1_graph(tau), phi1_graph(rho), b);
  row.bm_count = homs.size();
  row.cospan_count = cospans.size();
  if (homs.size() != cospans.size()) {
    row.note = "counts differ";
    return row;
  }
  std::vector<bool> hit(cospans.size(), false);
  for (const auto& h : homs) {
    try {
      GraphCospan c = phi_fn ? phi_fn(h) : phi(h);
      auto it = std::find_if(cospans.begin(), cospans.end(), [&](const GraphCospan& d) { return cospan_equal(c, d); });
      if (it == cospans.end()) {
        row.note = "image of a morphism is not an enumerated cospan";
        return row;
      }
      std::size_t j = it - cospans.begin();
      if (hit[j]) {
        row.note = "two morphisms have the same image";
        return row;
      }
      hit[j] = true;
      if (!phi_fn && phi_inv(c) != h) {
        row.note = "phi_inv does not invert phi";
        return row;
      }
    } catch (const Error& e) {
      row.note = e.what();
      return row;
    }
  }
  row.bijection_verified = true;
  return row;
}

EquivalenceReport check_equivalence(const EnumBounds& b, const PhiFunction& phi_fn) {
  EquivalenceReport report;
  auto graphs = enumerate_bm_graphs(b);
  for (const auto& tau : graphs)
    for (const auto& rho : graphs) report.rows.push_back(hom_count(tau, rho, b, phi_fn));
  return report;
}

std::string describe(const BMGraph& g) {
  if (g.vertices.empty()) return "(empty)";
  std::string out;
  for (const auto& v : g.vertices) {
    if (!out.empty()) out += " ";
    out += v + ":";
    bool first = true;
    for (const auto& [f, w] : g.boundary)
      if (w == v) {
        if (!first) out += ",";
        out += f;
        first = false;
      }
  }
  auto es = bm_edges(g);
  if (!es.empty()) {
    out += " |";
    for (const auto& [a, c] : es) out += " (" + a + " " + c + ")";
  }
  return out;
}

}  // namespace grafcat
