#include "grafcat/species.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace grafcat {

namespace {

std::size_t slot_of_corolla_flag(const Id& flag) { return std::stoul(flag.substr(0, flag.size() - 1)) - 1; }

Permutation identity_perm(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

std::vector<Id> pulled_profile(const std::vector<Id>& profile, const Permutation& sigma) {
  std::size_t n = sigma.size();
  std::vector<Id> out(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = profile[sigma[k]];
    out[n + k] = profile[n + sigma[k]];
  }
  return out;
}

Id relabelled_name(const Id& base, const Permutation& sigma) {
  if (sigma == identity_perm(sigma.size())) return base;
  Id out = base + "[";
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(sigma[k] + 1);
  }
  return out + "]";
}

}  // namespace

std::vector<Id> GraphicalSpecies::operations_of_arity(std::size_t n) const {
  std::vector<Id> out;
  for (const auto& [name, op] : operations)
    if (op.arity == n) out.push_back(name);
  return out;
}

std::set<std::size_t> GraphicalSpecies::arities() const {
  std::set<std::size_t> out;
  for (const auto& [name, op] : operations) out.insert(op.arity);
  return out;
}

const Id& GraphicalSpecies::pull(const Permutation& sigma, const Id& op) const {
  auto it = action.find({op, sigma});
  if (it == action.end()) throw Error("species: no action of the permutation on '" + op + "'");
  return it->second;
}

std::vector<Permutation> permutations_of(std::size_t n) {
  std::vector<Permutation> out;
  Permutation p = identity_perm(n);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

Permutation compose_perm(const Permutation& sigma, const Permutation& rho) {
  Permutation out(rho.size());
  for (std::size_t k = 0; k < rho.size(); ++k) out[k] = sigma[rho[k]];
  return out;
}

ValidationReport validate_species(const GraphicalSpecies& f) {
  ValidationReport r;
  for (const auto& c : f.colours) {
    auto it = f.colour_involution.find(c);
    if (it == f.colour_involution.end() || !f.colours.contains(it->second)) {
      r.add("colour involution: undefined on '" + c + "'");
    } else if (f.colour_involution.at(it->second) != c) {
      r.add("colour involution: not an involution at '" + c + "'");
    }
  }
  if (!r) return r;
  for (const auto& [name, op] : f.operations) {
    if (op.name != name) r.add("operation '" + name + "': name mismatch");
    if (op.profile.size() != 2 * op.arity) {
      r.add("operation '" + name + "': profile must have 2n slots");
      continue;
    }
    for (const auto& c : op.profile)
      if (!f.colours.contains(c)) r.add("operation '" + name + "': unknown colour '" + c + "'");
    if (!r) continue;
    for (std::size_t k = 0; k < op.arity; ++k)
      if (op.profile[op.arity + k] != f.dual(op.profile[k]))
        r.add("operation '" + name + "': profile not equivariant at slot " + std::to_string(k + 1));
  }
  if (!r) return r;
  for (const auto& [name, op] : f.operations) {
    auto perms = permutations_of(op.arity);
    for (const auto& sigma : perms) {
      auto it = f.action.find({name, sigma});
      if (it == f.action.end() || !f.operations.contains(it->second)) {
        r.add("action: undefined on '" + name + "'");
        continue;
      }
      if (f.operations.at(it->second).profile != pulled_profile(op.profile, sigma))
        r.add("action: '" + it->second + "' has the wrong profile");
    }
    if (!r) continue;
    if (f.pull(identity_perm(op.arity), name) != name) r.add("action: identity law fails at '" + name + "'");
    for (const auto& sigma : perms)
      for (const auto& rho : perms)
        if (f.pull(rho, f.pull(sigma, name)) != f.pull(compose_perm(sigma, rho), name)) {
          r.add("action: composition law fails at '" + name + "'");
          break;
        }
  }
  return r;
}

GraphicalSpecies free_species(const std::set<Id>& colours, const std::map<Id, Id>& colour_involution,
                              const std::vector<Operation>& generators) {
  GraphicalSpecies f{colours, colour_involution, {}, {}};
  for (const auto& g : generators) {
    if (g.profile.size() != 2 * g.arity) throw Error("species: operation '" + g.name + "' needs 2n profile slots");
    auto perms = permutations_of(g.arity);
    for (const auto& sigma : perms) {
      Id name = relabelled_name(g.name, sigma);
      if (!f.operations.emplace(name, Operation{name, g.arity, pulled_profile(g.profile, sigma)}).second)
        throw Error("species: operation name '" + name + "' occurs twice");
      for (const auto& rho : perms) f.action[{name, rho}] = relabelled_name(g.name, compose_perm(sigma, rho));
    }
  }
  return f;
}

GraphicalSpecies species_with_action(const std::set<Id>& colours, const std::map<Id, Id>& colour_involution,
                                     const std::vector<Operation>& operations,
                                     const std::map<std::pair<Id, Permutation>, Id>& action) {
  GraphicalSpecies f{colours, colour_involution, {}, action};
  for (const auto& op : operations)
    if (!f.operations.emplace(op.name, op).second) throw Error("species: operation '" + op.name + "' occurs twice");
  for (const auto& [key, target] : action) {
    auto src = f.operations.find(key.first);
    auto dst = f.operations.find(target);
    if (src == f.operations.end() || dst == f.operations.end())
      throw Error("species: action entry names an unknown operation");
    if (key.second.size() != src->second.arity || dst->second.arity != src->second.arity)
      throw Error("species: action entry for '" + key.first + "' has the wrong arity");
  }
  for (const auto& [name, op] : f.operations) {
    auto [it, fresh] = f.action.emplace(std::pair{name, identity_perm(op.arity)}, name);
    if (!fresh && it->second != name) throw Error("species: identity acts nontrivially on '" + name + "'");
  }
  // Close under pull(rho, pull(sigma, o)) = pull(sigma . rho, o).
  for (bool grew = true; grew;) {
    grew = false;
    auto snapshot = f.action;
    for (const auto& [k1, o1] : snapshot) {
      // pull(sigma^-1, pull(sigma, o)) = o
      Permutation inverse(k1.second.size());
      for (std::size_t k = 0; k < inverse.size(); ++k) inverse[k1.second[k]] = k;
      auto [it, fresh] = f.action.emplace(std::pair{o1, inverse}, k1.first);
      if (fresh) grew = true;
      else if (it->second != k1.first) throw Error("species: action table is inconsistent at '" + o1 + "'");
    }
    for (const auto& [k1, o1] : snapshot)
      for (const auto& [k2, o2] : snapshot) {
        if (k2.first != o1) continue;
        std::pair key{k1.first, compose_perm(k1.second, k2.second)};
        auto [it, fresh] = f.action.emplace(key, o2);
        if (fresh) grew = true;
        else if (it->second != o2) throw Error("species: action table is inconsistent at '" + k1.first + "'");
      }
  }
  for (const auto& [name, op] : f.operations)
    for (const auto& sigma : permutations_of(op.arity))
      if (!f.action.contains({name, sigma})) throw Error("species: action table does not cover '" + name + "'");
  return f;
}

// ---------------------------------------------------------------------------

ValidationReport validate_decoration(const GraphicalSpecies& f, const JKGraph& g, const Decoration& d) {
  ValidationReport r;
  for (const auto& a : g.arcs) {
    auto it = d.colouring.find(a);
    if (it == d.colouring.end() || !f.colours.contains(it->second)) r.add("colouring: arc '" + a + "' uncoloured");
  }
  if (d.colouring.size() != g.arcs.size()) r.add("colouring: entries outside the arcs");
  if (!r) return r;
  for (const auto& a : g.arcs)
    if (d.colouring.at(g.inv(a)) != f.dual(d.colouring.at(a)))
      r.add("colouring: not equivariant at arc '" + a + "'");
  for (const auto& v : g.vertices) {
    auto it = d.labels.find(v);
    if (it == d.labels.end()) {
      r.add("labels: vertex '" + v + "' unlabelled");
      continue;
    }
    const VertexLabel& lab = it->second;
    auto op = f.operations.find(lab.op);
    if (op == f.operations.end()) {
      r.add("labels: unknown operation '" + lab.op + "'");
      continue;
    }
    std::size_t n = op->second.arity;
    auto fl = g.flags_at(v);
    auto sorted = lab.slots;
    std::sort(sorted.begin(), sorted.end());
    if (n != fl.size() || sorted != fl) {
      r.add("labels: slots of '" + v + "' are not its flags");
      continue;
    }
    for (std::size_t k = 0; k < n; ++k) {
      const Id& a = g.arc_of(lab.slots[k]);
      if (d.colouring.at(a) != op->second.profile[n + k] || d.colouring.at(g.inv(a)) != op->second.profile[k])
        r.add("labels: profile of '" + lab.op + "' does not match at vertex '" + v + "'");
    }
  }
  if (d.labels.size() != g.vertices.size()) r.add("labels: entries outside the vertices");
  return r;
}

Decoration canonical_decoration(const GraphicalSpecies& f, const JKGraph& g, const Decoration& d) {
  Decoration out{d.colouring, {}};
  for (const auto& [v, lab] : d.labels) {
    auto sorted = g.flags_at(v);
    Permutation sigma(sorted.size());
    for (std::size_t k = 0; k < sorted.size(); ++k)
      sigma[k] = std::find(lab.slots.begin(), lab.slots.end(), sorted[k]) - lab.slots.begin();
    out.labels[v] = {f.pull(sigma, lab.op), sorted};
  }
  return out;
}

std::vector<Decoration> evaluate_species(const GraphicalSpecies& f, const JKGraph& g) {
  Recipe recipe = elements(g);
  // Incidences grouped by vertex element.
  std::vector<std::vector<const Incidence*>> at_vertex(recipe.vertices.size());
  std::vector<bool> constrained(recipe.edges.size(), false);
  for (const auto& inc : recipe.incidences) {
    at_vertex[inc.vertex_element].push_back(&inc);
    constrained[inc.edge_element] = true;
  }
  std::vector<std::optional<Id>> edge_colour(recipe.edges.size());  // colour of edge.first
  std::vector<Id> chosen(recipe.vertices.size());
  std::vector<Decoration> out;

  auto emit = [&]() {
    std::vector<std::size_t> free_edges;
    for (std::size_t k = 0; k < recipe.edges.size(); ++k)
      if (!constrained[k]) free_edges.push_back(k);
    std::vector<Id> cols(f.colours.begin(), f.colours.end());
    std::vector<std::size_t> idx(free_edges.size(), 0);
    if (!free_edges.empty() && cols.empty()) return;
    while (true) {
      Decoration d;
      for (std::size_t k = 0; k < recipe.edges.size(); ++k) {
        Id c = constrained[k] ? *edge_colour[k] : Id{};
        if (!constrained[k]) {
          auto pos = std::find(free_edges.begin(), free_edges.end(), k) - free_edges.begin();
          c = cols[idx[pos]];
        }
        d.colouring[recipe.edges[k].edge.first] = c;
        d.colouring[recipe.edges[k].edge.second] = f.dual(c);
      }
      for (std::size_t j = 0; j < recipe.vertices.size(); ++j)
        d.labels[recipe.vertices[j].vertex] = {chosen[j], g.flags_at(recipe.vertices[j].vertex)};
      out.push_back(std::move(d));
      std::size_t p = 0;
      while (p < idx.size() && ++idx[p] == cols.size()) idx[p++] = 0;
      if (p == idx.size()) break;
    }
  };

  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == recipe.vertices.size()) {
      emit();
      return;
    }
    std::size_t n = recipe.vertices[j].flag_to_graph.size();
    for (const auto& name : f.operations_of_arity(n)) {
      const auto& prof = f.operations.at(name).profile;
      std::vector<std::pair<std::size_t, std::optional<Id>>> undo;
      bool ok = true;
      for (const auto* inc : at_vertex[j]) {
        const Id& flag_colour = prof[n + slot_of_corolla_flag(inc->corolla_flag)];
        Id first = inc->end == 0 ? flag_colour : f.dual(flag_colour);
        auto& slot = edge_colour[inc->edge_element];
        if (slot && *slot != first) {
          ok = false;
          break;
        }
        if (!slot) {
          undo.emplace_back(inc->edge_element, slot);
          slot = first;
        }
      }
      if (ok) {
        chosen[j] = name;
        rec(j + 1);
      }
      for (auto it = undo.rbegin(); it != undo.rend(); ++it) edge_colour[it->first] = it->second;
    }
  };
  rec(0);
  return out;
}

Decoration transport_decoration(const GraphicalSpecies& f, const JKGraph& /*source*/, const Decoration& d,
                                const JKGraph& target, const GraphIso& iso) {
  Decoration out;
  for (const auto& [a, c] : d.colouring) out.colouring[iso.arcs.at(a)] = c;
  for (const auto& [v, lab] : d.labels) {
    VertexLabel moved{lab.op, {}};
    for (const auto& h : lab.slots) moved.slots.push_back(iso.flags.at(h));
    out.labels[iso.vertices.at(v)] = moved;
  }
  return canonical_decoration(f, target, out);
}

namespace {

bool fixes_ports(const JKGraph& a, const GraphIso& iso) {
  for (const auto& p : ports(a))
    if (iso.arcs.at(p) != p) return false;
  return true;
}

}  // namespace

bool decorated_isomorphic(const GraphicalSpecies& f, const DecoratedGraph& a, const DecoratedGraph& b,
                          bool fix_ports) {
  if (fix_ports && ports(a.graph) != ports(b.graph)) return false;
  Decoration target = canonical_decoration(f, b.graph, b.decoration);
  bool found = false;
  for_each_isomorphism(a.graph, b.graph, [&](const GraphIso& iso) {
    if (fix_ports && !fixes_ports(a.graph, iso)) return true;
    if (transport_decoration(f, a.graph, a.decoration, b.graph, iso) != target) return true;
    found = true;
    return false;
  });
  return found;
}

// ---------------------------------------------------------------------------

namespace {

// Graphs with the given vertex valences whose ports are "1".."n".
void graphs_with_valences(const std::vector<std::size_t>& valences, std::size_t n,
                          const std::function<void(const JKGraph&)>& visit) {
  std::size_t total = std::accumulate(valences.begin(), valences.end(), std::size_t{0});
  if (total < n || (total - n) % 2) return;
  JKGraph base;
  std::vector<Id> flags;
  for (std::size_t v = 0; v < valences.size(); ++v) {
    Id vid = "v" + std::to_string(v);
    base.vertices.insert(vid);
    for (std::size_t k = 0; k < valences[v]; ++k) {
      Id h = "f" + std::to_string(flags.size());
      flags.push_back(h);
      base.flags.insert(h);
      base.embed[h] = h;
      base.incidence[h] = vid;
      base.arcs.insert(h);
    }
  }
  // Choose which flags stay open, then pair up the rest.
  std::vector<int> partner(total, -1);
  std::vector<std::size_t> open;
  std::function<void(std::size_t, std::size_t)> pair_rest = [&](std::size_t from, std::size_t tails_left) {
    std::size_t k = from;
    while (k < total && partner[k] != -1) ++k;
    if (k == total) {
      if (tails_left != 0) return;
      // Attach ports to the open flags in every order.
      std::vector<std::size_t> order = open;
      std::sort(order.begin(), order.end());
      do {
        JKGraph g = base;
        for (std::size_t t = 0; t < total; ++t)
          if (partner[t] >= 0 && static_cast<std::size_t>(partner[t]) != t)
            g.involution[flags[t]] = flags[partner[t]];
        for (std::size_t p = 0; p < order.size(); ++p) {
          Id port = std::to_string(p + 1);
          g.arcs.insert(port);
          g.involution[port] = flags[order[p]];
          g.involution[flags[order[p]]] = port;
        }
        visit(g);
      } while (std::next_permutation(order.begin(), order.end()));
      return;
    }
    if (tails_left > 0) {
      partner[k] = static_cast<int>(k);
      open.push_back(k);
      pair_rest(k + 1, tails_left - 1);
      open.pop_back();
      partner[k] = -1;
    }
    for (std::size_t m = k + 1; m < total; ++m) {
      if (partner[m] != -1) continue;
      partner[k] = static_cast<int>(m);
      partner[m] = static_cast<int>(k);
      pair_rest(k + 1, tails_left);
      partner[k] = partner[m] = -1;
    }
  };
  pair_rest(0, n);
}

bool port_fixing_isomorphic(const JKGraph& a, const JKGraph& b) {
  bool found = false;
  for_each_isomorphism(a, b, [&](const GraphIso& iso) {
    if (!fixes_ports(a, iso)) return true;
    found = true;
    return false;
  });
  return found;
}

}  // namespace

std::vector<DecoratedGraph> truncated_free(const GraphicalSpecies& f, std::size_t n, std::size_t max_vertices,
                                           const TruncationOptions& options) {
  std::vector<std::size_t> arities;
  for (auto a : f.arities()) arities.push_back(a);
  std::vector<DecoratedGraph> out;
  if (options.include_empty && n == 0) out.push_back({});

  for (std::size_t nv = 1; nv <= max_vertices; ++nv) {
    // Valence multisets as non-increasing sequences over the arities.
    std::vector<std::size_t> val(nv);
    std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t pos, std::size_t max_idx) {
      if (pos == nv) {
        std::vector<JKGraph> classes;
        graphs_with_valences(val, n, [&](const JKGraph& g) {
          for (const auto& c : classes)
            if (port_fixing_isomorphic(g, c)) return;
          classes.push_back(g);
        });
        for (const auto& g : classes) {
          std::vector<GraphIso> autos;
          for_each_isomorphism(g, g, [&](const GraphIso& iso) {
            if (fixes_ports(g, iso)) autos.push_back(iso);
            return true;
          });
          std::set<Decoration> seen;
          for (const auto& d : evaluate_species(f, g)) {
            if (seen.contains(d)) continue;
            for (const auto& iso : autos) seen.insert(transport_decoration(f, g, d, g, iso));
            out.push_back({g, d});
          }
        }
        return;
      }
      for (std::size_t i = 0; i <= max_idx; ++i) {
        val[pos] = arities[i];
        choose(pos + 1, i);
      }
    };
    if (!arities.empty()) choose(0, arities.size() - 1);
  }
  return out;
}

DecoratedGraph monad_mult_element(const GraphicalSpecies& f, const JKGraph& r,
                                  const std::map<Id, DecoratedSubstitution>& assignment,
                                  const std::map<Id, Id>& colouring) {
  std::map<Id, Substitution> plain;
  for (const auto& [x, sub] : assignment) {
    auto rep = validate_decoration(f, sub.graph.graph, sub.graph.decoration);
    if (!rep) throw Error("monad_mult_element: substitution for '" + x + "' is not decorated: " + rep.str());
    plain[x] = {sub.graph.graph, sub.interface};
  }
  Refined refined = refine(r, plain);
  const JKGraph& S = refined.graph;
  const Refinement& ref = refined.refinement;

  Decoration d;
  std::map<Id, Id> port_colour;  // R local interface arc -> colour of the piece port
  for (const auto& [x, sub] : assignment) {
    const auto& pd = sub.graph.decoration;
    std::set<Id> iface;
    for (const auto& [a, q] : sub.interface) {
      iface.insert(q);
      port_colour[a] = pd.colouring.at(q);
      auto it = colouring.find(a);
      if (!colouring.empty() && (it == colouring.end() || it->second != port_colour[a]))
        throw Error("monad_mult_element: substitution for '" + x + "' has the wrong colour at '" + a + "'");
    }
    for (const auto& [a, c] : pd.colouring)
      if (!iface.contains(a)) d.colouring[x + "." + a] = c;
    for (const auto& [v, lab] : pd.labels) {
      VertexLabel moved{lab.op, {}};
      for (const auto& h : lab.slots) moved.slots.push_back(x + "." + h);
      d.labels[x + "." + v] = moved;
    }
  }
  for (const auto& h : r.flags) {
    const Id& partner = r.inv(r.arc_of(h));
    const Id& expected = port_colour.at(partner);
    if (auto h2 = r.flag_of_arc(partner)) {
      const Id& actual = d.colouring.at(S.arc_of(ref.flag_map.at(*h2)));
      if (actual != expected) throw Error("monad_mult_element: colour mismatch across the edge at '" + h + "'");
    } else {
      d.colouring[partner] = expected;
    }
  }
  auto rep = validate_decoration(f, S, d);
  if (!rep) throw Error("monad_mult_element: glued decoration is invalid: " + rep.str());
  return {S, canonical_decoration(f, S, d)};
}

DecoratedGraph monad_unit(const GraphicalSpecies& f, const Id& op) {
  const Operation& o = f.operations.at(op);
  DecoratedGraph out{corolla(o.arity), {}};
  VertexLabel lab{op, {}};
  for (std::size_t k = 0; k < o.arity; ++k) {
    Id port = std::to_string(k + 1);
    out.decoration.colouring[port] = o.profile[k];
    out.decoration.colouring[port + "*"] = o.profile[o.arity + k];
    lab.slots.push_back(port + "*");
  }
  out.decoration.labels["v"] = lab;
  out.decoration = canonical_decoration(f, out.graph, out.decoration);
  return out;
}

DecoratedSubstitution unit_substitution(const GraphicalSpecies& f, const DecoratedGraph& g, const Id& v) {
  const VertexLabel& lab = g.decoration.labels.at(v);
  DecoratedSubstitution sub{monad_unit(f, lab.op), {}};
  for (std::size_t k = 0; k < lab.slots.size(); ++k)
    sub.interface[g.graph.inv(g.graph.arc_of(lab.slots[k]))] = std::to_string(k + 1);
  return sub;
}

}  // namespace grafcat
