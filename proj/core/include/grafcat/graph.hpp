#pragma once

// Arc graphs: finite diagrams  A <-s- H -p-> V  with a fixpoint-free
// involution i on A and s injective. Labels are opaque strings.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "grafcat/error.hpp"

namespace grafcat {

struct JKGraph {
  std::set<Id> arcs;
  std::map<Id, Id> involution;  // i : A -> A
  std::set<Id> flags;
  std::map<Id, Id> embed;       // s : H -> A
  std::map<Id, Id> incidence;   // p : H -> V
  std::set<Id> vertices;

  bool empty() const { return arcs.empty() && flags.empty() && vertices.empty(); }

  const Id& inv(const Id& arc) const;
  const Id& arc_of(const Id& flag) const;
  const Id& vertex_of(const Id& flag) const;

  /// Flags incident to `v`, sorted by label.
  std::vector<Id> flags_at(const Id& v) const;
  std::size_t valence(const Id& v) const;

  /// s^{-1}(arc), if the arc is in the embed image.
  std::optional<Id> flag_of_arc(const Id& arc) const;

  bool operator==(const JKGraph&) const = default;
};

/// An involution orbit, stored with first < second.
struct Edge {
  Id first;
  Id second;

  static Edge of(const JKGraph& g, const Id& arc);
  bool contains(const Id& arc) const { return arc == first || arc == second; }
  auto operator<=>(const Edge&) const = default;
};

/// Level-wise maps between two graphs. Used for isomorphisms and, with the
/// graphs attached, for etale morphisms.
struct GraphIso {
  std::map<Id, Id> arcs;
  std::map<Id, Id> flags;
  std::map<Id, Id> vertices;

  bool operator==(const GraphIso&) const = default;
};

/// A level-wise map of graphs. Whether it is etale is checked by
/// `validate_etale` (etale.hpp).
struct EtaleMorphism {
  JKGraph source;
  JKGraph target;
  std::map<Id, Id> arc_map;
  std::map<Id, Id> flag_map;
  std::map<Id, Id> vertex_map;

  bool operator==(const EtaleMorphism&) const = default;
};

/// A reduced cover is an etale morphism that is jointly surjective on edges
/// and bijective on vertices; checked by `validate_reduced_cover`.
using ReducedCover = EtaleMorphism;

ValidationReport validate_graph(const JKGraph& g);
/// Throws Error carrying the report if `g` is not a valid graph.
void require_valid(const JKGraph& g);

std::vector<Edge> edges(const JKGraph& g);
std::vector<Edge> inner_edges(const JKGraph& g);
std::vector<Edge> isolated_edges(const JKGraph& g);
std::set<Id> ports(const JKGraph& g);

/// i(s(p^{-1}(v))): the arcs pointing towards `v`.
std::set<Id> local_interface(const JKGraph& g, const Id& v);

bool is_effective(const JKGraph& g);
bool is_connected(const JKGraph& g);
std::vector<JKGraph> components(const JKGraph& g);
bool is_elementary(const JKGraph& g);

JKGraph unit_graph();
/// Corolla with ports "1".."n" and flags "1*".."n*".
JKGraph corolla(std::size_t n);
/// Corolla with the given port labels; flag of port p is p + "*".
JKGraph corolla(const std::vector<Id>& port_labels);

struct Sum {
  JKGraph graph;
  EtaleMorphism left;
  EtaleMorphism right;
};

/// Level-wise disjoint union; labels prefixed "L." and "R.".
Sum disjoint_union(const JKGraph& g1, const JKGraph& g2);

/// Prefix every label of `g` with `prefix`, returning the copy and the
/// relabelling g -> copy.
std::pair<JKGraph, GraphIso> prefixed(const JKGraph& g, const std::string& prefix);

/// Apply a relabelling (total on all three levels) to `g`.
JKGraph relabel(const JKGraph& g, const GraphIso& renaming);

// ---------------------------------------------------------------------------
// Levelwise coequalisers of port gluings.

struct Quotient {
  JKGraph graph;
  std::map<Id, Id> arc_map;  // arc of the input -> its class
};

/// Identify the given arc pairs (closing under the involution is the
/// caller's job). Classes are named by their least member. Throws Error if
/// the quotient is not a graph.
Quotient coequalise(const JKGraph& g, const std::vector<std::pair<Id, Id>>& identify);

// ---------------------------------------------------------------------------
// Canonical gluing recipe of a graph from its elementary subgraphs.

struct VertexElement {
  Id vertex;
  JKGraph corolla;
  std::map<Id, Id> flag_to_graph;  // corolla flag -> flag of the graph
};

struct EdgeElement {
  Edge edge;  // unit arc "0" -> edge.first, "1" -> edge.second
};

struct Incidence {
  std::size_t edge_element;
  int end;  // 0 or 1: which unit arc is the embed image of the flag
  std::size_t vertex_element;
  Id corolla_flag;
};

struct Recipe {
  std::vector<VertexElement> vertices;
  std::vector<EdgeElement> edges;
  std::vector<Incidence> incidences;
};

Recipe elements(const JKGraph& g);
JKGraph colimit(const Recipe& recipe);

// ---------------------------------------------------------------------------
// Isomorphisms.

/// Calls `visit` for every isomorphism g1 -> g2, in deterministic order,
/// until it returns false.
void for_each_isomorphism(const JKGraph& g1, const JKGraph& g2,
                          const std::function<bool(const GraphIso&)>& visit);
std::vector<GraphIso> find_isomorphisms(const JKGraph& g1, const JKGraph& g2);
bool is_isomorphic(const JKGraph& g1, const JKGraph& g2);
GraphIso identity_iso(const JKGraph& g);

}  // namespace grafcat
