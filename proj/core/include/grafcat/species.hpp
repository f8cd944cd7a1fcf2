#pragma once

// Graphical species given by colours with an involution and, per arity n, a
// finite set F[n] of operations with a colour profile on the 2n arcs of the
// reference corolla and an action of the port permutations.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "grafcat/graph.hpp"
#include "grafcat/kleisli.hpp"

namespace grafcat {

/// A permutation of {0..n-1}, as the list of images.
using Permutation = std::vector<std::size_t>;

struct Operation {
  Id name;
  std::size_t arity = 0;
  /// Slots [0,n) colour the ports "1".."n" of the reference corolla, slots
  /// [n,2n) colour the flag arcs "1*".."n*".
  std::vector<Id> profile;

  bool operator==(const Operation&) const = default;
};

struct GraphicalSpecies {
  std::set<Id> colours;
  std::map<Id, Id> colour_involution;
  std::map<Id, Operation> operations;  // by name
  /// pull(sigma, o) has profile slot k equal to slot sigma(k) of o (and
  /// likewise for the flag slots).
  std::map<std::pair<Id, Permutation>, Id> action;

  const Id& dual(const Id& colour) const { return colour_involution.at(colour); }
  std::vector<Id> operations_of_arity(std::size_t n) const;
  std::set<std::size_t> arities() const;
  const Id& pull(const Permutation& sigma, const Id& op) const;
};

ValidationReport validate_species(const GraphicalSpecies& f);

/// Close a set of named operations under free relabelling of ports: the
/// result contains "name" and "name[s1,...,sn]" (1-based images) for every
/// non-identity permutation.
GraphicalSpecies free_species(const std::set<Id>& colours, const std::map<Id, Id>& colour_involution,
                              const std::vector<Operation>& generators);

/// Use explicit action entries (op, permutation) -> op, completed under
/// composition. Throws Error if the completion is inconsistent or partial.
GraphicalSpecies species_with_action(const std::set<Id>& colours, const std::map<Id, Id>& colour_involution,
                                     const std::vector<Operation>& operations,
                                     const std::map<std::pair<Id, Permutation>, Id>& action);

std::vector<Permutation> permutations_of(std::size_t n);
Permutation compose_perm(const Permutation& sigma, const Permutation& rho);  // sigma . rho

// ---------------------------------------------------------------------------
// Decorations.

struct VertexLabel {
  Id op;
  std::vector<Id> slots;  // slots[k]: the flag at port k+1 of the reference corolla
  auto operator<=>(const VertexLabel&) const = default;
};

struct Decoration {
  std::map<Id, Id> colouring;  // arc -> colour
  std::map<Id, VertexLabel> labels;
  auto operator<=>(const Decoration&) const = default;
};

ValidationReport validate_decoration(const GraphicalSpecies& f, const JKGraph& g, const Decoration& d);

/// Rewrite every vertex label so its slots list the flags in sorted order.
Decoration canonical_decoration(const GraphicalSpecies& f, const JKGraph& g, const Decoration& d);

/// F[g] as compatible families over the elements of g, in canonical form.
std::vector<Decoration> evaluate_species(const GraphicalSpecies& f, const JKGraph& g);

struct DecoratedGraph {
  JKGraph graph;
  Decoration decoration;
};

/// Carry a decoration of `source` along a graph iso to `target`.
Decoration transport_decoration(const GraphicalSpecies& f, const JKGraph& source, const Decoration& d,
                                const JKGraph& target, const GraphIso& iso);

/// Decorated isomorphism; with `fix_ports`, port labels must be preserved.
bool decorated_isomorphic(const GraphicalSpecies& f, const DecoratedGraph& a, const DecoratedGraph& b,
                          bool fix_ports);

// ---------------------------------------------------------------------------
// The free monad, truncated by a vertex bound.

struct TruncationOptions {
  bool include_empty = false;  // admit the empty graph when n is empty
};

/// Iso classes of effective graphs with ports "1".."n" and at most
/// `max_vertices` vertices, decorated by F; isos fix the ports.
std::vector<DecoratedGraph> truncated_free(const GraphicalSpecies& f, std::size_t n, std::size_t max_vertices,
                                           const TruncationOptions& options = {});

/// A decorated effective graph substituted for one vertex.
struct DecoratedSubstitution {
  DecoratedGraph graph;
  std::map<Id, Id> interface;  // local interface arc of x -> port of graph
};

/// Substitute into every vertex of r and glue; colours must agree across
/// every glued edge and, when r carries a colouring, with that colouring on
/// every interface arc. Throws Error on interface or colour mismatch.
DecoratedGraph monad_mult_element(const GraphicalSpecies& f, const JKGraph& r,
                                  const std::map<Id, DecoratedSubstitution>& assignment,
                                  const std::map<Id, Id>& colouring = {});

/// The corolla with ports "1".."n" decorated by `op`.
DecoratedGraph monad_unit(const GraphicalSpecies& f, const Id& op);

/// The unit substitution for vertex v of a decorated graph: its label as a
/// decorated corolla, with the matching interface.
DecoratedSubstitution unit_substitution(const GraphicalSpecies& f, const DecoratedGraph& g, const Id& v);

}  // namespace grafcat
