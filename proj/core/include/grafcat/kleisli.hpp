#pragma once

// Refinements (generic morphisms) R -> S: every vertex x of R is replaced by
// an effective piece S_x of S with the same interface. Stored as the diagram
// A_R -> A_S, H_R -> (outer flag of a piece), V_R -> (vertex set of a piece).

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "grafcat/etale.hpp"
#include "grafcat/graph.hpp"

namespace grafcat {

struct Refinement {
  JKGraph source;  // R
  JKGraph target;  // S
  std::map<Id, Id> arc_map;                // A_R -> A_S
  std::map<Id, Id> flag_map;               // H_R -> H_S, the outer flag
  std::map<Id, std::set<Id>> vertex_map;   // V_R -> vertex set W_x of S_x

  bool operator==(const Refinement&) const = default;
};

/// A vertex subset of S, optionally with a chosen outer flag.
struct SubgraphRef {
  std::set<Id> vertices;
  bool operator==(const SubgraphRef&) const = default;
};

struct FlaggedSubgraphRef {
  SubgraphRef subgraph;
  Id outer_flag;
  bool operator==(const FlaggedSubgraphRef&) const = default;
};

FlaggedSubgraphRef flagged_ref(const Refinement& r, const Id& flag);

ValidationReport validate_refinement(const Refinement& r);
Refinement identity_refinement(const JKGraph& g);

/// The piece S_x as a graph of its own, with its etale map into S and the
/// identification of x's local interface with the piece's ports.
struct Piece {
  JKGraph graph;
  EtaleMorphism into_target;
  std::map<Id, Id> interface;  // local interface arc of x in R -> port of the piece
};

Piece piece_of(const Refinement& r, const Id& x);

/// What to substitute for one vertex x: an effective graph and a bijection
/// from the local interface of x to its ports.
struct Substitution {
  JKGraph graph;
  std::map<Id, Id> interface;
};

struct Refined {
  JKGraph graph;
  Refinement refinement;
};

/// Glue the substituted graphs together the way the corollas of `r` are
/// glued. Labels of the piece for x are prefixed "x."; ports of `r` keep
/// their labels. Throws Error on interface mismatch or non-effective pieces.
Refined refine(const JKGraph& r, const std::map<Id, Substitution>& assignment);

/// r2 after r1. Throws Error on endpoint mismatch.
Refinement compose_refinements(const Refinement& r1, const Refinement& r2);

/// Some iso phi : r1.source -> r2.source with r2 . phi = r1, if any.
std::optional<GraphIso> refinement_comparison(const Refinement& r1, const Refinement& r2);
bool refinements_equivalent(const Refinement& r1, const Refinement& r2);

/// Transport a refinement R -> S along an iso S -> S'.
Refinement transport_target(const Refinement& r, const JKGraph& new_target, const GraphIso& iso);

// ---------------------------------------------------------------------------
// Duality with reduced covering families.

/// A reduced cover summed from a family: `members` names each summand and
/// lists its vertices in the cover's source.
struct CoveringFamily {
  ReducedCover cover;
  std::map<Id, std::set<Id>> members;
};

/// The cover sum_x S_x -> S; summand x is prefixed "x.".
CoveringFamily refinement_to_cover(const Refinement& r);

/// Rebuild the refinement whose pieces are the members. R's vertices are the
/// member names; its flags and arcs carry the labels of their images in S.
Refinement cover_to_refinement(const CoveringFamily& family);
/// Same, with one member per connected component of the cover's source.
Refinement cover_to_refinement(const ReducedCover& cover);

/// Some iso phi : m1.source -> m2.source with m2 . phi = m1, if any.
std::optional<GraphIso> cover_comparison(const EtaleMorphism& m1, const EtaleMorphism& m2);

// ---------------------------------------------------------------------------
// Pushout of a refinement along a reduced cover.

struct GenRcPushout {
  Refinement generic;  // R' -> S'
  ReducedCover cover;  // S -> S'
};

/// Transports the port gluings of `rc` along `gen` and applies them to S.
/// `order`, when given, permutes the gluing steps of the decomposition.
GenRcPushout pushout_gen_rc(const Refinement& gen, const ReducedCover& rc,
                            const std::vector<std::size_t>& order = {});

// ---------------------------------------------------------------------------
// Kleisli morphisms, stored as their generic-free factorisation.

struct KleisliMorphism {
  Refinement generic;  // R -> S
  EtaleMorphism free;  // S -> Y
};

/// Throws Error if gen.target differs from free.source.
KleisliMorphism kleisli_morphism(const Refinement& gen, const EtaleMorphism& free);
bool is_generic(const KleisliMorphism& k);

/// Equal iff some iso of middle objects commutes with both parts.
bool kleisli_equal(const KleisliMorphism& k1, const KleisliMorphism& k2);

/// k after the refinement r.
KleisliMorphism precompose_refinement(const Refinement& r, const KleisliMorphism& k);
/// k after the reduced cover rc (viewed as a free morphism): the generic
/// part of k is restricted by cutting the edges rc glues.
KleisliMorphism precompose_cover(const ReducedCover& rc, const KleisliMorphism& k);

}  // namespace grafcat
