#pragma once

// Cospans  T --left--> S <--right-- R  with a reduced-cover left leg and a
// refinement right leg, and the comparison with BM morphisms.

#include "grafcat/bm.hpp"
#include "grafcat/kleisli.hpp"

namespace grafcat {

struct GraphCospan {
  ReducedCover left;  // T -> S
  Refinement right;   // R -> S

  const JKGraph& left_foot() const { return left.source; }
  const JKGraph& right_foot() const { return right.source; }
  const JKGraph& apex() const { return left.target; }
};

ValidationReport validate_cospan(const GraphCospan& c);
GraphCospan identity_cospan(const JKGraph& g);

/// c1 : T -> . <- M and c2 : M -> . <- R give T -> . <- R. Throws Error on
/// foot mismatch.
GraphCospan compose_cospan(const GraphCospan& c1, const GraphCospan& c2);

/// True iff some apex isomorphism commutes with both pairs of legs.
bool cospan_equal(const GraphCospan& c1, const GraphCospan& c2);
/// Every apex isomorphism commuting with both pairs of legs.
std::vector<GraphIso> cospan_comparisons(const GraphCospan& c1, const GraphCospan& c2);

struct CospanFactorisation {
  GraphCospan cover_part;       // T -> S <- S (identity right leg)
  GraphCospan refinement_part;  // S -> S <- R (identity left leg)
};

CospanFactorisation cospan_factorise(const GraphCospan& c);

// ---------------------------------------------------------------------------
// The functors between BM graphs and graphs without isolated edges.

/// Flags become flags, arcs are the flags plus a copy "t^" of every tail t.
JKGraph phi1_graph(const BMGraph& g);
/// Throws Error if `g` has isolated edges.
BMGraph phi1_graph_inv(const JKGraph& g);

/// A grafting tau -> sigma as a reduced cover phi1(tau) -> phi1(sigma).
ReducedCover phi1_mor(const BMMorphism& grafting);
BMMorphism phi1_mor_inv(const ReducedCover& rc);

/// A compression sigma -> rho as a refinement phi1(rho) -> phi1(sigma).
Refinement phi2_mor(const BMMorphism& compression);
BMMorphism phi2_mor_inv(const Refinement& r);

GraphCospan phi(const BMMorphism& h);
/// Throws Error if a foot or the apex has isolated edges.
BMMorphism phi_inv(const GraphCospan& c);

}  // namespace grafcat
