#pragma once

// Brute-force enumeration below size bounds. Everything here is written to
// be obviously exhaustive rather than fast, and is the reference the rest of
// the library is tested against.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "grafcat/bm.hpp"
#include "grafcat/cospan.hpp"
#include "grafcat/species.hpp"

namespace grafcat {

struct EnumBounds {
  std::size_t max_vertices = 2;
  std::size_t max_flags = 4;
  std::size_t max_apex_vertices = 3;
};

/// BM graphs up to isomorphism with vertices "v0".. and flags "f0"..,
/// ordered by (vertex count, flag count, generation order).
std::vector<BMGraph> enumerate_bm_graphs(const EnumBounds& b);

/// Injections F_rho -> F_tau x surjections V_tau -> V_rho x fixpoint-free
/// involutions of the complement, filtered by validate_bm_morphism.
std::vector<BMMorphism> enumerate_bm_morphisms(const BMGraph& tau, const BMGraph& rho);

/// Every refinement R -> S (vertex partitions of S times flag choices).
std::vector<Refinement> enumerate_refinements(const JKGraph& r, const JKGraph& s);

/// Reduced covers T -> S, one per partial matching of the ports of T.
std::vector<ReducedCover> enumerate_port_gluings(const JKGraph& t);

/// Cospans T -> S <- R with at most b.max_apex_vertices apex vertices, up to
/// cospan_equal.
std::vector<GraphCospan> enumerate_cospans(const JKGraph& t, const JKGraph& r, const EnumBounds& b);

/// Every etale morphism y -> x that is a reduced cover.
std::vector<ReducedCover> reduced_cover_maps(const JKGraph& y, const JKGraph& x);
/// Reduced covers into x up to iso over x, found by trying every source of
/// the right size.
std::vector<ReducedCover> brute_force_reduced_covers(const JKGraph& x);

/// All decorations of g: every edge colouring times every labelling of each
/// vertex by an operation in any slot order, filtered and deduplicated.
std::vector<Decoration> brute_force_decorations(const GraphicalSpecies& f, const JKGraph& g);
/// Decorated effective n-graphs pooled from enumerate_bm_graphs and
/// deduplicated by decorated isomorphism fixing ports.
std::vector<DecoratedGraph> brute_force_truncated_free(const GraphicalSpecies& f, std::size_t n,
                                                       std::size_t max_vertices);

struct HomCountRow {
  BMGraph source;
  BMGraph target;
  std::size_t bm_count = 0;
  std::size_t cospan_count = 0;
  bool bijection_verified = false;
  std::string note;
};

struct EquivalenceReport {
  std::vector<HomCountRow> rows;
  bool ok() const;
  std::size_t failures() const;
};

using PhiFunction = std::function<GraphCospan(const BMMorphism&)>;

/// Compares Hom_BM(tau, rho) with Hom_Cosp(phi1 tau, phi1 rho) for every
/// ordered pair of enumerated graphs, and checks that `phi_fn` (default
/// phi) is a bijection between them.
EquivalenceReport check_equivalence(const EnumBounds& b, const PhiFunction& phi_fn = {});
HomCountRow hom_count(const BMGraph& tau, const BMGraph& rho, const EnumBounds& b, const PhiFunction& phi_fn = {});

/// Short human-readable form, e.g. "v0:f0,f1 | (f0 f1)".
std::string describe(const BMGraph& g);

}  // namespace grafcat
