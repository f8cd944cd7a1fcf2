#pragma once

// Etale morphisms, open subgraphs, port gluings and reduced covers.

#include <map>
#include <set>
#include <vector>

#include "grafcat/graph.hpp"

namespace grafcat {

/// Checks the commuting squares, involution compatibility and the per-vertex
/// pullback condition (flags at v' biject onto flags at the image vertex).
ValidationReport validate_etale(const EtaleMorphism& m);

EtaleMorphism identity_etale(const JKGraph& g);
/// `second` after `first`. Throws on endpoint mismatch.
EtaleMorphism compose_etale(const EtaleMorphism& first, const EtaleMorphism& second);
bool is_levelwise_bijective(const EtaleMorphism& m);
EtaleMorphism iso_as_etale(const JKGraph& source, const JKGraph& target, const GraphIso& iso);

struct Inclusion {
  JKGraph graph;
  EtaleMorphism inclusion;
};

/// The effective open subgraph spanned by a nonempty vertex set.
Inclusion open_subgraph(const JKGraph& g, const std::set<Id>& vertices);

/// Glue port `a` to port `b`: identifies a ~ i(b) and i(a) ~ b.
Inclusion glue_ports(const JKGraph& g, const Id& a, const Id& b);

bool is_covering_family(const std::vector<EtaleMorphism>& family);
/// Collapse a family with common target to one morphism out of the sum of
/// the domains; member k is prefixed "k.".
EtaleMorphism sum_family(const std::vector<EtaleMorphism>& family);

bool is_reduced_cover(const EtaleMorphism& m);
ValidationReport validate_reduced_cover(const EtaleMorphism& m);

/// One port gluing, in the coordinates of the cover's source.
struct GluingStep {
  Id a;
  Id b;
  bool operator==(const GluingStep&) const = default;
};

/// One step per target inner edge hit twice, ordered by edge label.
std::vector<GluingStep> decompose_reduced_cover(const ReducedCover& m);

/// Apply the steps in order to `g`. The returned morphism is the composite
/// quotient g -> result.
Inclusion replay_gluings(const JKGraph& g, const std::vector<GluingStep>& steps);

/// The reduced cover cutting the given inner edges of `x`.
ReducedCover cut_inner_edges(const JKGraph& x, const std::vector<Edge>& cut);

/// One cover per subset of inner edges, subsets in binary-counter order over
/// the sorted inner edges. Throws if `x` is not effective.
std::vector<ReducedCover> reduced_covers_of(const JKGraph& x);

/// The inner edges of the cover's target that are hit twice.
std::vector<Edge> glued_edges(const ReducedCover& m);

/// Some iso phi : m1.target -> m2.target with phi . m1 = m2, if any.
std::optional<GraphIso> comparison_over_source(const EtaleMorphism& m1, const EtaleMorphism& m2);

}  // namespace grafcat
