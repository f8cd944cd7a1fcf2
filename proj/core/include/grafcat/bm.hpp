#pragma once

// BM graphs (V, F, boundary, j) and their morphisms
// (h^F, h_V, j_h). Tails are the fixpoints of j.

#include <map>
#include <set>
#include <vector>

#include "grafcat/error.hpp"

namespace grafcat {

struct BMGraph {
  std::set<Id> vertices;
  std::set<Id> flags;
  std::map<Id, Id> boundary;    // F -> V
  std::map<Id, Id> involution;  // j : F -> F

  bool operator==(const BMGraph&) const = default;
};

/// h : source -> target. `flag_map` is contravariant (target flag -> source
/// flag); `complement_involution` lives on the source flags outside its image.
struct BMMorphism {
  BMGraph source;
  BMGraph target;
  std::map<Id, Id> flag_map;
  std::map<Id, Id> vertex_map;
  std::map<Id, Id> complement_involution;

  bool operator==(const BMMorphism&) const = default;
};

ValidationReport validate_bm_graph(const BMGraph& g);
std::set<Id> tails(const BMGraph& g);
/// Free orbits of j, each as an ordered pair (first < second).
std::vector<std::pair<Id, Id>> bm_edges(const BMGraph& g);

/// Checks axioms (i), (ii), (ii'), (iii), (iv); each violation names its axiom.
ValidationReport validate_bm_morphism(const BMMorphism& h);

BMMorphism identity_bm(const BMGraph& g);
/// c after g. Throws Error on endpoint mismatch.
BMMorphism compose_bm(const BMMorphism& g, const BMMorphism& c);

struct BMClass {
  bool isomorphism = false;
  bool grafting = false;
  bool compression = false;
  bool contraction = false;
  bool merger = false;
};

BMClass classify_bm(const BMMorphism& h);
bool is_grafting(const BMMorphism& h);
bool is_compression(const BMMorphism& h);

struct BMFactorisation {
  BMGraph ghost;           // sigma
  BMMorphism grafting;     // tau -> sigma
  BMMorphism compression;  // sigma -> rho
};

/// Grafting followed by compression; sigma reuses the labels of the source.
BMFactorisation factorise_bm(const BMMorphism& h);
BMGraph ghost_graph(const BMMorphism& h);

/// Given a compression h : tau -> omega and a grafting k : omega -> rho,
/// return the grafting g : tau -> sigma and compression c : sigma -> rho with
/// c . g = k . h. Throws if the inputs are not of the stated classes.
BMFactorisation commute_bm(const BMMorphism& h, const BMMorphism& k);

struct BMIso {
  std::map<Id, Id> vertices;
  std::map<Id, Id> flags;
  bool operator==(const BMIso&) const = default;
};

std::vector<BMIso> find_bm_isomorphisms(const BMGraph& a, const BMGraph& b);
bool is_bm_isomorphic(const BMGraph& a, const BMGraph& b);

/// The isomorphism a -> b as a BM morphism (grafting and compression).
BMMorphism iso_as_bm(const BMGraph& a, const BMGraph& b, const BMIso& iso);
BMGraph relabel_bm(const BMGraph& g, const BMIso& renaming);

}  // namespace grafcat
