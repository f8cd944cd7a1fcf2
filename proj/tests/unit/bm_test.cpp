#include <gtest/gtest.h>

#include "builders.hpp"
#include "grafcat/bm.hpp"
#include "grafcat/oracle.hpp"
#include "naive.hpp"

using namespace grafcat;
using namespace grafcat::testing;

namespace {

std::vector<BMMorphism> all_small_morphisms(const EnumBounds& b) {
  std::vector<BMMorphism> out;
  auto gs = enumerate_bm_graphs(b);
  for (const auto& t : gs)
    for (const auto& r : gs)
      for (auto& h : enumerate_bm_morphisms(t, r)) out.push_back(std::move(h));
  return out;
}

/// A two-vertex graph with an edge and one tail at each vertex.
BMGraph edge_with_tails() {
  return make_bm({{"e1", "u1"}, {"e2", "u2"}, {"t1", "u1"}, {"t2", "u2"}}, {{"e1", "e2"}});
}

/// Contract the edge of edge_with_tails onto a two-tail corolla.
BMMorphism contract_to_corolla() {
  return {edge_with_tails(), bm_corolla(2), {{"t1", "t1"}, {"t2", "t2"}}, {{"u1", "c"}, {"u2", "c"}},
          {{"e1", "e2"}, {"e2", "e1"}}};
}

/// Graft the two tails of the corolla into a loop.
BMMorphism close_corolla() {
  auto loop = make_bm({{"t1", "c"}, {"t2", "c"}}, {{"t1", "t2"}});
  return {bm_corolla(2), loop, {{"t1", "t1"}, {"t2", "t2"}}, {{"c", "c"}}, {}};
}

}  // namespace

TEST(BM, TailsAndEdges) {
  EXPECT_EQ(tails(bm_corolla(3)).size(), 3u);
  EXPECT_TRUE(bm_edges(bm_corolla(3)).empty());
  EXPECT_TRUE(tails(bm_loop()).empty());
  EXPECT_EQ(bm_edges(bm_loop()).size(), 1u);
  EXPECT_EQ(bm_edges(bm_edge()), (std::vector<std::pair<Id, Id>>{{"e1", "e2"}}));
  EXPECT_TRUE(validate_bm_graph(bm_point()).ok());
}

TEST(BM, IdentityIsValidAndIso) {
  for (const auto& g : {bm_point(), bm_corolla(2), bm_loop(), bm_edge(), bm_two_tails()}) {
    auto id = identity_bm(g);
    EXPECT_TRUE(validate_bm_morphism(id).ok()) << validate_bm_morphism(id).str();
    auto c = classify_bm(id);
    EXPECT_TRUE(c.isomorphism && c.grafting && c.compression && c.contraction && c.merger);
  }
}

TEST(BM, VirtualContractionIsValid) {
  auto h = virtual_contraction();
  EXPECT_TRUE(validate_bm_morphism(h).ok()) << validate_bm_morphism(h).str();
}

TEST(BM, FixedComplementFlagIsRejected) {
  auto h = virtual_contraction();
  h.complement_involution = {{"e1", "e1"}, {"e2", "e2"}};
  auto r = validate_bm_morphism(h);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(r.mentions("(ii')")) << r.str();
  EXPECT_TRUE(r.mentions("fixpoint free")) << r.str();
}

TEST(BM, AxiomViolationsNameTheirClause) {
  auto h = graft_two_tails();
  h.vertex_map = {{"u1", "u1"}, {"u2", "u1"}};
  EXPECT_TRUE(validate_bm_morphism(h).mentions("(i)"));

  auto k = contract_to_corolla();
  k.vertex_map["u2"] = "c";
  k.target.vertices.insert("d");
  EXPECT_TRUE(validate_bm_morphism(k).mentions("(i)"));
}

TEST(BM, ComposeGraftThenContract) {
  auto composite = compose_bm(graft_two_tails(), contract_edge());
  EXPECT_TRUE(validate_bm_morphism(composite).ok());
  EXPECT_EQ(composite, virtual_contraction());
  EXPECT_THROW(compose_bm(contract_edge(), graft_two_tails()), Error);
}

TEST(BM, CompositionUnitLaws) {
  for (const auto& h : all_small_morphisms({1, 3, 3})) {
    EXPECT_EQ(compose_bm(identity_bm(h.source), h), h);
    EXPECT_EQ(compose_bm(h, identity_bm(h.target)), h);
  }
}

TEST(BM, ClassifyExamples) {
  // Both tails of the source leave the image, so this is not a compression.
  auto v = classify_bm(virtual_contraction());
  EXPECT_FALSE(v.grafting);
  EXPECT_FALSE(v.compression);
  EXPECT_FALSE(v.contraction);
  EXPECT_FALSE(v.isomorphism);

  auto g = classify_bm(graft_two_tails());
  EXPECT_TRUE(g.grafting);
  EXPECT_FALSE(g.compression);

  auto c = classify_bm(contract_edge());
  EXPECT_TRUE(c.compression);
  EXPECT_TRUE(c.contraction);
  EXPECT_FALSE(c.merger);
  EXPECT_FALSE(c.grafting);
}

TEST(BM, MergerOfTwoCorollas) {
  // Two corollas merged into one vertex without contracting anything.
  BMMorphism m{bm_two_tails(), make_bm({{"e1", "x"}, {"e2", "x"}}, {}), {{"e1", "e1"}, {"e2", "e2"}},
               {{"u1", "x"}, {"u2", "x"}}, {}};
  ASSERT_TRUE(validate_bm_morphism(m).ok()) << validate_bm_morphism(m).str();
  auto c = classify_bm(m);
  EXPECT_TRUE(c.compression);
  EXPECT_TRUE(c.merger);
  EXPECT_FALSE(c.contraction);
}

TEST(BM, ClassesOnEnumeratedMorphisms) {
  for (const auto& h : all_small_morphisms({2, 4, 3})) {
    auto c = classify_bm(h);
    EXPECT_EQ(c.isomorphism, c.grafting && c.compression);
    if (c.contraction || c.merger) EXPECT_TRUE(c.compression);
    if (c.compression) {
      // The complement of a compression consists of edges, and j_h agrees with j there.
      for (const auto& [f, j] : h.complement_involution) EXPECT_EQ(h.source.involution.at(f), j);
    }
  }
}

TEST(BM, FactoriseVirtualContraction) {
  auto h = virtual_contraction();
  auto fac = factorise_bm(h);
  EXPECT_TRUE(is_bm_isomorphic(fac.ghost, bm_edge()));
  EXPECT_TRUE(is_grafting(fac.grafting));
  EXPECT_TRUE(is_compression(fac.compression));
  EXPECT_EQ(compose_bm(fac.grafting, fac.compression), h);
  EXPECT_EQ(ghost_graph(h), fac.ghost);
}

TEST(BM, FactoriseDegenerateCases) {
  auto c = contract_edge();
  auto fc = factorise_bm(c);
  EXPECT_EQ(fc.grafting, identity_bm(c.source));

  auto g = graft_two_tails();
  auto fg = factorise_bm(g);
  EXPECT_TRUE(classify_bm(fg.compression).isomorphism);
}

TEST(BM, FactorisationOfEnumeratedMorphisms) {
  for (const auto& h : all_small_morphisms({2, 4, 3})) {
    auto fac = factorise_bm(h);
    ASSERT_TRUE(validate_bm_graph(fac.ghost).ok());
    EXPECT_TRUE(validate_bm_morphism(fac.grafting).ok()) << validate_bm_morphism(fac.grafting).str();
    EXPECT_TRUE(validate_bm_morphism(fac.compression).ok()) << validate_bm_morphism(fac.compression).str();
    EXPECT_TRUE(is_grafting(fac.grafting));
    EXPECT_TRUE(is_compression(fac.compression));
    EXPECT_EQ(compose_bm(fac.grafting, fac.compression), h);
  }
}

TEST(BM, CommuteContractionPastGrafting) {
  auto h = contract_to_corolla();
  auto k = close_corolla();
  ASSERT_TRUE(validate_bm_morphism(h).ok()) << validate_bm_morphism(h).str();
  ASSERT_TRUE(validate_bm_morphism(k).ok()) << validate_bm_morphism(k).str();
  auto out = commute_bm(h, k);
  EXPECT_TRUE(validate_bm_morphism(out.grafting).ok()) << validate_bm_morphism(out.grafting).str();
  EXPECT_TRUE(validate_bm_morphism(out.compression).ok()) << validate_bm_morphism(out.compression).str();
  EXPECT_TRUE(is_grafting(out.grafting));
  EXPECT_TRUE(is_compression(out.compression));
  EXPECT_EQ(compose_bm(out.grafting, out.compression), compose_bm(h, k));
  // The grafting closes the two tails into a second edge.
  EXPECT_EQ(bm_edges(out.ghost).size(), 2u);
  EXPECT_TRUE(tails(out.ghost).empty());
}

TEST(BM, CommuteWithIdentities) {
  auto k = graft_two_tails();
  auto out = commute_bm(identity_bm(k.source), k);
  EXPECT_EQ(out.ghost, k.target);
  EXPECT_TRUE(classify_bm(out.compression).isomorphism);
  EXPECT_EQ(compose_bm(out.grafting, out.compression), k);

  auto h = contract_edge();
  auto o2 = commute_bm(h, identity_bm(h.target));
  EXPECT_EQ(compose_bm(o2.grafting, o2.compression), h);
  EXPECT_THROW(commute_bm(k, identity_bm(k.target)), Error);
}

TEST(BM, CommuteOnEnumeratedPairs) {
  auto gs = enumerate_bm_graphs({2, 4, 3});
  std::size_t checked = 0;
  for (const auto& h : all_small_morphisms({2, 4, 3})) {
    if (!is_compression(h)) continue;
    for (const auto& r : gs)
      for (const auto& k : enumerate_bm_morphisms(h.target, r)) {
        if (!is_grafting(k)) continue;
        auto out = commute_bm(h, k);
        EXPECT_TRUE(validate_bm_morphism(out.grafting).ok());
        EXPECT_TRUE(validate_bm_morphism(out.compression).ok());
        EXPECT_TRUE(is_grafting(out.grafting));
        EXPECT_TRUE(is_compression(out.compression));
        EXPECT_EQ(compose_bm(out.grafting, out.compression), compose_bm(h, k));
        ++checked;
      }
  }
  EXPECT_GT(checked, 0u);
}

TEST(BM, IsomorphismSearchAgreesWithNaiveCount) {
  auto gs = enumerate_bm_graphs({2, 4, 3});
  for (const auto& a : gs)
    for (const auto& b : gs) {
      auto n = naive_bm_iso_count(a, b);
      EXPECT_EQ(find_bm_isomorphisms(a, b).size(), n);
      // Enumeration is up to isomorphism.
      if (&a != &b) EXPECT_EQ(n, 0u);
    }
}

TEST(BM, IsoAsMorphism) {
  auto g = bm_loop();
  for (const auto& iso : find_bm_isomorphisms(g, g)) {
    auto h = iso_as_bm(g, g, iso);
    EXPECT_TRUE(validate_bm_morphism(h).ok());
    EXPECT_TRUE(classify_bm(h).isomorphism);
  }
  EXPECT_EQ(find_bm_isomorphisms(g, g).size(), naive_bm_iso_count(g, g));
}
