#include <gtest/gtest.h>

#include "builders.hpp"
#include "grafcat/cospan.hpp"
#include "grafcat/oracle.hpp"
#include "naive.hpp"

using namespace grafcat;
using namespace grafcat::testing;

namespace {

std::vector<JKGraph> small_graphs() {
  std::vector<JKGraph> out{unit_graph(), JKGraph{}, edge_graph(), loop_graph(), path_graph(2), closed_path(3),
                           disjoint_union(unit_graph(), corolla(0)).graph};
  for (const auto& g : enumerate_bm_graphs({2, 4, 3})) out.push_back(phi1_graph(g));
  return out;
}

}  // namespace

TEST(Graph, UnitGraph) {
  auto u = unit_graph();
  EXPECT_TRUE(validate_graph(u).ok());
  EXPECT_TRUE(u.vertices.empty());
  EXPECT_EQ(u.arcs.size(), 2u);
  EXPECT_EQ(edges(u).size(), 1u);
  EXPECT_TRUE(inner_edges(u).empty());
  EXPECT_EQ(ports(u).size(), 2u);
  EXPECT_EQ(isolated_edges(u).size(), 1u);
  EXPECT_TRUE(is_elementary(u));
  EXPECT_FALSE(is_effective(u));
}

TEST(Graph, FixedArcIsRejected) {
  auto g = make_jk({"v"}, {{"h", "v", "a"}}, {{"a", "b"}});
  g.involution["a"] = "a";
  g.involution.erase("b");
  g.arcs.erase("b");
  auto r = validate_graph(g);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(r.mentions("fixpoint-free")) << r.str();
}

TEST(Graph, SharedArcIsRejected) {
  auto g = make_jk({"v"}, {{"h1", "v", "a"}, {"h2", "v", "a"}}, {{"a", "b"}});
  auto r = validate_graph(g);
  EXPECT_TRUE(r.mentions("s injective")) << r.str();
  EXPECT_THROW(require_valid(g), Error);
}

TEST(Graph, Corollas) {
  auto c0 = corolla(0);
  EXPECT_EQ(c0.vertices.size(), 1u);
  EXPECT_TRUE(c0.arcs.empty());
  EXPECT_TRUE(is_effective(c0));
  EXPECT_TRUE(is_elementary(c0));

  auto c2 = corolla(2);
  EXPECT_EQ(c2.vertices.size(), 1u);
  EXPECT_EQ(c2.flags.size(), 2u);
  EXPECT_EQ(c2.arcs.size(), 4u);
  EXPECT_EQ(ports(c2), (std::set<Id>{"1", "2"}));
  EXPECT_EQ(local_interface(c2, "v"), (std::set<Id>{"1", "2"}));

  auto c3 = corolla(3);
  EXPECT_EQ(edges(c3).size(), 3u);
  EXPECT_TRUE(inner_edges(c3).empty());
  EXPECT_EQ(ports(c3).size(), 3u);
  EXPECT_TRUE(is_elementary(c3));
  EXPECT_EQ(c3.flags_at("v"), (std::vector<Id>{"1*", "2*", "3*"}));
}

TEST(Graph, Loop) {
  auto l = loop_graph();
  EXPECT_TRUE(validate_graph(l).ok());
  EXPECT_EQ(edges(l).size(), 1u);
  EXPECT_EQ(inner_edges(l).size(), 1u);
  EXPECT_TRUE(ports(l).empty());
  EXPECT_EQ(local_interface(l, "v"), (std::set<Id>{"a1", "a2"}));
  EXPECT_FALSE(is_elementary(l));
  EXPECT_TRUE(is_effective(l));
  EXPECT_EQ(find_isomorphisms(l, l).size(), naive_iso_count(l, l));
}

TEST(Graph, EdgeGraph) {
  auto e = edge_graph();
  EXPECT_EQ(local_interface(e, "v1"), (std::set<Id>{"a2"}));
  EXPECT_EQ(local_interface(e, "v2"), (std::set<Id>{"a1"}));
  EXPECT_TRUE(is_connected(e));
  EXPECT_FALSE(is_elementary(e));
}

TEST(Graph, DisjointUnion) {
  auto two = two_corollas();
  EXPECT_EQ(two.vertices.size(), 2u);
  EXPECT_EQ(ports(two).size(), 2u);
  EXPECT_TRUE(is_effective(two));
  EXPECT_FALSE(is_connected(two));
  EXPECT_EQ(components(two).size(), 2u);

  auto e = edge_graph();
  EXPECT_TRUE(is_isomorphic(disjoint_union(e, JKGraph{}).graph, e));

  auto uc = disjoint_union(unit_graph(), corolla(0)).graph;
  EXPECT_EQ(uc.vertices.size(), 1u);
  EXPECT_EQ(isolated_edges(uc).size(), 1u);
  EXPECT_FALSE(is_effective(uc));
}

TEST(Graph, EmptyGraph) {
  JKGraph g;
  EXPECT_TRUE(validate_graph(g).ok());
  EXPECT_FALSE(is_effective(g));
  EXPECT_TRUE(components(g).empty());
}

TEST(Graph, ElementsOfSmallGraphs) {
  auto rl = elements(loop_graph());
  EXPECT_EQ(rl.vertices.size(), 1u);
  EXPECT_EQ(rl.edges.size(), 1u);
  EXPECT_EQ(rl.incidences.size(), 2u);
  EXPECT_EQ(rl.vertices[0].corolla.flags.size(), 2u);

  auto rc = elements(corolla(3));
  EXPECT_EQ(rc.vertices.size(), 1u);
  EXPECT_EQ(rc.edges.size(), 3u);
  EXPECT_EQ(rc.incidences.size(), 3u);

  auto re = elements(edge_graph());
  EXPECT_EQ(re.vertices.size(), 2u);
  EXPECT_EQ(re.edges.size(), 1u);
  EXPECT_EQ(re.incidences.size(), 2u);
}

TEST(Graph, Invariants) {
  for (const auto& g : small_graphs()) {
    SCOPED_TRACE(std::to_string(g.vertices.size()) + " vertices, " + std::to_string(g.flags.size()) + " flags");
    ASSERT_TRUE(validate_graph(g).ok());
    EXPECT_EQ(g.arcs.size(), 2 * edges(g).size());
    // Every edge is inner, isolated or carries exactly one port.
    std::size_t with_port = 0;
    for (const auto& e : edges(g))
      if (ports(g).contains(e.first) != ports(g).contains(e.second)) ++with_port;
    EXPECT_EQ(inner_edges(g).size() + isolated_edges(g).size() + with_port, edges(g).size());
    EXPECT_TRUE(is_isomorphic(colimit(elements(g)), g));
    auto autos = find_isomorphisms(g, g);
    EXPECT_NE(std::find(autos.begin(), autos.end(), identity_iso(g)), autos.end());
    if (g.arcs.size() <= 6) EXPECT_EQ(autos.size(), naive_iso_count(g, g));
  }
}

TEST(Graph, IsomorphismCountsAgreeWithNaiveSearch) {
  auto gs = small_graphs();
  for (const auto& a : gs)
    for (const auto& b : gs)
      if (a.arcs.size() == b.arcs.size() && a.arcs.size() <= 6)
        EXPECT_EQ(find_isomorphisms(a, b).size(), naive_iso_count(a, b));
}

TEST(Graph, RelabelIsIsomorphic) {
  auto [copy, ren] = prefixed(path_graph(3), "z.");
  EXPECT_TRUE(validate_graph(copy).ok());
  EXPECT_TRUE(is_isomorphic(copy, path_graph(3)));
  EXPECT_EQ(relabel(path_graph(3), ren), copy);
}
