#include <gtest/gtest.h>

#include <numeric>

#include "pgraph/catalog.hpp"
#include "pgraph/graph.hpp"
#include "test_support.hpp"

using namespace pgraph;

TEST(BuildGraph, SquareLatticeHasOneVertex) {
  auto g = FundamentalGraph::build(2, {{"v", 0.0}}, {{"v", "v", {1, 0}}, {"v", "v", {0, 1}}});
  EXPECT_EQ(g.vertex_count(), 1u);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.degree("v"), 4u);
}

TEST(BuildGraph, HexagonalLattice) {
  auto g = hexagonal_graph(0.0);
  EXPECT_EQ(g.vertex_count(), 2u);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(g.degree("v1"), 3u);
  EXPECT_EQ(g.degree("v2"), 3u);
}

TEST(BuildGraph, SingleIsolatedVertexAccepted) {
  auto g = FundamentalGraph::build(1, {{"a", 2.0}}, {});
  EXPECT_EQ(g.vertex_count(), 1u);
  EXPECT_EQ(g.degree("a"), 0u);
}

TEST(BuildGraph, RejectsInvalidInput) {
  EXPECT_THROW(FundamentalGraph::build(0, {{"a", 0.0}}, {}), GraphError);
  EXPECT_THROW(FundamentalGraph::build(1, {}, {}), GraphError);
  EXPECT_THROW(FundamentalGraph::build(1, {{"a", 0.0}, {"a", 1.0}}, {{"a", "a", {1}}}), GraphError);
  EXPECT_THROW(FundamentalGraph::build(2, {{"a", 0.0}}, {{"a", "a", {1}}}), GraphError);
  EXPECT_THROW(FundamentalGraph::build(1, {{"a", 0.0}}, {{"a", "b", {1}}}), GraphError);
  EXPECT_THROW(FundamentalGraph::build(1, {{"a", 0.0}, {"b", 0.0}}, {{"a", "a", {1}}}), GraphError);
}

TEST(Degree, LoopCountsTwice) {
  auto g = FundamentalGraph::build(1, {{"a", 0.0}}, {{"a", "a", {1}}});
  EXPECT_EQ(g.degree("a"), 2u);
  EXPECT_THROW(g.degree("zz"), GraphError);
}

TEST(Degree, SumsToTwiceEdgeCount) {
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testing_support::random_graph(2, 4, 5);
    std::size_t total = 0;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) total += g.degree(v);
    EXPECT_EQ(total, 2 * g.edge_count());
  }
}

TEST(OrientedEdges, IndicesSumToZero) {
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testing_support::random_graph(3, 3, 4);
    auto oe = g.oriented_edges();
    ASSERT_EQ(oe.size(), 2 * g.edge_count());
    IndexVector sum(3, 0);
    for (const auto& e : oe)
      for (std::size_t s = 0; s < 3; ++s) sum[s] += e.index[s];
    EXPECT_EQ(sum, IndexVector(3, 0));
  }
}

TEST(Perturb, AddsLoopToSquareLattice) {
  auto gt = perturb(lattice_graph(2), {"v", "v", {3, 1}});
  ASSERT_EQ(gt.edge_count(), 3u);
  EXPECT_EQ(gt.edges()[0].index, (IndexVector{1, 0}));
  EXPECT_EQ(gt.edges()[1].index, (IndexVector{0, 1}));
  EXPECT_EQ(gt.edges()[2].index, (IndexVector{3, 1}));
}

TEST(Perturb, Line2GetsThreeParallelEdges) {
  auto gt = perturb(line2_graph(0.5), {"v0", "v1", {7}});
  ASSERT_EQ(gt.edge_count(), 3u);
  std::vector<int> idx;
  for (const auto& e : gt.edges()) {
    EXPECT_FALSE(e.is_loop());
    idx.push_back(e.index[0]);
  }
  EXPECT_EQ(idx, (std::vector<int>{0, 1, 7}));
}

TEST(Perturb, ZeroIndexRaisesDegrees) {
  auto g = hexagonal_graph(0.5);
  auto gt = perturb(g, {"v1", "v2", {0, 0}});
  EXPECT_EQ(gt.degree("v1"), g.degree("v1") + 1);
  EXPECT_EQ(gt.degree("v2"), g.degree("v2") + 1);
  auto gl = perturb(g, {"v1", "v1", {0, 0}});
  EXPECT_EQ(gl.degree("v1"), g.degree("v1") + 2);
}

TEST(Perturb, RejectsInvalidSpec) {
  auto g = line2_graph(0.5);
  EXPECT_THROW(perturb(g, {"v0", "v1", {1, 2}}), GraphError);
  EXPECT_THROW(perturb(g, {"v0", "nope", {1}}), GraphError);
}

TEST(Perturb, RemovingAddedEdgeRoundTrips) {
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testing_support::random_graph(2, 3, 3);
    auto gt = perturb(g, {"u0", "u2", testing_support::random_index(2, 9)});
    EXPECT_EQ(remove_edge(gt, gt.edge_count() - 1), g);
  }
}

TEST(Lift, PerturbedLatticeBecomesHigherLattice) {
  for (int d = 1; d <= 3; ++d) {
    auto gl = lift_to_limit(perturb(lattice_graph(d), {"v", "v", IndexVector(static_cast<std::size_t>(d), 5)}));
    EXPECT_EQ(gl, lattice_graph(d + 1));
  }
}

TEST(Lift, PerturbedHexagonalIndices) {
  auto gl = lift_to_limit(perturb(hexagonal_graph(0.5), {"v1", "v2", {3, 1}}));
  ASSERT_EQ(gl.dimension(), 3);
  std::vector<IndexVector> idx;
  for (const auto& e : gl.edges()) idx.push_back(e.index);
  EXPECT_EQ(idx, (std::vector<IndexVector>{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
}

TEST(Lift, StructuralCounts) {
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testing_support::random_graph(testing_support::uniform_int(1, 3), 3, 2);
    auto gl = lift_to_limit(g, 1);
    EXPECT_EQ(gl.dimension(), g.dimension() + 1);
    EXPECT_EQ(gl.vertex_count(), g.vertex_count());
    EXPECT_EQ(gl.edge_count(), g.edge_count());
  }
  EXPECT_THROW(lift_to_limit(line2_graph(0.5), 7), GraphError);
}

TEST(Catalog, Line2) {
  auto g = builtin("line2", 0.5);
  ASSERT_EQ(g.vertex_count(), 2u);
  EXPECT_EQ(g.vertices()[0].potential, 0.5);
  EXPECT_EQ(g.vertices()[1].potential, -0.5);
  ASSERT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.edges()[0].index, IndexVector{0});
  EXPECT_EQ(g.edges()[1].index, IndexVector{1});
}

TEST(Catalog, Lattice3) {
  auto g = builtin("lattice:3");
  EXPECT_EQ(g.dimension(), 3);
  EXPECT_EQ(g.vertex_count(), 1u);
  std::vector<IndexVector> idx;
  for (const auto& e : g.edges()) idx.push_back(e.index);
  EXPECT_EQ(idx, (std::vector<IndexVector>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
}

TEST(Catalog, HexLimitIsLiftedLine2) {
  auto g = builtin("hex-limit", 0.25);
  EXPECT_EQ(g.vertex_count(), 2u);
  EXPECT_EQ(g.vertices()[0].potential, 0.25);
  EXPECT_EQ(g.vertices()[1].potential, -0.25);
  std::vector<IndexVector> idx;
  for (const auto& e : g.edges()) idx.push_back(e.index);
  EXPECT_EQ(idx, (std::vector<IndexVector>{{0, 0}, {1, 0}, {0, 1}}));
  EXPECT_EQ(g, lift_to_limit(perturb(line2_graph(0.25), {"v0", "v1", {7}})));
  EXPECT_EQ(builtin("line2-limit", 0.25), g);
}

TEST(Catalog, Errors) {
  EXPECT_THROW(builtin("nope"), GraphError);
  EXPECT_THROW(builtin("line2", std::nan("")), GraphError);
  EXPECT_THROW(builtin("lattice:0"), GraphError);
  EXPECT_THROW(builtin("lattice:-2"), GraphError);
  EXPECT_THROW(builtin("lattice:x"), GraphError);
  EXPECT_THROW(builtin("line2:3"), GraphError);
}
