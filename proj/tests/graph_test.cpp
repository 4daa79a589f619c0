#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "richardson/graph.hpp"
#include "support.hpp"

using namespace richardson;

TEST(Graph, BuilderRejectsSelfLoopsAndDuplicates) {
  GraphBuilder b;
  const VertexId u = b.add_vertex(), w = b.add_vertex();
  b.add_edge(u, w);
  EXPECT_THROW(b.add_edge(u, u), GraphError);
  EXPECT_THROW(b.add_edge(w, u), GraphError);
  EXPECT_THROW(b.add_bridge(u, u, 3), GraphError);
  EXPECT_THROW(b.add_bridge(u, w, 1), GraphError);
  EXPECT_NO_THROW(b.add_bridge(u, w, 2));
  Graph g = b.freeze();
  EXPECT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_THROW(b.add_vertex(), GraphError);
}

TEST(Graph, PathAndBridgeCounts) {
  for (std::int64_t len = 1; len <= 100; ++len) {
    GraphBuilder b;
    const VertexId s = b.add_vertex();
    const PathSegment p = b.add_path(s, len);
    ASSERT_EQ(p.vertices.size(), static_cast<std::size_t>(len));
    ASSERT_EQ(p.edges.size(), static_cast<std::size_t>(len));
    const VertexId t = b.add_vertex();
    const PathSegment br = b.add_bridge(p.back(), t, len);
    ASSERT_EQ(br.vertices.size(), static_cast<std::size_t>(len - 1));
    ASSERT_EQ(br.edges.size(), static_cast<std::size_t>(len));
    const Graph g = b.freeze();
    EXPECT_EQ(g.vertex_count(), static_cast<std::size_t>(2 * len + 1));
    EXPECT_EQ(g.edge_count(), static_cast<std::size_t>(2 * len));
    EXPECT_EQ(g.degree(s), 1u);
    EXPECT_EQ(g.degree(t), 1u);
    EXPECT_TRUE(is_connected(g));
  }
}

TEST(Graph, LabelsAndDump) {
  GraphBuilder b;
  const VertexId s = b.add_vertex("s1:0");
  b.add_path(s, 2, "s1");
  const Graph g = b.freeze();
  EXPECT_EQ(g.label(0), "s1:0");
  EXPECT_EQ(g.label(2), "s1:2");
  std::ostringstream os;
  g.dump(os);
  EXPECT_EQ(os.str(), "vertices=3 edges=2\n0 1 0\n1 2 1\n");
}

TEST(Graph, RandomGraphsMatchBruteForceBoundary) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + trial % 14;
    const Graph g = testing_support::random_connected_graph(gen, n, 0.3);
    ASSERT_TRUE(is_connected(g));
    ASSERT_TRUE(adjacency_symmetric(g));
    std::size_t degree_sum = 0;
    for (VertexId v = 0; v < n; ++v) degree_sum += g.degree(v);
    ASSERT_EQ(degree_sum, 2 * g.edge_count());

    std::vector<VertexId> set;
    std::bernoulli_distribution coin(0.4);
    for (VertexId v = 0; v < n; ++v)
      if (coin(gen)) set.push_back(v);
    const std::set<VertexId> in(set.begin(), set.end());
    std::vector<EdgeId> expected;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const Edge& ed = g.edge(e);
      if (in.count(ed.u) != in.count(ed.w)) expected.push_back(e);
    }
    ASSERT_EQ(boundary_edges(g, set), expected) << "trial " << trial;
  }
}

TEST(Graph, DisconnectedDetected) {
  GraphBuilder b;
  b.add_vertex();
  b.add_vertex();
  EXPECT_FALSE(is_connected(b.freeze()));
}
