#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "richardson/graph.hpp"
#include "richardson/model.hpp"

namespace testing_support {

using namespace richardson;

// Connected random graph: a random spanning tree plus extra edges with probability p.
inline Graph random_connected_graph(std::mt19937_64& gen, std::size_t n, double p) {
  GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_vertex();
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), gen);
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    b.add_edge(order[i], order[pick(gen)]);
  }
  std::bernoulli_distribution coin(p);
  for (VertexId u = 0; u < n; ++u)
    for (VertexId w = u + 1; w < n; ++w)
      if (!b.has_edge(u, w) && coin(gen)) b.add_edge(u, w);
  return b.freeze();
}

// Two distinct seeds of opposite type.
inline InitialConfig random_two_seed_init(std::mt19937_64& gen, std::size_t n) {
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
  const VertexId a = pick(gen);
  VertexId b = pick(gen);
  while (b == a) b = pick(gen);
  InitialConfig c;
  c.add(a, Type::one);
  c.add(b, Type::two);
  return c;
}

inline Graph path_graph(std::size_t n) {
  GraphBuilder b;
  VertexId first = b.add_vertex("p:0");
  if (n > 1) b.add_path(first, static_cast<std::int64_t>(n - 1), "p");
  return b.freeze();
}

}  // namespace testing_support
