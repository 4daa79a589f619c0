// rng.hpp - seed mixing and the exponential edge clocks.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

#include "richardson/graph.hpp"
#include "richardson/model.hpp"

namespace richardson {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014): a bijective avalanche mix.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stream seed for one (lambda_index, replication) cell of an experiment:
///   mix64(m, l, r) = sm(sm(sm(m) ^ l) ^ r),  sm = splitmix64.
/// Order-independent by construction, so parallel schedules cannot change
/// which weights a replication sees.
inline constexpr std::uint64_t mix64(std::uint64_t master, std::uint64_t lambda_index,
                                     std::uint64_t replication) {
  return splitmix64(splitmix64(splitmix64(master) ^ lambda_index) ^ replication);
}

/// Uniform on (0, 1]: the top 53 bits plus one, scaled by 2^-53.
inline double uniform_open0_closed1(std::mt19937_64& gen) {
  return static_cast<double>((gen() >> 11) + 1) * 0x1.0p-53;
}

/// X = -ln(U), U uniform on (0,1]: mean-1 exponential, strictly positive
/// except for U = 1, which is mapped to the smallest positive double.
inline double exponential_draw(std::mt19937_64& gen) {
  const double x = -std::log(uniform_open0_closed1(gen));
  return x > 0.0 ? x : 0x1.0p-1074;
}

inline void fill_weights(std::span<double> out, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  for (double& x : out) x = exponential_draw(gen);
}

inline WeightAssignment sample_weights(std::size_t edge_count, std::uint64_t seed) {
  WeightAssignment w(edge_count);
  fill_weights(w, seed);
  return w;
}

inline WeightAssignment sample_weights(const Graph& g, std::uint64_t seed) {
  return sample_weights(g.edge_count(), seed);
}

}  // namespace richardson
