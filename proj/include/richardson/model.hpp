// model.hpp - shared vocabulary of the two-type competition model.
#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "richardson/graph.hpp"

namespace richardson {

/// Infection type. `none` marks an unclaimed vertex.
enum class Type : std::uint8_t { none = 0, one = 1, two = 2 };

inline constexpr int type_index(Type t) { return static_cast<int>(t); }

inline constexpr Type opponent(Type t) {
  return t == Type::one ? Type::two : (t == Type::two ? Type::one : Type::none);
}

/// Finitely many initially infected vertices.
struct InitialConfig {
  std::vector<std::pair<VertexId, Type>> seeds;

  InitialConfig& add(VertexId v, Type t) {
    seeds.emplace_back(v, t);
    return *this;
  }
  bool has(Type t) const {
    for (const auto& s : seeds)
      if (s.second == t) return true;
    return false;
  }
};

/// One positive passage weight X(e) per edge, indexed by EdgeId.
using WeightAssignment = std::vector<double>;

}  // namespace richardson
