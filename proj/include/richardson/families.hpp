// families.hpp - generators for the ladder, multi-spine and countable
// constructions, truncated after a finite number of levels.
//
// Every generator returns the frozen Graph together with a LandmarkMap that
// names the construction vertices: spine vertices by index, bridge edges by
// level, and the per-level points the races are decided at.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "richardson/graph.hpp"
#include "richardson/model.hpp"

namespace richardson {

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Integer helpers

/// ceil(a^{7/8}) for a >= 1, exact: the floating estimate is corrected until
/// (c-1)^8 < a^7 <= c^8 holds in arbitrary precision.
inline std::int64_t ceil_pow78(std::int64_t a) {
  if (a < 1) throw SpecError("ceil_pow78 needs a positive argument");
  using boost::multiprecision::cpp_int;
  const cpp_int a7 = boost::multiprecision::pow(cpp_int(a), 7);
  auto pow8 = [](std::int64_t c) -> cpp_int { return boost::multiprecision::pow(cpp_int(c), 8); };
  auto c = static_cast<std::int64_t>(std::ceil(std::pow(static_cast<double>(a), 0.875)));
  c = std::max<std::int64_t>(c, 1);
  while (c > 1 && pow8(c - 1) >= a7) --c;
  while (pow8(c) < a7) ++c;
  return c;
}

/// ceil(x * n) for real x. Products within 1e-9 (relative) of an integer
/// snap to it so that e.g. 2.0000000000000004 * 4 gives 8, not 9.
inline std::int64_t ceil_scaled(double x, std::int64_t n) {
  const double p = x * static_cast<double>(n);
  const double r = std::round(p);
  if (std::abs(p - r) <= 1e-9 * std::max(1.0, std::abs(p))) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(p));
}

inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Specs

struct SequenceSpec {
  enum class Kind { geometric, explicit_list };

  Kind kind = Kind::geometric;
  std::int64_t base = 256;
  std::int64_t ratio = 4;
  std::int64_t count = 3;
  std::vector<std::int64_t> list;

  static SequenceSpec geometric(std::int64_t base, std::int64_t ratio, std::int64_t count) {
    SequenceSpec s;
    s.base = base;
    s.ratio = ratio;
    s.count = count;
    return s;
  }
  static SequenceSpec explicit_values(std::vector<std::int64_t> values) {
    SequenceSpec s;
    s.kind = Kind::explicit_list;
    s.count = static_cast<std::int64_t>(values.size());
    s.list = std::move(values);
    return s;
  }

  std::vector<std::int64_t> values() const {
    if (count < 1) throw SpecError("sequence count must be positive");
    std::vector<std::int64_t> out;
    if (kind == Kind::geometric) {
      if (base < 1) throw SpecError("sequence base must be a positive integer");
      if (ratio < 2) throw SpecError("sequence ratio must be at least 2");
      constexpr std::int64_t kCap = std::int64_t{1} << 40;
      std::int64_t v = base;
      for (std::int64_t n = 0; n < count; ++n) {
        if (v > kCap) throw SpecError("sequence term exceeds 2^40");
        out.push_back(v);
        if (n + 1 < count) v *= ratio;
      }
    } else {
      if (static_cast<std::int64_t>(list.size()) != count) throw SpecError("sequence count mismatch");
      out = list;
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] < 1) throw SpecError("sequence terms must be positive integers");
        if (i > 0 && out[i] <= out[i - 1]) throw SpecError("sequence must be strictly increasing");
      }
    }
    return out;
  }
};

enum class Correction { plus78, minus78, none };
enum class EndShift { none, plus78 };

/// Bridge n runs from v_{1,a_n} to v_{2,attach(a_n)} and has bridge_length(a_n) edges.
struct BridgeRule {
  double gamma = 2.0;
  double beta = 0.0;
  Correction correction = Correction::plus78;
  EndShift end_shift = EndShift::none;

  void validate() const {
    if (!(gamma >= 1.0) || !std::isfinite(gamma)) throw SpecError("gamma must be >= 1");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw SpecError("beta must be >= 0");
  }

  std::int64_t attach_index(std::int64_t a) const {
    std::int64_t idx = ceil_scaled(gamma, a);
    if (end_shift == EndShift::plus78) idx += ceil_pow78(a);
    return idx;
  }

  std::int64_t bridge_length(std::int64_t a) const {
    std::int64_t len = beta == 0.0 ? 0 : ceil_scaled(beta, a);
    if (correction == Correction::plus78) len += ceil_pow78(a);
    if (correction == Correction::minus78) len -= ceil_pow78(a);
    if (len < 1) {
      throw SpecError("bridge length underflow at a_n=" + std::to_string(a) + " (length " +
                      std::to_string(len) + ")");
    }
    return len;
  }
};

struct LadderSpec {
  SequenceSpec a = SequenceSpec::geometric(256, 4, 3);
  BridgeRule rule;
  std::int64_t tail = 64;
};

struct MultiSpineSpec {
  int k = 2;
  std::vector<double> alphas{2.0, 4.0};
  SequenceSpec b = SequenceSpec::geometric(512, 4, 3);
  std::vector<double> delta;  // empty: default schedule
  std::vector<double> eps;    // empty: default schedule
  std::int64_t tail = 64;

  /// delta_n = 0.2 * min-gap * 2^{-(n-1)}, min-gap over distinct {1, alpha_i}.
  std::vector<double> delta_schedule() const {
    if (!delta.empty()) return delta;
    std::set<double> distinct(alphas.begin(), alphas.end());
    distinct.insert(1.0);
    double gap = std::numeric_limits<double>::infinity();
    for (auto it = std::next(distinct.begin()); it != distinct.end(); ++it) {
      gap = std::min(gap, *it - *std::prev(it));
    }
    if (!std::isfinite(gap)) gap = 1.0;
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::max<std::int64_t>(b.count, 1));
    for (std::size_t i = 0; i < n; ++i) out.push_back(0.2 * gap * std::ldexp(1.0, -static_cast<int>(i)));
    return out;
  }

  /// eps_n = 2^{-n} / (2(k+2)); the full series sums to 1/(2(k+2)).
  std::vector<double> eps_schedule() const {
    if (!eps.empty()) return eps;
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::max<std::int64_t>(b.count, 1));
    for (std::size_t i = 1; i <= n; ++i) {
      out.push_back(std::ldexp(1.0, -static_cast<int>(i)) / (2.0 * (k + 2)));
    }
    return out;
  }

  void validate() const {
    if (k < 1) throw SpecError("k >= 1 required");
    if (static_cast<int>(alphas.size()) != k) throw SpecError("alphas must have exactly k entries");
    for (double a : alphas)
      if (!(a >= 1.0) || !std::isfinite(a)) throw SpecError("alphas must lie in [1, inf)");
    const auto bs = b.values();
    auto check_schedule = [&](const std::vector<double>& s, const char* name) {
      if (s.size() < bs.size()) throw SpecError(std::string(name) + " schedule shorter than b");
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s[i] > 0.0)) throw SpecError(std::string(name) + " entries must be positive");
        if (i > 0 && s[i] > s[i - 1]) throw SpecError(std::string(name) + " must be nonincreasing");
      }
    };
    check_schedule(delta_schedule(), "delta");
    const auto e = eps_schedule();
    check_schedule(e, "eps");
    double sum = 0.0;
    for (double x : e) sum += x;
    if (!(sum < 1.0 / (k + 2))) throw SpecError("eps series must sum to less than 1/(k+2)");
    if (tail < 0) throw SpecError("tail must be nonnegative");
  }
};

struct CountableSpec {
  std::vector<double> alphas{1.5, 2.5, 4.0};
  SequenceSpec b = SequenceSpec::geometric(512, 4, 3);
  std::int64_t tail = 64;

  void validate() const {
    const auto bs = b.values();
    if (alphas.empty()) throw SpecError("alphas must be nonempty");
    if (!(alphas.front() >= 1.0)) throw SpecError("alpha_1 must be >= 1");
    for (std::size_t i = 1; i < alphas.size(); ++i)
      if (!(alphas[i] > alphas[i - 1])) throw SpecError("alphas must be strictly increasing");
    if (alphas.size() < bs.size()) throw SpecError("need one alpha per level");
    if (tail < 0) throw SpecError("tail must be nonnegative");
  }
};

using FamilySpec = std::variant<LadderSpec, MultiSpineSpec, CountableSpec>;

// ---------------------------------------------------------------------------
// Landmarks

enum class FamilyKind { ladder, multispine, countable, custom };

inline const char* family_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::ladder: return "ladder";
    case FamilyKind::multispine: return "multispine";
    case FamilyKind::countable: return "countable";
    case FamilyKind::custom: return "custom";
  }
  return "custom";
}

struct LandmarkMap {
  FamilyKind family = FamilyKind::custom;

  // spine_vertices[i][j] is the j-th vertex of spine i; spine_edges[i][j]
  // joins spine_vertices[i][j] and spine_vertices[i][j+1].
  std::vector<std::vector<VertexId>> spine_vertices;
  std::vector<std::vector<EdgeId>> spine_edges;

  // bridge_edges[n-1][i]: edges of the i-th bridge added at level n, ordered
  // from the type-1 side (spine 1 / main spine) toward the other end.
  std::vector<std::vector<std::vector<EdgeId>>> bridge_edges;

  // level_points[n] for n = 0..levels(). Entry 0 is the point type 1 must
  // hold; entries 1.. are the points at least one of which type 2 must hold.
  std::vector<std::vector<VertexId>> level_points;

  // Vertices past the last construction level; reaching one of them stands
  // in for reaching infinitely many sites.
  std::vector<VertexId> boundary;

  // Ladder only: a_n and the spine-2 attach index, per level (index n-1).
  std::vector<std::int64_t> ladder_a;
  std::vector<std::int64_t> ladder_attach;

  int levels() const { return static_cast<int>(level_points.size()) - 1; }

  /// Stop targets: every level point of every level plus the far end of each spine.
  std::vector<VertexId> stop_targets() const {
    std::vector<VertexId> t;
    for (const auto& lv : level_points) t.insert(t.end(), lv.begin(), lv.end());
    for (const auto& sp : spine_vertices)
      if (!sp.empty()) t.push_back(sp.back());
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
  }
};

struct FamilyGraph {
  Graph graph;
  LandmarkMap landmarks;
};

namespace detail {

inline void append_segment(std::vector<VertexId>& verts, std::vector<EdgeId>& edges,
                           const PathSegment& seg) {
  verts.insert(verts.end(), seg.vertices.begin(), seg.vertices.end());
  edges.insert(edges.end(), seg.edges.begin(), seg.edges.end());
}

inline void collect_tail_boundary(LandmarkMap& lm, const std::vector<std::size_t>& tail_start) {
  for (std::size_t i = 0; i < lm.spine_vertices.size(); ++i) {
    const auto& sp = lm.spine_vertices[i];
    for (std::size_t j = tail_start[i]; j < sp.size(); ++j) lm.boundary.push_back(sp[j]);
    if (tail_start[i] >= sp.size()) lm.boundary.push_back(sp.back());
  }
  std::sort(lm.boundary.begin(), lm.boundary.end());
  lm.boundary.erase(std::unique(lm.boundary.begin(), lm.boundary.end()), lm.boundary.end());
}

}  // namespace detail

inline FamilyGraph build_ladder(const LadderSpec& spec) {
  spec.rule.validate();
  if (spec.tail < 0) throw SpecError("tail must be nonnegative");
  const auto as = spec.a.values();

  std::vector<std::int64_t> attach, lengths;
  for (std::size_t n = 0; n < as.size(); ++n) {
    attach.push_back(spec.rule.attach_index(as[n]));
    lengths.push_back(spec.rule.bridge_length(as[n]));
    if (n > 0 && attach[n] <= attach[n - 1]) throw SpecError("overlapping attach indices");
  }

  GraphBuilder b;
  LandmarkMap lm;
  lm.family = FamilyKind::ladder;
  lm.spine_vertices.resize(2);
  lm.spine_edges.resize(2);
  const std::int64_t len1 = as.back() + spec.tail;
  const std::int64_t len2 = attach.back() + spec.tail;

  for (int s = 0; s < 2; ++s) {
    const std::string name = s == 0 ? "s1" : "s2";
    VertexId root = b.add_vertex(name + ":0");
    lm.spine_vertices[s].push_back(root);
    const std::int64_t len = s == 0 ? len1 : len2;
    if (len > 0) detail::append_segment(lm.spine_vertices[s], lm.spine_edges[s], b.add_path(root, len, name));
  }

  lm.level_points.push_back({lm.spine_vertices[0][0], lm.spine_vertices[1][0]});
  for (std::size_t n = 0; n < as.size(); ++n) {
    const VertexId from = lm.spine_vertices[0][static_cast<std::size_t>(as[n])];
    const VertexId to = lm.spine_vertices[1][static_cast<std::size_t>(attach[n])];
    PathSegment seg = b.add_bridge(from, to, lengths[n], "B" + std::to_string(n + 1));
    lm.bridge_edges.push_back({std::move(seg.edges)});
    lm.level_points.push_back({from, to});
  }
  lm.ladder_a = as;
  lm.ladder_attach = attach;
  detail::collect_tail_boundary(lm, {static_cast<std::size_t>(as.back()) + 1,
                                     static_cast<std::size_t>(attach.back()) + 1});
  return {b.freeze(), std::move(lm)};
}

inline FamilyGraph build_multispine(const MultiSpineSpec& spec) {
  spec.validate();
  const auto bs = spec.b.values();
  const auto k = static_cast<std::size_t>(spec.k);

  GraphBuilder b;
  LandmarkMap lm;
  lm.family = FamilyKind::multispine;
  lm.spine_vertices.resize(k + 1);
  lm.spine_edges.resize(k + 1);

  std::vector<VertexId> x(k + 1);
  for (std::size_t i = 0; i <= k; ++i) {
    x[i] = b.add_vertex("x0," + std::to_string(i));
    lm.spine_vertices[i].push_back(x[i]);
  }
  for (std::size_t i = 0; i <= k; ++i)
    for (std::size_t j = i + 1; j <= k; ++j) b.add_edge(x[i], x[j]);
  lm.level_points.push_back(x);

  for (std::size_t n = 0; n < bs.size(); ++n) {
    const std::int64_t bn = bs[n];
    for (std::size_t i = 0; i <= k; ++i) {
      const double alpha = i == 0 ? 1.0 : spec.alphas[i - 1];
      PathSegment seg = b.add_path(x[i], ceil_scaled(alpha, bn),
                                   "sp" + std::to_string(i) + ".L" + std::to_string(n + 1));
      detail::append_segment(lm.spine_vertices[i], lm.spine_edges[i], seg);
      x[i] = seg.back();
    }
    std::vector<std::vector<EdgeId>> level_bridges;
    const std::int64_t blen = ceil_pow78(bn);
    for (std::size_t i = 1; i <= k; ++i) {
      PathSegment seg = b.add_bridge(x[0], x[i], blen,
                                     "B" + std::to_string(n + 1) + "," + std::to_string(i));
      level_bridges.push_back(std::move(seg.edges));
    }
    lm.bridge_edges.push_back(std::move(level_bridges));
    lm.level_points.push_back(x);
  }

  std::vector<std::size_t> tail_start;
  for (std::size_t i = 0; i <= k; ++i) {
    tail_start.push_back(lm.spine_vertices[i].size());
    if (spec.tail > 0) {
      detail::append_segment(lm.spine_vertices[i], lm.spine_edges[i],
                             b.add_path(x[i], spec.tail, "tail" + std::to_string(i)));
    }
  }
  detail::collect_tail_boundary(lm, tail_start);
  return {b.freeze(), std::move(lm)};
}

inline FamilyGraph build_countable(const CountableSpec& spec) {
  spec.validate();
  const auto bs = spec.b.values();

  GraphBuilder b;
  LandmarkMap lm;
  lm.family = FamilyKind::countable;
  std::vector<VertexId> x{b.add_vertex("x0,0")};
  lm.spine_vertices.push_back({x[0]});
  lm.spine_edges.emplace_back();
  lm.level_points.push_back(x);

  for (std::size_t n = 0; n < bs.size(); ++n) {
    const std::int64_t bn = bs[n];
    const VertexId branch = x[n];
    std::vector<VertexId> next(n + 2);
    for (std::size_t i = 0; i <= n; ++i) {
      const double alpha = i == 0 ? 1.0 : spec.alphas[i - 1];
      PathSegment seg = b.add_path(x[i], ceil_scaled(alpha, bn),
                                   "sp" + std::to_string(i) + ".L" + std::to_string(n + 1));
      detail::append_segment(lm.spine_vertices[i], lm.spine_edges[i], seg);
      next[i] = seg.back();
    }
    lm.spine_vertices.push_back({branch});
    lm.spine_edges.emplace_back();
    PathSegment spawn = b.add_path(branch, ceil_scaled(spec.alphas[n], bn),
                                   "sp" + std::to_string(n + 1) + ".L" + std::to_string(n + 1));
    detail::append_segment(lm.spine_vertices[n + 1], lm.spine_edges[n + 1], spawn);
    next[n + 1] = spawn.back();

    std::vector<std::vector<EdgeId>> level_bridges;
    const std::int64_t blen = ceil_pow78(bn);
    for (std::size_t i = 1; i <= n; ++i) {
      PathSegment seg = b.add_bridge(next[0], next[i], blen,
                                     "B" + std::to_string(n + 1) + "," + std::to_string(i));
      level_bridges.push_back(std::move(seg.edges));
    }
    lm.bridge_edges.push_back(std::move(level_bridges));
    x = std::move(next);
    lm.level_points.push_back(x);
  }

  std::vector<std::size_t> tail_start;
  for (std::size_t i = 0; i < lm.spine_vertices.size(); ++i) {
    tail_start.push_back(lm.spine_vertices[i].size());
    if (spec.tail > 0) {
      detail::append_segment(lm.spine_vertices[i], lm.spine_edges[i],
                             b.add_path(x[i], spec.tail, "tail" + std::to_string(i)));
    }
  }
  detail::collect_tail_boundary(lm, tail_start);
  return {b.freeze(), std::move(lm)};
}

inline FamilyGraph build_family(const FamilySpec& spec) {
  return std::visit(
      [](const auto& s) -> FamilyGraph {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, LadderSpec>) return build_ladder(s);
        else if constexpr (std::is_same_v<S, MultiSpineSpec>) return build_multispine(s);
        else return build_countable(s);
      },
      spec);
}

// ---------------------------------------------------------------------------
// Initial configurations

/// Type 1 at v_{1,0} and type 2 at v_{2,0}; `swapped` exchanges them.
inline InitialConfig ladder_init(const LandmarkMap& lm, bool swapped = false) {
  InitialConfig c;
  c.add(lm.level_points.at(0).at(0), swapped ? Type::two : Type::one);
  c.add(lm.level_points.at(0).at(1), swapped ? Type::one : Type::two);
  return c;
}

/// Type 2 at x_{level,spine}, type 1 at every other x_{level,j}.
inline InitialConfig spine_init(const LandmarkMap& lm, std::size_t spine, std::size_t level = 0) {
  const auto& pts = lm.level_points.at(level);
  if (spine == 0 || spine >= pts.size()) throw SpecError("initial spine index out of range");
  InitialConfig c;
  for (std::size_t j = 0; j < pts.size(); ++j) c.add(pts[j], j == spine ? Type::two : Type::one);
  return c;
}

// ---------------------------------------------------------------------------
// Predicted coexistence regions

struct Region {
  enum class Kind { interval, points };

  Kind kind = Kind::points;
  double lo = 0.0, hi = 0.0;
  bool lo_closed = true, hi_closed = true;
  std::vector<double> points;
  bool truncated = false;  // countable: only a prefix of the sequence is listed

  bool contains(double lambda) const {
    if (kind == Kind::points) {
      return std::any_of(points.begin(), points.end(),
                         [&](double p) { return std::abs(p - lambda) <= 1e-12 * std::max(1.0, p); });
    }
    const bool above = lo_closed ? lambda >= lo * (1 - 1e-12) : lambda > lo;
    const bool below = hi_closed ? lambda <= hi * (1 + 1e-12) : lambda < hi;
    return above && below;
  }

  /// Closure of the region; used to decide where two-sided bounds exist.
  bool closure_contains(double lambda) const {
    if (kind == Kind::points) return contains(lambda);
    return lambda >= lo * (1 - 1e-12) && lambda <= hi * (1 + 1e-12);
  }

  std::string to_string() const {
    if (kind == Kind::interval) {
      if (lo == hi) return lo_closed && hi_closed ? "{" + format_real(lo) + "}" : "{}";
      return std::string(lo_closed ? "[" : "(") + format_real(lo) + "," + format_real(hi) +
             (hi_closed ? "]" : ")");
    }
    std::string s = "{";
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (i) s += ",";
      s += format_real(points[i]);
    }
    if (truncated) s += ",...";
    return s + "}";
  }
};

/// Ladder: [gamma/(1+beta), gamma+beta] with each endpoint included iff the
/// a_n^{7/8}-order margin of the race decided there is strictly positive.
inline Region predicted_region(const LadderSpec& spec) {
  const BridgeRule& r = spec.rule;
  r.validate();
  const double corr = r.correction == Correction::plus78 ? 1.0 : r.correction == Correction::minus78 ? -1.0 : 0.0;
  const double shift = r.end_shift == EndShift::plus78 ? 1.0 : 0.0;
  Region reg;
  reg.kind = Region::Kind::interval;
  reg.lo = r.gamma / (1.0 + r.beta);
  reg.hi = r.gamma + r.beta;
  reg.lo_closed = corr - shift * (1.0 + r.beta) / r.gamma > 0.0;
  reg.hi_closed = corr + shift > 0.0;
  return reg;
}

inline Region predicted_region(const MultiSpineSpec& spec) {
  Region reg;
  reg.points = spec.alphas;
  std::sort(reg.points.begin(), reg.points.end());
  reg.points.erase(std::unique(reg.points.begin(), reg.points.end()), reg.points.end());
  return reg;
}

inline Region predicted_region(const CountableSpec& spec) {
  Region reg;
  reg.points = spec.alphas;
  reg.truncated = true;
  return reg;
}

inline Region predicted_region(const FamilySpec& spec) {
  return std::visit([](const auto& s) { return predicted_region(s); }, spec);
}

}  // namespace richardson
