// race_events.hpp - classification of finished runs on family graphs.
//
// D-events are weight-sum inequalities evaluated directly on the clocks,
// without running the dynamics:
//   D1(n): type 1's passage to v_{1,a_n} is slower than type 2's passage
//          along spine 2 to the attach point and back across bridge n;
//   D2(n): type 2's passage to v_{2,attach(n)} is slower than type 1's
//          passage along spine 1 and across bridge n.
// Sums are accumulated in the same order the engine accumulates claim
// times, so D-events and simulated captures agree bit for bit.
#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "richardson/engine.hpp"
#include "richardson/families.hpp"
#include "richardson/graph.hpp"

namespace richardson {

enum class Strangled { none = 0, one = 1, two = 2 };
enum class Scenario { spine_split_i, spine_split_ii, undetermined };

inline const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::spine_split_i: return "spine_split_i";
    case Scenario::spine_split_ii: return "spine_split_ii";
    case Scenario::undetermined: return "undetermined";
  }
  return "undetermined";
}

struct LevelVerdict {
  int level = 0;
  bool d1 = false;
  bool d2 = false;
  bool type1_reached_landmark = false;
  bool type2_reached_landmark = false;
};

struct CoexistenceVerdict {
  int survived_to_level = 0;
  Strangled strangled_type = Strangled::none;
  Scenario scenario = Scenario::undetermined;
  int type2_spine = 0;  // auxiliary spine type 2 held at the deepest surviving level
};

namespace detail {

inline void require_ladder_level(const LandmarkMap& lm, int n) {
  if (lm.family != FamilyKind::ladder) throw std::invalid_argument("ladder landmark map required");
  if (n < 1 || n > lm.levels()) throw std::out_of_range("level " + std::to_string(n) + " outside 1.." + std::to_string(lm.levels()));
}

inline double spine_passage(std::span<const double> w, const std::vector<EdgeId>& edges, std::int64_t count,
                            double rate, double start = 0.0) {
  double t = start;
  for (std::int64_t j = 0; j < count; ++j) t += w[edges[static_cast<std::size_t>(j)]] / rate;
  return t;
}

}  // namespace detail

inline bool eval_D1(std::span<const double> w, const LandmarkMap& lm, int n, double lambda) {
  detail::require_ladder_level(lm, n);
  const auto idx = static_cast<std::size_t>(n - 1);
  const double type1 = detail::spine_passage(w, lm.spine_edges[0], lm.ladder_a[idx], 1.0);
  double type2 = detail::spine_passage(w, lm.spine_edges[1], lm.ladder_attach[idx], lambda);
  const auto& bridge = lm.bridge_edges[idx][0];
  for (auto it = bridge.rbegin(); it != bridge.rend(); ++it) type2 += w[*it] / lambda;
  return type1 > type2;
}

inline bool eval_D2(std::span<const double> w, const LandmarkMap& lm, int n, double lambda) {
  detail::require_ladder_level(lm, n);
  const auto idx = static_cast<std::size_t>(n - 1);
  const double type2 = detail::spine_passage(w, lm.spine_edges[1], lm.ladder_attach[idx], lambda);
  double type1 = detail::spine_passage(w, lm.spine_edges[0], lm.ladder_a[idx], 1.0);
  for (EdgeId e : lm.bridge_edges[idx][0]) type1 += w[e];
  return type2 > type1;
}

/// Largest n such that no D1(m) or D2(m) occurs for any m <= n.
inline int d_free_through(std::span<const double> w, const LandmarkMap& lm, double lambda) {
  int n = 0;
  while (n < lm.levels() && !eval_D1(w, lm, n + 1, lambda) && !eval_D2(w, lm, n + 1, lambda)) ++n;
  return n;
}

inline Strangled strangulation_check(const CompetitionOutcome& out) {
  const bool e1 = out.exhausted(Type::one);
  const bool e2 = out.exhausted(Type::two);
  if (e1 && !e2) return Strangled::one;
  if (e2 && !e1) return Strangled::two;
  return Strangled::none;
}

namespace detail {

/// Spine index (>= 1) of the first level-n point held by type 2, or 0.
inline int type2_point(const CompetitionOutcome& out, const LandmarkMap& lm, int n) {
  const auto& pts = lm.level_points[static_cast<std::size_t>(n)];
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (out.type[pts[i]] == Type::two) return static_cast<int>(i);
  return 0;
}

inline bool level_captured(const CompetitionOutcome& out, const LandmarkMap& lm, int n) {
  return out.type[lm.level_points[static_cast<std::size_t>(n)][0]] == Type::one && type2_point(out, lm, n) != 0;
}

}  // namespace detail

/// Truncated coexistence through level n: at every level m <= n type 1 holds
/// its point and type 2 holds at least one of the others.
inline bool coexistence_indicator(const CompetitionOutcome& out, const LandmarkMap& lm, int n) {
  if (n < 1 || n > lm.levels()) throw std::out_of_range("level " + std::to_string(n) + " has no landmarks");
  for (int m = 1; m <= n; ++m)
    if (!detail::level_captured(out, lm, m)) return false;
  return true;
}

inline int survived_to_level(const CompetitionOutcome& out, const LandmarkMap& lm) {
  int n = 0;
  while (n < lm.levels() && detail::level_captured(out, lm, n + 1)) ++n;
  return n;
}

/// Which type owns the far end of each ladder spine.
inline Scenario scenario_classify(const CompetitionOutcome& out, const LandmarkMap& lm) {
  if (lm.family != FamilyKind::ladder) throw std::invalid_argument("ladder landmark map required");
  const Type end1 = out.type[lm.spine_vertices[0].back()];
  const Type end2 = out.type[lm.spine_vertices[1].back()];
  if (end1 == Type::one && end2 == Type::two) return Scenario::spine_split_i;
  if (end1 == Type::two && end2 == Type::one) return Scenario::spine_split_ii;
  return Scenario::undetermined;
}

inline CoexistenceVerdict make_verdict(const CompetitionOutcome& out, const LandmarkMap& lm) {
  CoexistenceVerdict v;
  v.survived_to_level = survived_to_level(out, lm);
  v.strangled_type = strangulation_check(out);
  if (lm.family == FamilyKind::ladder) v.scenario = scenario_classify(out, lm);
  if (v.survived_to_level > 0) v.type2_spine = detail::type2_point(out, lm, v.survived_to_level);
  return v;
}

/// Per-level D-events and landmark captures for a ladder run.
inline std::vector<LevelVerdict> level_verdicts(const CompetitionOutcome& out, std::span<const double> w,
                                                const LandmarkMap& lm, double lambda) {
  std::vector<LevelVerdict> rows;
  for (int n = 1; n <= lm.levels(); ++n) {
    LevelVerdict v;
    v.level = n;
    if (lm.family == FamilyKind::ladder) {
      v.d1 = eval_D1(w, lm, n, lambda);
      v.d2 = eval_D2(w, lm, n, lambda);
    }
    const auto& pts = lm.level_points[static_cast<std::size_t>(n)];
    v.type1_reached_landmark = out.type[pts[0]] == Type::one;
    v.type2_reached_landmark = detail::type2_point(out, lm, n) != 0;
    rows.push_back(v);
  }
  return rows;
}

inline void write_verdict_header(std::ostream& os) { os << "rep,lambda,level,D1,D2,coex,strangled,scenario\n"; }

/// Verdict CSV rows for one run. D1/D2 are left empty off the ladder.
inline void write_verdict_rows(std::ostream& os, std::uint64_t rep, double lambda, const CompetitionOutcome& out,
                               std::span<const double> w, const LandmarkMap& lm) {
  const CoexistenceVerdict verdict = make_verdict(out, lm);
  const bool ladder = lm.family == FamilyKind::ladder;
  for (const LevelVerdict& lv : level_verdicts(out, w, lm, lambda)) {
    os << rep << ',' << format_real(lambda) << ',' << lv.level << ',';
    if (ladder) os << int(lv.d1) << ',' << int(lv.d2);
    else os << ',';
    os << ',' << int(coexistence_indicator(out, lm, lv.level)) << ',' << int(verdict.strangled_type) << ','
       << scenario_name(verdict.scenario) << '\n';
  }
}

}  // namespace richardson
