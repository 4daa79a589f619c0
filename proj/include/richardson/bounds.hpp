// bounds.hpp - moments of the ladder race variables and the Chebyshev
// machinery built on them.
//
// For level n write S1 = a_n spine-1 edges, S2 = attach(n) spine-2 edges and
// L = bridge length. With independent Exp(1) clocks,
//   T1 = (S2 + L)/lambda - S1   (D1 = {T1 < 0})
//   T2 = S1 + L - S2/lambda     (D2 = {T2 < 0}).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "richardson/families.hpp"

namespace richardson {

class BoundError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct MomentPair {
  double mean = 0.0;
  double variance = 0.0;
};

inline MomentPair moments_T1(double lambda, std::int64_t a_n, std::int64_t spine2_len, std::int64_t bridge_len) {
  const double inv = 1.0 / lambda;
  const double s2 = static_cast<double>(spine2_len), l = static_cast<double>(bridge_len), a = static_cast<double>(a_n);
  return {inv * s2 + inv * l - a, inv * inv * s2 + inv * inv * l + a};
}

inline MomentPair moments_T2(double lambda, std::int64_t a_n, std::int64_t spine2_len, std::int64_t bridge_len) {
  const double inv = 1.0 / lambda;
  const double s2 = static_cast<double>(spine2_len), l = static_cast<double>(bridge_len), a = static_cast<double>(a_n);
  return {a + l - inv * s2, a + l + inv * inv * s2};
}

enum class Side { event_T_negative, event_T_nonnegative };

/// P(T < 0) <= Var/E^2 when E > 0, and P(T >= 0) <= Var/E^2 when E < 0.
inline double chebyshev_prob_bound(const MomentPair& m, Side side) {
  if ((side == Side::event_T_negative && !(m.mean > 0.0)) ||
      (side == Side::event_T_nonnegative && !(m.mean < 0.0))) {
    throw BoundError("bound vacuous");
  }
  return std::clamp(m.variance / (m.mean * m.mean), 0.0, 1.0);
}

struct LevelBound {
  int level = 0;
  double bound_d1 = 1.0;  // upper bound on P(D1); 1 where no bound applies
  double bound_d2 = 1.0;
};

struct BoundReport {
  std::vector<LevelBound> levels;
  double union_sum = 0.0;
  double lower_bound = 0.0;
  bool valid = false;  // false: lambda outside the closure of the predicted region
};

/// Union bound P(C_truncated) >= 1 - sum_n (P(D1_n) + P(D2_n)).
inline BoundReport coexistence_lower_bound(const LadderSpec& spec, double lambda) {
  if (!(lambda > 0.0)) throw BoundError("lambda must be positive");
  const auto as = spec.a.values();
  BoundReport rep;
  rep.valid = predicted_region(spec).closure_contains(lambda);
  for (std::size_t i = 0; i < as.size(); ++i) {
    LevelBound lb;
    lb.level = static_cast<int>(i + 1);
    const std::int64_t s2 = spec.rule.attach_index(as[i]);
    const std::int64_t len = spec.rule.bridge_length(as[i]);
    const MomentPair m1 = moments_T1(lambda, as[i], s2, len);
    const MomentPair m2 = moments_T2(lambda, as[i], s2, len);
    if (m1.mean > 0.0) lb.bound_d1 = chebyshev_prob_bound(m1, Side::event_T_negative);
    if (m2.mean > 0.0) lb.bound_d2 = chebyshev_prob_bound(m2, Side::event_T_negative);
    rep.union_sum += lb.bound_d1 + lb.bound_d2;
    rep.levels.push_back(lb);
  }
  rep.lower_bound = rep.valid ? std::max(0.0, 1.0 - rep.union_sum) : 0.0;
  return rep;
}

inline void write_bound_report(std::ostream& os, const BoundReport& rep) {
  os << "level,bound_D1,bound_D2\n";
  char buf[128];
  for (const LevelBound& lb : rep.levels) {
    std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g\n", lb.level, lb.bound_d1, lb.bound_d2);
    os << buf;
  }
  os << "union_sum,coex_lower_bound\n";
  if (rep.valid) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", rep.union_sum, rep.lower_bound);
  } else {
    std::snprintf(buf, sizeof buf, "%.10g,no valid lower bound\n", rep.union_sum);
  }
  os << buf;
}

struct ChooseA1Error : BoundError {
  ChooseA1Error(const std::string& msg, double best) : BoundError(msg), best_sum(best) {}
  double best_sum;
};

/// Smallest power of two a_1 (up to 2^32) whose union sum is <= target.
inline std::int64_t choose_a1(double target_sum, std::int64_t ratio, std::int64_t n_max, double lambda,
                              const BridgeRule& rule = {}) {
  if (!(target_sum > 0.0 && target_sum < 1.0)) throw BoundError("target sum must lie in (0,1)");
  double best = 2.0 * static_cast<double>(n_max);
  for (int p = 0; p <= 32; ++p) {
    LadderSpec spec;
    spec.a = SequenceSpec::geometric(std::int64_t{1} << p, ratio, n_max);
    spec.rule = rule;
    BoundReport rep;
    try {
      rep = coexistence_lower_bound(spec, lambda);
    } catch (const SpecError&) {
      continue;  // sequence overflow or bridge underflow at this a_1
    }
    best = std::min(best, rep.union_sum);
    if (rep.union_sum <= target_sum) return std::int64_t{1} << p;
  }
  throw ChooseA1Error("target union sum unreachable; best achievable " + format_real(best), best);
}

// ---------------------------------------------------------------------------
// Multi-spine construction conditions

struct ConditionI {
  bool pass = true;
  double worst_frequency = 1.0;
  std::int64_t worst_path_length = 0;  // N at which the worst frequency occurred
};

struct ConditionII {
  double lhs = 0.0;  // 2 alpha_max b^{3/4}
  double rhs = 0.0;  // delta b / 2
  bool pass = false;
};

struct ConditionIII {
  double frequency = 0.0;
  bool pass = false;
};

struct GrowthLevel {
  int level = 0;
  std::int64_t b = 0;
  double delta = 0.0;
  double eps = 0.0;
  ConditionI cond_i;
  ConditionII cond_ii;
  ConditionIII cond_iii;
};

struct GrowthReport {
  std::vector<GrowthLevel> levels;
  double eps_sum = 0.0;
  double eps_limit = 0.0;
  bool eps_pass = false;
  int samples = 0;
};

/// Per-level check of the multi-spine growth conditions:
///  (i)   an isolated path of N = ceil(alpha_i b) edges is traversed within
///        r N +- N^{3/4} (r = lambda^{1-type}) with frequency >= 1 - eps,
///        tested at rate 1 (type 1) and rates 1 and alpha_i (type 2);
///  (ii)  2 alpha_max b^{3/4} < delta b / 2, evaluated exactly;
///  (iii) all k bridge sums land in (2 alpha_max b^{3/4}, delta b / 2)
///        jointly with frequency >= 1 - eps.
/// Path and bridge sums of Exp(1) clocks are drawn as Gamma(N, 1) variates.
/// Only isolated-path surrogates are tested, never the full conditional.
inline GrowthReport check_growth_conditions(const MultiSpineSpec& spec, std::uint64_t seed, int samples = 10000) {
  spec.validate();
  const auto bs = spec.b.values();
  const auto delta = spec.delta_schedule();
  const auto eps = spec.eps_schedule();
  const double alpha_max = *std::max_element(spec.alphas.begin(), spec.alphas.end());

  GrowthReport rep;
  rep.samples = samples;
  for (double e : eps) rep.eps_sum += e;
  rep.eps_limit = 1.0 / (spec.k + 2);
  rep.eps_pass = rep.eps_sum < rep.eps_limit;

  std::mt19937_64 gen(seed);
  for (std::size_t n = 0; n < bs.size(); ++n) {
    GrowthLevel lv;
    lv.level = static_cast<int>(n + 1);
    lv.b = bs[n];
    lv.delta = delta[n];
    lv.eps = eps[n];
    const double b = static_cast<double>(bs[n]);

    lv.cond_ii.lhs = 2.0 * alpha_max * std::pow(b, 0.75);
    lv.cond_ii.rhs = lv.delta * b / 2.0;
    lv.cond_ii.pass = lv.cond_ii.lhs < lv.cond_ii.rhs;

    for (int i = 0; i <= spec.k; ++i) {
      const double alpha = i == 0 ? 1.0 : spec.alphas[static_cast<std::size_t>(i - 1)];
      const std::int64_t N = ceil_scaled(alpha, bs[n]);
      const double nd = static_cast<double>(N);
      const double half = std::pow(nd, 0.75);
      std::gamma_distribution<double> path_sum(nd, 1.0);
      std::vector<double> rates{1.0};
      if (i > 0 && alpha != 1.0) rates.push_back(alpha);
      for (double rate : rates) {
        const double centre = nd / rate;
        int hits = 0;
        for (int s = 0; s < samples; ++s) {
          const double t = path_sum(gen) / rate;
          if (t > centre - half && t < centre + half) ++hits;
        }
        const double freq = static_cast<double>(hits) / samples;
        if (freq < lv.cond_i.worst_frequency || lv.cond_i.worst_path_length == 0) {
          lv.cond_i.worst_frequency = freq;
          lv.cond_i.worst_path_length = N;
        }
      }
    }
    lv.cond_i.pass = lv.cond_i.worst_frequency >= 1.0 - lv.eps;

    const double blen = static_cast<double>(ceil_pow78(bs[n]));
    std::gamma_distribution<double> bridge_sum(blen, 1.0);
    int joint = 0;
    for (int s = 0; s < samples; ++s) {
      bool all_in = true;
      for (int i = 0; i < spec.k; ++i) {
        const double x = bridge_sum(gen);
        all_in = all_in && x > lv.cond_ii.lhs && x < lv.cond_ii.rhs;
      }
      if (all_in) ++joint;
    }
    lv.cond_iii.frequency = static_cast<double>(joint) / samples;
    lv.cond_iii.pass = lv.cond_iii.frequency >= 1.0 - lv.eps;
    rep.levels.push_back(lv);
  }
  return rep;
}

inline void write_growth_report(std::ostream& os, const GrowthReport& rep) {
  char buf[256];
  os << "level,b,delta,eps,cond_i_freq,cond_i_N,cond_i,cond_ii_lhs,cond_ii_rhs,cond_ii,cond_iii_freq,cond_iii\n";
  for (const GrowthLevel& lv : rep.levels) {
    std::snprintf(buf, sizeof buf, "%d,%lld,%.6g,%.6g,%.4f,%lld,%s,%.6g,%.6g,%s,%.4f,%s\n", lv.level,
                  static_cast<long long>(lv.b), lv.delta, lv.eps, lv.cond_i.worst_frequency,
                  static_cast<long long>(lv.cond_i.worst_path_length), lv.cond_i.pass ? "PASS" : "FAIL",
                  lv.cond_ii.lhs, lv.cond_ii.rhs, lv.cond_ii.pass ? "PASS" : "FAIL", lv.cond_iii.frequency,
                  lv.cond_iii.pass ? "PASS" : "FAIL");
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "eps_sum,%.6g,limit,%.6g,%s\n", rep.eps_sum, rep.eps_limit,
                rep.eps_pass ? "PASS" : "FAIL");
  os << buf;
}

}  // namespace richardson
