// harness.hpp - replicated Monte Carlo experiments over lambda grids.
//
// Replication r at grid position l draws its clocks from the stream
// mix64(master_seed, l, r); coupled sweeps use l = 0 for every lambda so
// all grid points of a replication share one realization. Results land in
// slots keyed by (lambda_index, replication), which makes the aggregate
// independent of thread count and scheduling.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <mutex>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "richardson/engine.hpp"
#include "richardson/families.hpp"
#include "richardson/race_events.hpp"
#include "richardson/rng.hpp"

namespace richardson {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double half_width() const { return 0.5 * (hi - lo); }
  bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

/// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.96) {
  if (trials == 0) throw std::invalid_argument("wilson_interval needs at least one trial");
  if (successes > trials) throw std::invalid_argument("successes exceed trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  Interval ci{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  if (successes == 0) ci.lo = 0.0;
  if (successes == trials) ci.hi = 1.0;
  return ci;
}

inline unsigned resolve_threads(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(worker, item) for item in [0, count) on `threads` workers.
/// Items are claimed dynamically; body must only write item-keyed state.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&](unsigned id) {
    try {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(id, i);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(count);
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// Family instances

/// A built family graph with the initial configurations a sweep tries. A
/// replication counts as coexisting at level n if any configuration does.
struct FamilyInstance {
  std::string family;
  std::string spec_hash = "-";
  FamilyGraph fg;
  std::vector<InitialConfig> inits;
};

/// Ladder: "canonical" or "swapped". Spine families: "any" tries type 2 on
/// each auxiliary spine in turn; a number selects that spine only.
inline FamilyInstance make_instance(const FamilySpec& spec, const std::string& init = "") {
  FamilyInstance inst;
  inst.fg = build_family(spec);
  const LandmarkMap& lm = inst.fg.landmarks;
  inst.family = family_name(lm.family);
  if (lm.family == FamilyKind::ladder) {
    if (init.empty() || init == "canonical") inst.inits.push_back(ladder_init(lm, false));
    else if (init == "swapped") inst.inits.push_back(ladder_init(lm, true));
    else throw SpecError("ladder init must be \"canonical\" or \"swapped\"");
    return inst;
  }
  // Multi-spine: configurations live on G_0. Countable: spine i exists from
  // level i on, so its configuration is placed on G_i.
  const bool countable = lm.family == FamilyKind::countable;
  const std::size_t spines = countable ? static_cast<std::size_t>(lm.levels()) : lm.level_points[0].size() - 1;
  auto config = [&](std::size_t i) { return spine_init(lm, i, countable ? i : 0); };
  if (init.empty() || init == "any") {
    for (std::size_t i = 1; i <= spines; ++i) inst.inits.push_back(config(i));
  } else {
    std::size_t i = 0;
    try {
      i = std::stoul(init);
    } catch (const std::exception&) {
      throw SpecError("init must be \"any\" or a spine index");
    }
    if (i < 1 || i > spines) throw SpecError("init spine index out of range");
    inst.inits.push_back(config(i));
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Coexistence sweeps

struct SweepPlan {
  std::vector<double> lambdas;
  std::vector<int> levels;
  std::uint64_t reps = 1;
  std::uint64_t master_seed = 0;
  int threads = 0;  // 0: hardware concurrency
  bool coupled = true;

  void validate(const LandmarkMap& lm) const {
    if (reps < 1) throw SpecError("reps must be >= 1");
    if (lambdas.empty()) throw SpecError("lambda grid must be nonempty");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      if (!(lambdas[i] > 0.0) || !std::isfinite(lambdas[i])) throw SpecError("lambda must be positive");
      if (i > 0 && !(lambdas[i] > lambdas[i - 1])) throw SpecError("lambda grid must be ascending");
    }
    if (levels.empty()) throw SpecError("levels must be nonempty");
    for (int n : levels)
      if (n < 1 || n > lm.levels()) throw SpecError("level " + std::to_string(n) + " outside 1.." + std::to_string(lm.levels()));
  }
};

struct CurveRow {
  double lambda = 0.0;
  int level = 0;
  std::uint64_t successes = 0;
  std::uint64_t reps = 0;
  double p_hat = 0.0;
  Interval ci;
};

struct CoexistenceCurve {
  std::string family;
  std::string spec_hash;
  std::uint64_t seed = 0;
  std::vector<CurveRow> rows;

  const CurveRow& at(double lambda, int level) const {
    for (const CurveRow& r : rows)
      if (r.lambda == lambda && r.level == level) return r;
    throw std::out_of_range("no curve row for lambda " + format_real(lambda));
  }
};

/// Per-(lambda, replication) outcome kept for diagnostics.
struct RealizationRecord {
  std::uint64_t rep = 0;
  std::uint32_t lambda_index = 0;
  int survived = 0;     // deepest level reached by the best configuration
  int d_free = -1;      // ladder: levels cleared of D-events (first config); -1 otherwise
  std::uint64_t stream_seed = 0;
};

struct SweepOptions {
  std::vector<RealizationRecord>* records = nullptr;
  std::ostream* progress = nullptr;
};

inline CoexistenceCurve sweep(const FamilyInstance& inst, const SweepPlan& plan, SweepOptions opts = {}) {
  const Graph& g = inst.fg.graph;
  const LandmarkMap& lm = inst.fg.landmarks;
  plan.validate(lm);
  if (inst.inits.empty()) throw SpecError("family instance has no initial configuration");

  const std::size_t nl = plan.lambdas.size();
  const std::size_t groups = plan.coupled ? 1 : nl;
  const std::size_t items = static_cast<std::size_t>(plan.reps) * groups;
  std::vector<RealizationRecord> cells(static_cast<std::size_t>(plan.reps) * nl);

  const LandmarkStop stop{lm.stop_targets(), {}};
  const unsigned threads = resolve_threads(plan.threads);
  std::vector<Engine> engines(threads, Engine(g));
  std::vector<WeightAssignment> weights(threads, WeightAssignment(g.edge_count()));
  const bool ladder = lm.family == FamilyKind::ladder;

  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  parallel_for(items, threads, [&](unsigned worker, std::size_t item) {
    const std::uint64_t rep = item / groups;
    const std::size_t group = item % groups;
    const std::uint64_t stream = mix64(plan.master_seed, plan.coupled ? 0 : group, rep);
    WeightAssignment& w = weights[worker];
    fill_weights(w, stream);
    const std::size_t l_begin = plan.coupled ? 0 : group;
    const std::size_t l_end = plan.coupled ? nl : group + 1;
    for (std::size_t l = l_begin; l < l_end; ++l) {
      RealizationRecord rec;
      rec.rep = rep;
      rec.lambda_index = static_cast<std::uint32_t>(l);
      rec.stream_seed = stream;
      for (const InitialConfig& init : inst.inits) {
        const CompetitionOutcome& out = engines[worker].run(w, plan.lambdas[l], init, stop);
        rec.survived = std::max(rec.survived, survived_to_level(out, lm));
        if (rec.survived == lm.levels()) break;
      }
      if (ladder) rec.d_free = d_free_through(w, lm, plan.lambdas[l]);
      cells[l * plan.reps + rep] = rec;
    }
    if (opts.progress) {
      const std::size_t d = done.fetch_add(1) + 1;
      const std::size_t step = std::max<std::size_t>(items / 20, 1);
      if (d % step == 0 || d == items) {
        std::lock_guard lock(progress_mutex);
        *opts.progress << "sweep: " << d << "/" << items << " work items\n";
      }
    }
  });

  CoexistenceCurve curve;
  curve.family = inst.family;
  curve.spec_hash = inst.spec_hash;
  curve.seed = plan.master_seed;
  for (std::size_t l = 0; l < nl; ++l) {
    for (int level : plan.levels) {
      CurveRow row;
      row.lambda = plan.lambdas[l];
      row.level = level;
      row.reps = plan.reps;
      for (std::uint64_t r = 0; r < plan.reps; ++r)
        if (cells[l * plan.reps + r].survived >= level) ++row.successes;
      row.p_hat = static_cast<double>(row.successes) / static_cast<double>(row.reps);
      row.ci = wilson_interval(row.successes, row.reps);
      curve.rows.push_back(row);
    }
  }
  if (opts.records) *opts.records = std::move(cells);
  return curve;
}

inline void write_curve_csv(std::ostream& os, const CoexistenceCurve& curve) {
  os << "family,spec_hash,seed,lambda,level,reps,successes,p_hat,ci_lo,ci_hi\n";
  char buf[256];
  for (const CurveRow& r : curve.rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%llu,%.10g,%d,%llu,%llu,%.6f,%.6f,%.6f\n", curve.family.c_str(),
                  curve.spec_hash.c_str(), static_cast<unsigned long long>(curve.seed), r.lambda, r.level,
                  static_cast<unsigned long long>(r.reps), static_cast<unsigned long long>(r.successes), r.p_hat,
                  r.ci.lo, r.ci.hi);
    os << buf;
  }
}

// ---------------------------------------------------------------------------
// theta_1 / theta_2

struct ThetaEstimate {
  double lambda = 0.0;
  std::uint64_t reps = 0;
  double theta1 = 0.0;  // type 1 strangled or missing a type-1 landmark
  double theta2 = 0.0;  // type 2 reached the truncation boundary
  Interval ci1, ci2;
};

inline ThetaEstimate estimate_theta(const Graph& g, const LandmarkMap& lm, const InitialConfig& init, double lambda,
                                    std::uint64_t reps, std::uint64_t seed) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  const LandmarkStop stop{lm.stop_targets(), {}};
  Engine engine(g);
  WeightAssignment w(g.edge_count());
  std::uint64_t lost1 = 0, reached2 = 0;
  for (std::uint64_t r = 0; r < reps; ++r) {
    fill_weights(w, mix64(seed, 0, r));
    const CompetitionOutcome& out = engine.run(w, lambda, init, stop);
    bool chain = true;
    for (int n = 1; n <= lm.levels(); ++n) chain = chain && out.type[lm.level_points[static_cast<std::size_t>(n)][0]] == Type::one;
    if (strangulation_check(out) == Strangled::one || !chain) ++lost1;
    if (std::any_of(lm.boundary.begin(), lm.boundary.end(), [&](VertexId v) { return out.type[v] == Type::two; })) {
      ++reached2;
    }
  }
  ThetaEstimate est;
  est.lambda = lambda;
  est.reps = reps;
  est.theta1 = static_cast<double>(lost1) / static_cast<double>(reps);
  est.theta2 = static_cast<double>(reached2) / static_cast<double>(reps);
  est.ci1 = wilson_interval(lost1, reps);
  est.ci2 = wilson_interval(reached2, reps);
  return est;
}

// ---------------------------------------------------------------------------
// Coupled monotonicity

struct MonotonicityReport {
  std::vector<double> lambdas;
  std::uint64_t realizations = 0;
  std::uint64_t superset_violations = 0;        // adjacent pairs where S2(lambda) is not within S2(lambda')
  std::vector<std::uint64_t> theta1_counts;     // type 1 reached no boundary vertex
  std::vector<std::uint64_t> theta2_counts;     // type 2 reached a boundary vertex
  std::vector<std::uint64_t> violation_seeds;   // weight seeds of offending realizations

  double theta(int which, std::size_t i) const {
    const auto& c = which == 1 ? theta1_counts : theta2_counts;
    return static_cast<double>(c[i]) / static_cast<double>(realizations);
  }
  Interval theta_ci(int which, std::size_t i) const {
    return wilson_interval((which == 1 ? theta1_counts : theta2_counts)[i], realizations);
  }
  /// True if theta_which drops between adjacent grid points by more than
  /// twice the larger Wilson half-width.
  bool decrease_flag(int which) const {
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
      const double drop = theta(which, i - 1) - theta(which, i);
      const double noise = 2.0 * std::max(theta_ci(which, i - 1).half_width(), theta_ci(which, i).half_width());
      if (drop > noise) return true;
    }
    return false;
  }
  bool passed() const { return superset_violations == 0 && !decrease_flag(1) && !decrease_flag(2); }

  MonotonicityReport& operator+=(const MonotonicityReport& o) {
    if (lambdas.empty()) {
      *this = o;
      return *this;
    }
    if (o.lambdas != lambdas) throw std::invalid_argument("merging reports over different grids");
    realizations += o.realizations;
    superset_violations += o.superset_violations;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      theta1_counts[i] += o.theta1_counts[i];
      theta2_counts[i] += o.theta2_counts[i];
    }
    violation_seeds.insert(violation_seeds.end(), o.violation_seeds.begin(), o.violation_seeds.end());
    return *this;
  }
};

inline MonotonicityReport monotonicity_test(const Graph& g, const InitialConfig& init,
                                            std::span<const VertexId> boundary, std::span<const double> lambdas,
                                            std::uint64_t reps, std::uint64_t seed) {
  MonotonicityReport rep;
  rep.lambdas.assign(lambdas.begin(), lambdas.end());
  rep.theta1_counts.assign(lambdas.size(), 0);
  rep.theta2_counts.assign(lambdas.size(), 0);
  for (std::uint64_t r = 0; r < reps; ++r) {
    const std::uint64_t s = mix64(seed, 0, r);
    const WeightAssignment w = sample_weights(g, s);
    const auto outs = run_coupled(g, w, lambdas, init);
    ++rep.realizations;
    bool violated = false;
    for (std::size_t i = 0; i < outs.size(); ++i) {
      const auto reaches = [&](Type t) {
        return std::any_of(boundary.begin(), boundary.end(), [&](VertexId v) { return outs[i].type[v] == t; });
      };
      if (!reaches(Type::one)) ++rep.theta1_counts[i];
      if (reaches(Type::two)) ++rep.theta2_counts[i];
      if (i == 0) continue;
      for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (outs[i - 1].type[v] == Type::two && outs[i].type[v] != Type::two) {
          ++rep.superset_violations;
          violated = true;
          break;
        }
      }
    }
    if (violated) rep.violation_seeds.push_back(s);
  }
  return rep;
}

}  // namespace richardson
