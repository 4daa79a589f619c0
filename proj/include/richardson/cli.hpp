// cli.hpp - command implementations behind the `richardson` executable.
//
// Each command writes data to `out` and diagnostics to `err` and returns an
// exit code: 0 success, 2 spec or usage error, 3 runtime failure.
#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "richardson/bounds.hpp"
#include "richardson/engine.hpp"
#include "richardson/families.hpp"
#include "richardson/harness.hpp"
#include "richardson/race_events.hpp"
#include "richardson/rng.hpp"
#include "richardson/spec_document.hpp"

namespace richardson::cli {

inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kRuntime = 3;

struct CommonOptions {
  std::string spec;
  std::optional<double> lambda;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> reps;
  std::vector<int> levels;
  std::optional<int> threads;
  std::string out;
  std::string init;
  bool strict = false;
};

/// Seed precedence: --seed, then RICHARDSON_SEED, then the document.
inline std::uint64_t effective_seed(const CommonOptions& o, const SpecDocument& doc) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("RICHARDSON_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw SpecError("RICHARDSON_SEED must be an unsigned integer");
  }
  return doc.experiment.seed;
}

inline SpecDocument load_with_overrides(const CommonOptions& o) {
  SpecDocument doc = load_spec_document(o.spec);
  doc.experiment.seed = effective_seed(o, doc);
  if (o.reps) {
    if (*o.reps < 1) throw SpecError("reps must be >= 1");
    doc.experiment.reps = *o.reps;
  }
  if (!o.levels.empty()) doc.experiment.levels = o.levels;
  if (o.threads) {
    if (*o.threads < 0) throw SpecError("threads must be >= 0");
    doc.experiment.threads = *o.threads;
  }
  if (!o.init.empty()) doc.experiment.init = o.init;
  if (o.lambda && !(*o.lambda > 0.0)) throw SpecError("lambda must be positive");
  return doc;
}

inline void write_landmarks_json(std::ostream& os, const LandmarkMap& lm) {
  nlohmann::json j;
  j["family"] = family_name(lm.family);
  j["spine_vertices"] = lm.spine_vertices;
  j["spine_edges"] = lm.spine_edges;
  j["bridge_edges"] = lm.bridge_edges;
  j["level_points"] = lm.level_points;
  j["boundary"] = lm.boundary;
  if (lm.family == FamilyKind::ladder) {
    j["a"] = lm.ladder_a;
    j["attach"] = lm.ladder_attach;
  }
  os << j.dump() << '\n';
}

inline void write_outcome_csv(std::ostream& os, const Graph& g, const CompetitionOutcome& out) {
  os << "vertex_id,label,type,claim_time,parent_edge\n";
  char buf[64];
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    os << v << ',' << g.label(v) << ',' << type_index(out.type[v]) << ',';
    if (out.type[v] != Type::none) {
      std::snprintf(buf, sizeof buf, "%.17g", out.claim_time[v]);
      os << buf;
    }
    os << ',';
    if (out.parent[v] != kNoEdge) os << out.parent[v];
    os << '\n';
  }
}

inline int cmd_generate(const CommonOptions& o, std::ostream& out, std::ostream& /*err*/) {
  const SpecDocument doc = load_with_overrides(o);
  const FamilyGraph fg = build_family(doc.spec);
  if (!o.out.empty()) {
    std::ofstream gf(o.out);
    std::ofstream lf(o.out + ".landmarks.json");
    if (!gf || !lf) throw std::runtime_error("cannot write " + o.out);
    fg.graph.dump(gf);
    write_landmarks_json(lf, fg.landmarks);
  }
  out << "family: " << doc.family << '\n';
  out << "vertices=" << fg.graph.vertex_count() << " edges=" << fg.graph.edge_count() << '\n';
  out << "max degree: " << fg.graph.max_degree() << '\n';
  out << "predicted region: " << predicted_region(doc.spec).to_string() << '\n';
  return kOk;
}

inline int cmd_simulate(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  const SpecDocument doc = load_with_overrides(o);
  const double lambda = o.lambda.value_or(doc.experiment.lambdas.front());
  const FamilyInstance inst = doc.instance();
  const Graph& g = inst.fg.graph;
  const LandmarkMap& lm = inst.fg.landmarks;
  // Replication 0 of a sweep with the same master seed sees these weights.
  const WeightAssignment w = sample_weights(g, mix64(doc.experiment.seed, 0, 0));
  Engine engine(g);
  const LandmarkStop stop{lm.stop_targets(), {}};

  const CompetitionOutcome* best = nullptr;
  std::vector<CompetitionOutcome> outs;
  outs.reserve(inst.inits.size());
  for (const InitialConfig& init : inst.inits) {
    outs.push_back(engine.run(w, lambda, init, stop));
    if (!best || survived_to_level(outs.back(), lm) > survived_to_level(*best, lm)) best = &outs.back();
  }
  const CoexistenceVerdict v = make_verdict(*best, lm);
  const char* strangled = v.strangled_type == Strangled::none ? "none" : v.strangled_type == Strangled::one ? "1" : "2";
  char line[256];
  std::snprintf(line, sizeof line, "verdict: lambda=%s survived_to_level=%d strangled=%s scenario=%s\n",
                format_real(lambda).c_str(), v.survived_to_level, strangled, scenario_name(v.scenario));
  if (o.out.empty()) {
    write_outcome_csv(out, g, *best);
    err << line;
  } else {
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot write " + o.out);
    write_outcome_csv(f, g, *best);
    out << line;
  }
  return kOk;
}

inline int cmd_sweep(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  SpecDocument doc = load_with_overrides(o);
  if (o.lambda) doc.experiment.lambdas = {*o.lambda};
  const FamilyInstance inst = doc.instance();
  SweepOptions opts;
  opts.progress = &err;
  const CoexistenceCurve curve = sweep(inst, doc.plan(), opts);
  if (o.out.empty()) {
    write_curve_csv(out, curve);
  } else {
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot write " + o.out);
    write_curve_csv(f, curve);
  }
  return kOk;
}

inline int cmd_bounds(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  const SpecDocument doc = load_with_overrides(o);
  const auto* ladder = std::get_if<LadderSpec>(&doc.spec);
  if (!ladder) throw SpecError("bounds requires a ladder spec");
  const Region region = predicted_region(*ladder);
  const double lambda = o.lambda.value_or(region.lo);
  const BoundReport rep = coexistence_lower_bound(*ladder, lambda);
  if (!rep.valid && o.strict) {
    err << "lambda " << format_real(lambda) << " outside predicted region " << region.to_string() << '\n';
    return kUsage;
  }
  write_bound_report(out, rep);
  return kOk;
}

inline int cmd_verify(const CommonOptions& o, std::ostream& out, std::ostream& /*err*/) {
  const SpecDocument doc = load_with_overrides(o);
  const auto* ms = std::get_if<MultiSpineSpec>(&doc.spec);
  if (!ms) throw SpecError("verify requires a multispine spec");
  write_growth_report(out, check_growth_conditions(*ms, doc.experiment.seed));
  return kOk;
}

/// Full command-line entry point.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-type Richardson competition on engineered graphs"};
  app.require_subcommand(1);
  CommonOptions o;

  auto add_spec = [&](CLI::App* sub) {
    sub->add_option("spec", o.spec, "spec document path or preset (prop21, prop22, interval:a,b, points:...)")
        ->required();
  };
  auto* gen = app.add_subcommand("generate", "build a family graph and write its dump and landmarks");
  add_spec(gen);
  gen->add_option("--out", o.out, "graph dump path (landmarks go to <out>.landmarks.json)");

  auto* sim = app.add_subcommand("simulate", "run one competition and print its verdict");
  add_spec(sim);
  sim->add_option("--lambda", o.lambda, "type-2 rate");
  sim->add_option("--seed", o.seed, "master seed");
  sim->add_option("--out", o.out, "outcome CSV path (default: standard output)");
  sim->add_option("--init", o.init, "initial configuration");

  auto* swp = app.add_subcommand("sweep", "estimate truncated coexistence over a lambda grid");
  add_spec(swp);
  swp->add_option("--lambda", o.lambda, "single lambda instead of the document grid");
  swp->add_option("--seed", o.seed, "master seed");
  swp->add_option("--reps", o.reps, "replications per lambda");
  swp->add_option("--levels", o.levels, "levels to report")->delimiter(',');
  swp->add_option("--threads", o.threads, "worker threads (0: all cores)");
  swp->add_option("--out", o.out, "curve CSV path (default: standard output)");
  swp->add_option("--init", o.init, "initial configuration");

  auto* bnd = app.add_subcommand("bounds", "Chebyshev union bound for a ladder spec");
  add_spec(bnd);
  bnd->add_option("--lambda", o.lambda, "type-2 rate (default: lower end of the predicted region)");
  bnd->add_flag("--strict", o.strict, "exit 2 when lambda lies outside the predicted region");

  auto* ver = app.add_subcommand("verify", "check the multi-spine growth conditions level by level");
  add_spec(ver);
  ver->add_option("--seed", o.seed, "Monte Carlo seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*gen) return cmd_generate(o, out, err);
    if (*sim) return cmd_simulate(o, out, err);
    if (*swp) return cmd_sweep(o, out, err);
    if (*bnd) return cmd_bounds(o, out, err);
    if (*ver) return cmd_verify(o, out, err);
  } catch (const SpecError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}

}  // namespace richardson::cli
