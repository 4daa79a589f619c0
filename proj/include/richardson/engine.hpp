// engine.hpp - event-driven two-type Richardson competition.
//
// Type 1 spreads at rate 1 and type 2 at rate lambda: a candidate claim of
// vertex w through edge e = <u, w> arrives at claim_time(u) + X(e) / rate.
// The earliest candidate whose target is still unclaimed wins; candidates
// are ordered by (time, edge id, type) so floating-point ties resolve the
// same way every time. An edge between two claimed vertices never fires.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "richardson/graph.hpp"
#include "richardson/model.hpp"

namespace richardson {

class EngineError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kUnclaimed = std::numeric_limits<double>::infinity();

struct FullClaim {};

/// Stop once every listed target has been claimed, by either type.
struct LandmarkStop {
  std::vector<VertexId> type1_targets;
  std::vector<VertexId> type2_targets;
};

/// Stop after `count` claims beyond the initial seeds.
struct MaxEvents {
  std::size_t count = 0;
};

using StopRule = std::variant<FullClaim, LandmarkStop, MaxEvents>;

enum class Termination { queue_exhausted, stop_rule };

struct CompetitionOutcome {
  std::vector<double> claim_time;  // kUnclaimed when never claimed
  std::vector<Type> type;          // Type::none when never claimed
  std::vector<EdgeId> parent;      // kNoEdge for seeds and unclaimed vertices
  Termination termination = Termination::queue_exhausted;
  std::array<bool, 2> frontier_exhausted{true, true};  // index 0: type 1
  std::size_t events = 0;                              // claims beyond the seeds

  bool exhausted(Type t) const { return frontier_exhausted[type_index(t) - 1]; }
  bool claimed(VertexId v) const { return type[v] != Type::none; }
  bool operator==(const CompetitionOutcome&) const = default;
};

inline double type_rate(Type t, double lambda) { return t == Type::two ? lambda : 1.0; }

namespace detail {

inline void validate_run_inputs(const Graph& g, std::span<const double> w, double lambda,
                                const InitialConfig& init, const StopRule& stop) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw EngineError("lambda must be positive");
  if (w.size() != g.edge_count()) throw EngineError("weight count does not match edge count");
  for (const auto& [v, t] : init.seeds) {
    if (v >= g.vertex_count()) throw EngineError("initial vertex " + std::to_string(v) + " out of range");
    if (t != Type::one && t != Type::two) throw EngineError("initial type must be 1 or 2");
  }
  if (const auto* lm = std::get_if<LandmarkStop>(&stop)) {
    for (const auto* set : {&lm->type1_targets, &lm->type2_targets})
      for (VertexId v : *set)
        if (v >= g.vertex_count()) throw EngineError("landmark target " + std::to_string(v) + " out of range");
  }
}

}  // namespace detail

/// Reusable engine bound to one graph. Buffers persist between runs, so a
/// single Engine per worker thread avoids reallocating per replication.
class Engine {
 public:
  explicit Engine(const Graph& g) : g_(&g) {}

  const CompetitionOutcome& run(std::span<const double> w, double lambda, const InitialConfig& init,
                                const StopRule& stop = FullClaim{}) {
    const Graph& g = *g_;
    detail::validate_run_inputs(g, w, lambda, init, stop);
    const std::size_t nv = g.vertex_count();
    out_.claim_time.assign(nv, kUnclaimed);
    out_.type.assign(nv, Type::none);
    out_.parent.assign(nv, kNoEdge);
    out_.events = 0;
    heap_.clear();

    for (const auto& [v, t] : init.seeds) {
      if (out_.type[v] != Type::none && out_.type[v] != t) {
        throw EngineError("conflicting initial types at vertex " + std::to_string(v));
      }
      out_.type[v] = t;
      out_.claim_time[v] = 0.0;
    }

    std::size_t remaining = 0;
    const auto* landmarks = std::get_if<LandmarkStop>(&stop);
    if (landmarks) {
      target_.assign(nv, 0);
      for (const auto* set : {&landmarks->type1_targets, &landmarks->type2_targets})
        for (VertexId v : *set)
          if (!target_[v] && out_.type[v] == Type::none) {
            target_[v] = 1;
            ++remaining;
          }
    }
    const std::size_t max_events = std::holds_alternative<MaxEvents>(stop)
                                       ? std::get<MaxEvents>(stop).count
                                       : std::numeric_limits<std::size_t>::max();

    for (const auto& [v, t] : init.seeds) push_frontier(w, lambda, v);

    out_.termination = Termination::queue_exhausted;
    while (!heap_.empty()) {
      if ((landmarks && remaining == 0) || out_.events >= max_events) {
        out_.termination = Termination::stop_rule;
        break;
      }
      std::pop_heap(heap_.begin(), heap_.end(), later);
      const Candidate c = heap_.back();
      heap_.pop_back();
      if (out_.type[c.target] != Type::none) continue;
      out_.type[c.target] = c.type;
      out_.claim_time[c.target] = c.time;
      out_.parent[c.target] = c.edge;
      ++out_.events;
      if (landmarks && target_[c.target]) --remaining;
      push_frontier(w, lambda, c.target);
    }
    if (landmarks && remaining == 0) out_.termination = Termination::stop_rule;

    out_.frontier_exhausted = {true, true};
    for (const Candidate& c : heap_) {
      if (out_.type[c.target] == Type::none) out_.frontier_exhausted[type_index(c.type) - 1] = false;
    }
    // An event budget that ran out exactly when the frontier did is not a stop.
    if (!landmarks && out_.frontier_exhausted[0] && out_.frontier_exhausted[1]) {
      out_.termination = Termination::queue_exhausted;
    }
    return out_;
  }

  const CompetitionOutcome& outcome() const { return out_; }

 private:
  struct Candidate {
    double time;
    EdgeId edge;
    Type type;
    VertexId target;
  };

  // Heap order: a comes out after b when a's key is larger.
  static bool later(const Candidate& a, const Candidate& b) {
    if (a.time != b.time) return a.time > b.time;
    if (a.edge != b.edge) return a.edge > b.edge;
    return a.type > b.type;
  }

  void push_frontier(std::span<const double> w, double lambda, VertexId v) {
    const Type t = out_.type[v];
    const double rate = type_rate(t, lambda);
    const double base = out_.claim_time[v];
    for (const Incidence& inc : g_->neighbors(v)) {
      if (out_.type[inc.neighbor] != Type::none) continue;
      heap_.push_back({base + w[inc.edge] / rate, inc.edge, t, inc.neighbor});
      std::push_heap(heap_.begin(), heap_.end(), later);
    }
  }

  const Graph* g_;
  CompetitionOutcome out_;
  std::vector<Candidate> heap_;
  std::vector<char> target_;
};

inline CompetitionOutcome run(const Graph& g, std::span<const double> w, double lambda,
                              const InitialConfig& init, const StopRule& stop = FullClaim{}) {
  Engine engine(g);
  return engine.run(w, lambda, init, stop);
}

/// Step-by-step transcription of the construction: at every step scan all
/// edges, keep those with exactly one claimed endpoint, and transfer the
/// infection through the earliest one. O(V*E); used as a test oracle.
inline CompetitionOutcome naive_run(const Graph& g, std::span<const double> w, double lambda,
                                    const InitialConfig& init, const StopRule& stop = FullClaim{}) {
  detail::validate_run_inputs(g, w, lambda, init, stop);
  const std::size_t nv = g.vertex_count();
  CompetitionOutcome out;
  out.claim_time.assign(nv, kUnclaimed);
  out.type.assign(nv, Type::none);
  out.parent.assign(nv, kNoEdge);
  for (const auto& [v, t] : init.seeds) {
    if (out.type[v] != Type::none && out.type[v] != t) {
      throw EngineError("conflicting initial types at vertex " + std::to_string(v));
    }
    out.type[v] = t;
    out.claim_time[v] = 0.0;
  }

  auto targets_done = [&] {
    const auto& lm = std::get<LandmarkStop>(stop);
    for (const auto* set : {&lm.type1_targets, &lm.type2_targets})
      for (VertexId v : *set)
        if (out.type[v] == Type::none) return false;
    return true;
  };

  out.termination = Termination::queue_exhausted;
  for (;;) {
    bool found = false;
    double best_time = 0.0;
    EdgeId best_edge = kNoEdge;
    Type best_type = Type::none;
    VertexId best_target = kNoVertex;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const Edge& ed = g.edge(e);
      const bool cu = out.type[ed.u] != Type::none;
      const bool cw = out.type[ed.w] != Type::none;
      if (cu == cw) continue;
      const VertexId from = cu ? ed.u : ed.w;
      const Type t = out.type[from];
      const double time = out.claim_time[from] + w[e] / type_rate(t, lambda);
      if (!found || time < best_time || (time == best_time && (e < best_edge || (e == best_edge && t < best_type)))) {
        found = true;
        best_time = time;
        best_edge = e;
        best_type = t;
        best_target = cu ? ed.w : ed.u;
      }
    }
    if (!found) break;
    const bool stop_now = std::visit(
        [&](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, LandmarkStop>) return targets_done();
          else if constexpr (std::is_same_v<S, MaxEvents>) return out.events >= s.count;
          else return false;
        },
        stop);
    if (stop_now) {
      out.termination = Termination::stop_rule;
      break;
    }
    out.type[best_target] = best_type;
    out.claim_time[best_target] = best_time;
    out.parent[best_target] = best_edge;
    ++out.events;
  }
  if (std::holds_alternative<LandmarkStop>(stop) && targets_done()) out.termination = Termination::stop_rule;

  out.frontier_exhausted = {true, true};
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    const bool cu = out.type[ed.u] != Type::none;
    const bool cw = out.type[ed.w] != Type::none;
    if (cu != cw) out.frontier_exhausted[type_index(out.type[cu ? ed.u : ed.w]) - 1] = false;
  }
  return out;
}

/// One run per lambda, all on the same weights (the monotone coupling).
inline std::vector<CompetitionOutcome> run_coupled(const Graph& g, std::span<const double> w,
                                                   std::span<const double> lambdas,
                                                   const InitialConfig& init,
                                                   const StopRule& stop = FullClaim{}) {
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0)) throw EngineError("lambda must be positive");
    if (i > 0 && !(lambdas[i] > lambdas[i - 1])) throw EngineError("lambdas must be strictly increasing");
  }
  Engine engine(g);
  std::vector<CompetitionOutcome> outs;
  outs.reserve(lambdas.size());
  for (double lambda : lambdas) outs.push_back(engine.run(w, lambda, init, stop));
  return outs;
}

/// One-type first-passage distances d(v) = min over paths of sum X(e)/rate.
inline std::vector<double> single_type_fpp(const Graph& g, std::span<const double> w,
                                           std::span<const VertexId> sources, double rate) {
  if (sources.empty()) throw EngineError("sources must be nonempty");
  if (!(rate > 0.0)) throw EngineError("rate must be positive");
  std::vector<double> d(g.vertex_count(), kUnclaimed);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (VertexId s : sources) {
    if (s >= g.vertex_count()) throw EngineError("source out of range");
    d[s] = 0.0;
    pq.emplace(0.0, s);
  }
  while (!pq.empty()) {
    auto [dist, v] = pq.top();
    pq.pop();
    if (dist > d[v]) continue;
    for (const Incidence& inc : g.neighbors(v)) {
      const double nd = dist + w[inc.edge] / rate;
      if (nd < d[inc.neighbor]) {
        d[inc.neighbor] = nd;
        pq.emplace(nd, inc.neighbor);
      }
    }
  }
  return d;
}

}  // namespace richardson
