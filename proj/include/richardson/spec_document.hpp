// spec_document.hpp - JSON experiment documents and named presets.
//
// A document names a family and its construction parameters plus the
// experiment settings a sweep needs:
//
//   {
//     "family": "ladder",
//     "a": {"base": 256, "ratio": 4, "count": 3},      // or {"list": [...]}
//     "gamma": 2, "beta": 0, "correction": "plus78", "end_shift": "none",
//     "tail": 64,
//     "lambdas": [1, 1.5, 2, 2.5, 3], "reps": 2000, "levels": [1, 2, 3],
//     "seed": 20240611, "threads": 0, "init": "canonical", "coupled": true
//   }
//
// multispine documents use "k", "alphas", "b" and optionally "delta" and
// "eps" (explicit lists); countable documents use "alphas" and "b".
// Unknown keys are rejected.
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "richardson/families.hpp"
#include "richardson/harness.hpp"

namespace richardson {

using json = nlohmann::json;

struct ExperimentSettings {
  std::vector<double> lambdas;
  std::vector<int> levels;
  std::uint64_t reps = 2000;
  std::uint64_t seed = 20240611;
  int threads = 0;
  std::string init;
  bool coupled = true;
};

struct SpecDocument {
  std::string family;
  FamilySpec spec;
  ExperimentSettings experiment;
  json canonical;
  std::string hash;

  SweepPlan plan() const {
    SweepPlan p;
    p.lambdas = experiment.lambdas;
    p.levels = experiment.levels;
    p.reps = experiment.reps;
    p.master_seed = experiment.seed;
    p.threads = experiment.threads;
    p.coupled = experiment.coupled;
    return p;
  }

  FamilyInstance instance() const {
    FamilyInstance inst = make_instance(spec, experiment.init);
    inst.spec_hash = hash;
    return inst;
  }
};

/// FNV-1a 64 of the canonical (sorted-key, defaults-filled) document.
inline std::string spec_hash(const json& canonical) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

inline void reject_unknown(const json& doc, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.count(key)) throw SpecError("unknown key \"" + key + "\" in " + where);
  }
}

template <class T>
T get_or(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw SpecError(std::string("invalid value for \"") + key + "\"");
  }
}

inline std::int64_t get_int(const json& doc, const char* key, std::int64_t fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_number_integer()) throw SpecError(std::string("\"") + key + "\" must be an integer");
  return v.get<std::int64_t>();
}

inline SequenceSpec parse_sequence(const json& doc, const char* key, SequenceSpec fallback) {
  if (!doc.contains(key)) return fallback;
  const json& s = doc.at(key);
  if (!s.is_object()) throw SpecError(std::string("\"") + key + "\" must be an object");
  if (s.contains("list")) {
    reject_unknown(s, {"list"}, key);
    std::vector<std::int64_t> values;
    for (const json& v : s.at("list")) {
      if (!v.is_number_integer()) throw SpecError(std::string(key) + ".list entries must be integers");
      values.push_back(v.get<std::int64_t>());
    }
    return SequenceSpec::explicit_values(std::move(values));
  }
  reject_unknown(s, {"base", "ratio", "count"}, key);
  return SequenceSpec::geometric(get_int(s, "base", fallback.base), get_int(s, "ratio", fallback.ratio),
                                 get_int(s, "count", fallback.count));
}

inline json sequence_json(const SequenceSpec& s) {
  if (s.kind == SequenceSpec::Kind::explicit_list) return json{{"list", s.list}};
  return json{{"base", s.base}, {"ratio", s.ratio}, {"count", s.count}};
}

inline std::vector<double> real_list(const json& doc, const char* key, std::vector<double> fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_array()) throw SpecError(std::string("\"") + key + "\" must be an array");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) throw SpecError(std::string("\"") + key + "\" entries must be numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace detail

inline SpecDocument parse_spec_document(const json& doc) {
  if (!doc.is_object()) throw SpecError("spec document must be a JSON object");
  if (!doc.contains("family") || !doc.at("family").is_string()) throw SpecError("missing \"family\"");
  SpecDocument out;
  out.family = doc.at("family").get<std::string>();
  const std::set<std::string> common{"family", "tail", "lambdas", "reps", "levels", "seed", "threads", "init", "coupled"};
  json canonical{{"family", out.family}};
  std::int64_t n_max = 0;

  if (out.family == "ladder") {
    auto allowed = common;
    allowed.insert({"a", "gamma", "beta", "correction", "end_shift"});
    detail::reject_unknown(doc, allowed, "ladder spec");
    LadderSpec s;
    s.a = detail::parse_sequence(doc, "a", s.a);
    s.rule.gamma = detail::get_or<double>(doc, "gamma", s.rule.gamma);
    s.rule.beta = detail::get_or<double>(doc, "beta", s.rule.beta);
    const auto corr = detail::get_or<std::string>(doc, "correction", "plus78");
    if (corr == "plus78") s.rule.correction = Correction::plus78;
    else if (corr == "minus78") s.rule.correction = Correction::minus78;
    else if (corr == "none") s.rule.correction = Correction::none;
    else throw SpecError("correction must be plus78, minus78 or none");
    const auto shift = detail::get_or<std::string>(doc, "end_shift", "none");
    if (shift == "none") s.rule.end_shift = EndShift::none;
    else if (shift == "plus78") s.rule.end_shift = EndShift::plus78;
    else throw SpecError("end_shift must be none or plus78");
    s.tail = detail::get_int(doc, "tail", s.tail);
    if (s.tail < 0) throw SpecError("tail must be nonnegative");
    s.rule.validate();
    n_max = static_cast<std::int64_t>(s.a.values().size());
    canonical.update(json{{"a", detail::sequence_json(s.a)}, {"gamma", s.rule.gamma}, {"beta", s.rule.beta},
                          {"correction", corr}, {"end_shift", shift}, {"tail", s.tail}});
    out.spec = s;
  } else if (out.family == "multispine") {
    auto allowed = common;
    allowed.insert({"k", "alphas", "b", "delta", "eps"});
    detail::reject_unknown(doc, allowed, "multispine spec");
    MultiSpineSpec s;
    s.k = static_cast<int>(detail::get_int(doc, "k", s.k));
    if (s.k < 1) throw SpecError("k >= 1 required");
    s.alphas = detail::real_list(doc, "alphas", doc.contains("k") ? std::vector<double>{} : s.alphas);
    s.b = detail::parse_sequence(doc, "b", s.b);
    s.delta = detail::real_list(doc, "delta", {});
    s.eps = detail::real_list(doc, "eps", {});
    s.tail = detail::get_int(doc, "tail", s.tail);
    s.validate();
    n_max = static_cast<std::int64_t>(s.b.values().size());
    canonical.update(json{{"k", s.k}, {"alphas", s.alphas}, {"b", detail::sequence_json(s.b)},
                          {"delta", s.delta_schedule()}, {"eps", s.eps_schedule()}, {"tail", s.tail}});
    out.spec = s;
  } else if (out.family == "countable") {
    auto allowed = common;
    allowed.insert({"alphas", "b"});
    detail::reject_unknown(doc, allowed, "countable spec");
    CountableSpec s;
    s.alphas = detail::real_list(doc, "alphas", s.alphas);
    s.b = detail::parse_sequence(doc, "b", s.b);
    s.tail = detail::get_int(doc, "tail", s.tail);
    s.validate();
    n_max = static_cast<std::int64_t>(s.b.values().size());
    canonical.update(json{{"alphas", s.alphas}, {"b", detail::sequence_json(s.b)}, {"tail", s.tail}});
    out.spec = s;
  } else {
    throw SpecError("family must be ladder, multispine or countable");
  }

  ExperimentSettings& ex = out.experiment;
  ex.lambdas = detail::real_list(doc, "lambdas", {1.0, 1.5, 2.0, 2.5, 3.0});
  for (std::size_t i = 0; i < ex.lambdas.size(); ++i) {
    if (!(ex.lambdas[i] > 0.0)) throw SpecError("lambda must be positive");
    if (i > 0 && !(ex.lambdas[i] > ex.lambdas[i - 1])) throw SpecError("lambdas must be strictly ascending");
  }
  if (ex.lambdas.empty()) throw SpecError("lambdas must be nonempty");
  if (doc.contains("levels")) {
    ex.levels = detail::get_or<std::vector<int>>(doc, "levels", {});
  } else {
    for (int n = 1; n <= n_max; ++n) ex.levels.push_back(n);
  }
  if (ex.levels.empty()) throw SpecError("levels must be nonempty");
  for (int n : ex.levels)
    if (n < 1 || n > n_max) throw SpecError("level " + std::to_string(n) + " outside 1.." + std::to_string(n_max));
  const std::int64_t reps = detail::get_int(doc, "reps", static_cast<std::int64_t>(ex.reps));
  if (reps < 1) throw SpecError("reps must be >= 1");
  ex.reps = static_cast<std::uint64_t>(reps);
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_integer()) throw SpecError("\"seed\" must be an integer");
    ex.seed = s.get<std::uint64_t>();
  }
  ex.threads = static_cast<int>(detail::get_int(doc, "threads", 0));
  if (ex.threads < 0) throw SpecError("threads must be >= 0");
  ex.init = detail::get_or<std::string>(doc, "init", out.family == "ladder" ? "canonical" : "any");
  ex.coupled = detail::get_or<bool>(doc, "coupled", true);

  // threads is excluded from the canonical form: it never changes results.
  canonical.update(json{{"lambdas", ex.lambdas}, {"levels", ex.levels}, {"reps", ex.reps}, {"seed", ex.seed},
                        {"init", ex.init}, {"coupled", ex.coupled}});
  out.canonical = canonical;
  out.hash = spec_hash(canonical);
  // Building the instance validates init choices and landmark wiring.
  (void)make_instance(out.spec, ex.init);
  return out;
}

namespace detail {

inline std::vector<double> parse_real_csv(const std::string& text, const std::string& preset) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw SpecError("bad number \"" + item + "\" in preset " + preset);
    }
  }
  if (out.empty()) throw SpecError("preset " + preset + " needs at least one value");
  return out;
}

}  // namespace detail

/// Expands "prop21", "prop22", "interval:a,b", "points:a1,...,ak" and
/// "countable:a1,...,am" into full documents. Returns nullopt otherwise.
inline std::optional<json> preset_document(const std::string& name) {
  const json a_default{{"base", 256}, {"ratio", 4}, {"count", 3}};
  if (name == "prop21") {
    return json{{"family", "ladder"}, {"a", a_default}, {"gamma", 2}, {"beta", 0}, {"correction", "plus78"},
                {"end_shift", "none"}, {"tail", 64}, {"lambdas", {1, 1.5, 2, 2.5, 3}}, {"reps", 2000},
                {"levels", {1, 2, 3}}, {"seed", 20240611}};
  }
  if (name == "prop22") {
    return json{{"family", "ladder"}, {"a", a_default}, {"gamma", 4}, {"beta", 1}, {"correction", "plus78"},
                {"end_shift", "none"}, {"tail", 64}, {"lambdas", {1.2, 2, 3.5, 5, 6}}, {"reps", 2000},
                {"levels", {1, 2, 3}}, {"seed", 20240612}};
  }
  const auto colon = name.find(':');
  if (colon == std::string::npos) return std::nullopt;
  const std::string head = name.substr(0, colon);
  const std::vector<double> vals = detail::parse_real_csv(name.substr(colon + 1), name);
  if (head == "interval") {
    if (vals.size() != 2 || !(vals[0] >= 1.0) || !(vals[1] > vals[0])) {
      throw SpecError("interval preset needs 1 <= a < b");
    }
    const double lo = vals[0], hi = vals[1];
    return json{{"family", "ladder"}, {"a", a_default}, {"gamma", lo * (1 + hi) / (1 + lo)},
                {"beta", (hi - lo) / (1 + lo)}, {"correction", "plus78"}, {"end_shift", "none"}, {"tail", 64},
                {"lambdas", {0.6 * lo, lo, 0.5 * (lo + hi), hi, 1.2 * hi}}, {"reps", 2000},
                {"levels", {1, 2, 3}}, {"seed", 20240613}};
  }
  if (head == "points") {
    std::vector<double> alphas = vals;
    std::vector<double> sorted = vals;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::set<double> grid(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) grid.insert(0.5 * (sorted[i - 1] + sorted[i]));
    grid.insert(1.0 + 0.3 * (sorted.front() - 1.0) > 1.0 ? 1.0 + 0.3 * (sorted.front() - 1.0) : 0.65);
    grid.insert(1.25 * sorted.back());
    return json{{"family", "multispine"}, {"k", static_cast<int>(alphas.size())}, {"alphas", alphas},
                {"b", {{"base", 512}, {"ratio", 4}, {"count", 3}}}, {"tail", 64},
                {"lambdas", std::vector<double>(grid.begin(), grid.end())}, {"reps", 2000},
                {"levels", {1, 2, 3}}, {"seed", 20240614}};
  }
  if (head == "countable") {
    return json{{"family", "countable"}, {"alphas", vals},
                {"b", {{"base", 512}, {"ratio", 4}, {"count", static_cast<int>(vals.size())}}}, {"tail", 64},
                {"lambdas", vals}, {"reps", 2000}, {"seed", 20240615}};
  }
  throw SpecError("unknown preset " + name);
}

/// A preset name or a path to a JSON document.
inline SpecDocument load_spec_document(const std::string& path_or_preset) {
  if (!std::filesystem::exists(path_or_preset)) {
    if (auto preset = preset_document(path_or_preset)) return parse_spec_document(*preset);
  }
  std::ifstream in(path_or_preset);
  if (!in) throw SpecError("cannot read spec " + path_or_preset);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("malformed spec document: ") + e.what());
  }
  return parse_spec_document(doc);
}

}  // namespace richardson
