//
// Copyright 2026 The MLDP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef MLDP_PIPELINE_HPP_
#define MLDP_PIPELINE_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mldp/budget.hpp"
#include "mldp/errors.hpp"
#include "mldp/histogram.hpp"
#include "mldp/learning.hpp"
#include "mldp/mechanisms.hpp"
#include "mldp/seeds.hpp"
#include "mldp/workload.hpp"

namespace mldp {

// Candidate queries the selection step draws from.
struct PoolSpec {
  enum class Kind { kAllRanges, kSubsets, kRandomRanges, kSingletons };
  Kind kind = Kind::kAllRanges;
  std::size_t m = 0;  // kRandomRanges only
  std::uint64_t seed = 0;
};

inline Workload build_pool(const PoolSpec& spec, std::size_t d) {
  switch (spec.kind) {
    case PoolSpec::Kind::kAllRanges: return all_range_queries(d);
    case PoolSpec::Kind::kSubsets: return all_subset_queries(d);
    case PoolSpec::Kind::kRandomRanges: return random_range_workload(d, spec.m, spec.seed);
    case PoolSpec::Kind::kSingletons: return singleton_queries(d);
  }
  throw std::logic_error("unknown pool kind");
}

struct MldpConfig {
  Selection selection = Selection::kSingleton;
  std::optional<std::size_t> m;
  PoolSpec pool;
  LearnerKind learner = LearnerKind::kLinear;
  std::optional<double> ridge;    // default 1e-9 linear, 1e-3 rbf
  std::optional<double> width_u;  // rbf; default median feature distance
  bool fit_intercept = false;
  double epsilon = 1.0;
  std::uint64_t seed = 0;

  double effective_ridge() const {
    return ridge.value_or(learner == LearnerKind::kLinear ? 1e-9 : 1e-3);
  }

  void Validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("config epsilon must be > 0");
    if (selection == Selection::kRandomM && (!m || *m == 0)) {
      throw std::invalid_argument("random_m selection needs m >= 1");
    }
    if (ridge && !(*ridge >= 0.0)) throw std::invalid_argument("ridge must be >= 0");
    if (width_u && !(*width_u > 0.0)) throw std::invalid_argument("width_u must be > 0");
  }
};

inline Selection parse_selection(const std::string& s) {
  if (s == "singleton") return Selection::kSingleton;
  if (s == "greedy_cover") return Selection::kGreedyCover;
  if (s == "random_m") return Selection::kRandomM;
  throw ParseError("unknown selection strategy '" + s + "'");
}

inline LearnerKind parse_learner(const std::string& s) {
  if (s == "linear") return LearnerKind::kLinear;
  if (s == "rbf") return LearnerKind::kRbf;
  throw ParseError("unknown learner '" + s + "'");
}

inline PoolSpec::Kind parse_pool_kind(const std::string& s) {
  if (s == "all_ranges") return PoolSpec::Kind::kAllRanges;
  if (s == "subsets") return PoolSpec::Kind::kSubsets;
  if (s == "random_ranges") return PoolSpec::Kind::kRandomRanges;
  if (s == "singletons") return PoolSpec::Kind::kSingletons;
  throw ParseError("unknown pool kind '" + s + "'");
}

// {
//   "epsilon": 1.0, "seed": 7,
//   "selection": {"strategy": "singleton|greedy_cover|random_m", "m": 100},
//   "pool": {"kind": "all_ranges|subsets|random_ranges|singletons", "m": 1000, "seed": 1},
//   "learner": {"kind": "linear|rbf", "ridge": 1e-6, "width_u": 2.0, "fit_intercept": false}
// }
inline MldpConfig mldp_config_from_json(const nlohmann::json& j) {
  MldpConfig cfg;
  try {
    cfg.epsilon = j.at("epsilon").get<double>();
    cfg.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("selection")) {
      const auto& s = j["selection"];
      cfg.selection = parse_selection(s.value("strategy", std::string("singleton")));
      if (s.contains("m") && !s["m"].is_null()) cfg.m = s["m"].get<std::size_t>();
    }
    if (j.contains("pool")) {
      const auto& p = j["pool"];
      cfg.pool.kind = parse_pool_kind(p.value("kind", std::string("all_ranges")));
      cfg.pool.m = p.value("m", std::size_t{0});
      cfg.pool.seed = p.value("seed", std::uint64_t{0});
    }
    if (j.contains("learner")) {
      const auto& l = j["learner"];
      cfg.learner = parse_learner(l.value("kind", std::string("linear")));
      if (l.contains("ridge") && !l["ridge"].is_null()) cfg.ridge = l["ridge"].get<double>();
      if (l.contains("width_u") && !l["width_u"].is_null()) {
        cfg.width_u = l["width_u"].get<double>();
      }
      cfg.fit_intercept = l.value("fit_intercept", false);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed config: ") + e.what());
  }
  if (!std::isfinite(cfg.epsilon)) throw std::invalid_argument("config epsilon must be finite");
  cfg.Validate();
  return cfg;
}

inline PublishedModel fit_model(const TrainingSet& t, const MldpConfig& cfg) {
  if (cfg.learner == LearnerKind::kLinear) {
    return fit_linear(t, cfg.effective_ridge(), cfg.fit_intercept);
  }
  return fit_rbf(t, cfg.width_u.value_or(median_feature_distance(t)), cfg.effective_ridge());
}

struct MldpRelease {
  PublishedModel model;
  Workload training;  // the selected training queries
};

// Select, measure (the only budget charge), fit.
inline MldpRelease mldp_release(const Histogram& h, const MldpConfig& cfg,
                                PrivacyBudget& budget) {
  cfg.Validate();
  budget.Require(cfg.epsilon);
  const Workload pool = build_pool(cfg.pool, h.d());
  Workload train =
      select_training_set(pool, cfg.selection, cfg.m, DeriveSeed(cfg.seed, "select", 0, 0));
  const NoisyAnswerSet noisy = laplace_batch(train, h, budget, cfg.epsilon, cfg.seed);
  PublishedModel model = fit_model(make_training_set(noisy), cfg);
  model.meta.seed = cfg.seed;
  return {std::move(model), std::move(train)};
}

inline PublishedModel mldp_publish(const Histogram& h, const MldpConfig& cfg,
                                   PrivacyBudget& budget) {
  return mldp_release(h, cfg, budget).model;
}

inline std::vector<double> mldp_answer(const PublishedModel& model, const Workload& queries) {
  return predict(model, queries);
}

// ---------------------------------------------------------------------------
// Utility bounds.

struct BoundParameters {
  double n_records = 0.0;        // answers lie in [0, n_records]
  double hypothesis_count = 2.0; // |H| proxy
  double beta = 0.05;
  double m = 1.0;
  double sensitivity = 0.0;
  double epsilon = 1.0;

  void Validate() const {
    if (!(n_records >= 0.0)) throw std::invalid_argument("n_records must be >= 0");
    if (!(hypothesis_count > 1.0)) throw std::invalid_argument("|H| must be > 1");
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must be in (0,1)");
    if (!(m >= 1.0)) throw std::invalid_argument("m must be >= 1");
    if (!(sensitivity >= 0.0)) throw std::invalid_argument("sensitivity must be >= 0");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  }
};

struct ErrorBound {
  double alpha_model = 0.0;
  double alpha_noise = 0.0;
  double beta_total = 0.0;
};

// Hoeffding bound on the model error, union-bounded over |H| hypotheses:
//   alpha = sqrt(n^2 ln(2|H|/beta) / (2m))
inline double model_error_bound(const BoundParameters& p) {
  p.Validate();
  return std::sqrt(p.n_records * p.n_records * std::log(2.0 * p.hypothesis_count / p.beta) /
                   (2.0 * p.m));
}

// Bound on the averaged Laplace training noise:
//   alpha = sqrt(4 S ln(|H|/beta) / (m eps^2))
inline double noise_error_bound(const BoundParameters& p) {
  p.Validate();
  return std::sqrt(4.0 * p.sensitivity * std::log(p.hypothesis_count / p.beta) /
                   (p.m * p.epsilon * p.epsilon));
}

inline ErrorBound total_error_bound(const BoundParameters& p) {
  return {model_error_bound(p), noise_error_bound(p), 2.0 * p.beta};
}

}  // namespace mldp

#endif  // MLDP_PIPELINE_HPP_
