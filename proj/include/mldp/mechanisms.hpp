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

#ifndef MLDP_MECHANISMS_HPP_
#define MLDP_MECHANISMS_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "mldp/budget.hpp"
#include "mldp/errors.hpp"
#include "mldp/histogram.hpp"
#include "mldp/seeds.hpp"
#include "mldp/workload.hpp"

namespace mldp {

// Draws from Laplace(0, scale). Returns exactly 0 for scale 0.
inline double laplace_sample(double scale, Rng& rng) {
  if (!(scale >= 0.0)) throw std::invalid_argument("laplace scale must be >= 0");
  if (scale == 0.0) return 0.0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double u = 0.0;
  do {
    u = unit(rng);
  } while (u == 0.0);
  return u < 0.5 ? scale * std::log(2.0 * u) : -scale * std::log(2.0 * (1.0 - u));
}

// Noise scale for sensitivity / epsilon; zero in noise-free mode.
inline double laplace_scale(double sensitivity, double epsilon) {
  if (std::isinf(epsilon)) return 0.0;
  return sensitivity / epsilon;
}

// Answers to a workload released by one Laplace measurement.
struct NoisyAnswerSet {
  Workload workload;
  std::vector<double> answers;
  double sensitivity_used = 0.0;
  double epsilon_used = 0.0;
  std::uint64_t seed = 0;
  std::string mechanism = "laplace";
};

struct PostProcessing {
  // Clamp released answers at zero. Post-processing; no privacy cost.
  bool clamp_nonnegative = false;
};

inline void ApplyPostProcessing(std::vector<double>& answers, const PostProcessing& pp) {
  if (!pp.clamp_nonnegative) return;
  for (double& a : answers) a = std::max(a, 0.0);
}

// Releases F(h) + Laplace(S_F / epsilon) per query, charging epsilon once.
// An empty workload returns no answers and charges nothing.
inline NoisyAnswerSet laplace_batch(const Workload& workload, const Histogram& h,
                                    PrivacyBudget& budget, double epsilon,
                                    std::uint64_t seed, const PostProcessing& pp = {}) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (workload.d() != h.d()) {
    throw std::invalid_argument("workload/histogram dimension mismatch");
  }
  NoisyAnswerSet out{workload, {}, workload_sensitivity(workload), epsilon, seed, "laplace"};
  if (workload.empty()) return out;
  budget.Require(epsilon);

  Rng rng(seed);
  const double scale = laplace_scale(out.sensitivity_used, epsilon);
  out.answers = evaluate_workload(workload, h);
  for (double& a : out.answers) a += laplace_sample(scale, rng);
  ApplyPostProcessing(out.answers, pp);
  budget.Spend("laplace_batch", epsilon);
  return out;
}

// CSV `query_id,noisy_answer` plus a JSON sidecar with the release metadata.
inline void write_noisy_answers(const NoisyAnswerSet& set, const std::string& csv_path,
                                const std::string& json_path) {
  {
    std::ofstream out(csv_path);
    if (!out) throw IoError("cannot write " + csv_path);
    out << "query_id,noisy_answer\n";
    char buf[64];
    for (std::size_t i = 0; i < set.answers.size(); ++i) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), set.answers[i]);
      out << i << ',' << std::string_view(buf, ptr - buf) << '\n';
    }
  }
  nlohmann::ordered_json meta;
  meta["mechanism"] = set.mechanism;
  // JSON has no infinity; noise-free releases record null.
  meta["epsilon"] = std::isinf(set.epsilon_used) ? nlohmann::ordered_json(nullptr)
                                                 : nlohmann::ordered_json(set.epsilon_used);
  meta["sensitivity"] = set.sensitivity_used;
  meta["seed"] = set.seed;
  meta["m"] = set.answers.size();
  meta["d"] = set.workload.d();
  std::ofstream out(json_path);
  if (!out) throw IoError("cannot write " + json_path);
  out << meta.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Multiplicative weights with exponential-mechanism query selection.

struct SyntheticHistogram {
  std::vector<double> bins;
  double total = 0.0;
};

struct MwemOptions {
  // After each new measurement, re-apply the update for every measurement
  // taken so far this many times. 0 applies only the newest measurement.
  // Replays reuse released values, so they cost no budget.
  int replay_passes = 1;
  PostProcessing post;
  // Invoked after every round with the current estimate.
  std::function<void(int round, const SyntheticHistogram&)> on_round;
};

struct MwemResult {
  SyntheticHistogram synthetic;
  std::vector<double> answers;
  std::vector<std::size_t> selected;  // query index chosen each round
  std::vector<double> measurements;
};

namespace internal {

// Exponential mechanism over `scores` with utility sensitivity `sens`.
// Ties (and the noise-free limit) resolve to the lowest index.
inline std::size_t ExponentialSelect(std::span<const double> scores, double epsilon,
                                     double sens, Rng& rng) {
  const double top = *std::max_element(scores.begin(), scores.end());
  if (std::isinf(epsilon) || sens == 0.0) {
    return static_cast<std::size_t>(
        std::find(scores.begin(), scores.end(), top) - scores.begin());
  }
  std::vector<double> cumulative(scores.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    acc += std::exp(epsilon * (scores[i] - top) / (2.0 * sens));
    cumulative[i] = acc;
  }
  std::uniform_real_distribution<double> unit(0.0, acc);
  const double r = unit(rng);
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
  return std::min<std::size_t>(it - cumulative.begin(), scores.size() - 1);
}

inline void MultiplicativeUpdate(SyntheticHistogram& s, const LinearQuery& q,
                                 double measurement) {
  const double err = measurement - evaluate(q, s.bins);
  double mass = 0.0;
  for (std::size_t j = 0; j < s.bins.size(); ++j) {
    s.bins[j] *= std::exp(q[j] * err / (2.0 * s.total));
    mass += s.bins[j];
  }
  const double rescale = s.total / mass;
  for (double& b : s.bins) b *= rescale;
}

}  // namespace internal

// Budget is split evenly: epsilon/(2T) per selection and per measurement.
inline MwemResult mwem_publish(const Workload& workload, const Histogram& h,
                               PrivacyBudget& budget, double epsilon, int rounds,
                               std::uint64_t seed, const MwemOptions& options = {}) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (rounds < 1) throw std::invalid_argument("MWEM needs rounds >= 1");
  if (workload.empty()) throw std::invalid_argument("MWEM needs a non-empty workload");
  if (workload.d() != h.d()) {
    throw std::invalid_argument("workload/histogram dimension mismatch");
  }
  if (!(h.total() > 0.0)) throw std::invalid_argument("MWEM needs a histogram with total > 0");
  budget.Require(epsilon);

  // Per-query sensitivity: 1 for counting queries.
  double query_sens = 0.0;
  for (const auto& q : workload) {
    for (double c : q.coeffs()) query_sens = std::max(query_sens, std::abs(c));
  }

  const double step_eps = std::isinf(epsilon) ? epsilon : epsilon / (2.0 * rounds);
  const auto truth = evaluate_workload(workload, h);

  Rng rng(seed);
  MwemResult res;
  res.synthetic.total = h.total();
  res.synthetic.bins.assign(h.d(), h.total() / static_cast<double>(h.d()));

  std::vector<double> scores(workload.m());
  for (int t = 0; t < rounds; ++t) {
    for (std::size_t i = 0; i < workload.m(); ++i) {
      scores[i] = std::abs(evaluate(workload[i], res.synthetic.bins) - truth[i]);
    }
    const std::size_t pick = internal::ExponentialSelect(scores, step_eps, query_sens, rng);
    budget.Spend("mwem/select/" + std::to_string(t), step_eps);

    const double measured = truth[pick] + laplace_sample(laplace_scale(query_sens, step_eps), rng);
    budget.Spend("mwem/measure/" + std::to_string(t), step_eps);
    res.selected.push_back(pick);
    res.measurements.push_back(measured);

    if (options.replay_passes <= 0) {
      internal::MultiplicativeUpdate(res.synthetic, workload[pick], measured);
    } else {
      for (int pass = 0; pass < options.replay_passes; ++pass) {
        for (std::size_t k = 0; k < res.selected.size(); ++k) {
          internal::MultiplicativeUpdate(res.synthetic, workload[res.selected[k]],
                                         res.measurements[k]);
        }
      }
    }
    if (options.on_round) options.on_round(t, res.synthetic);
  }
  res.answers = evaluate_workload(workload, res.synthetic.bins);
  ApplyPostProcessing(res.answers, options.post);
  return res;
}

// ---------------------------------------------------------------------------
// Strategy mechanism: measure a fixed strategy workload, reconstruct the bins
// by least squares, then answer the target workload from the estimate.

enum class Strategy { kIdentity, kHierarchical };

// Identity: the d singleton queries. Hierarchical: every dyadic interval of a
// binary tree over the bins padded with empty bins to a power of two.
inline Workload strategy_workload(Strategy strategy, std::size_t d) {
  if (strategy == Strategy::kIdentity) return singleton_queries(d);
  const std::size_t padded = std::bit_ceil(d);
  Workload w(padded);
  for (std::size_t width = padded; width >= 1; width /= 2) {
    for (std::size_t lo = 0; lo < padded; lo += width) {
      w.Add(LinearQuery::Range(lo, lo + width - 1, padded));
    }
  }
  return w;
}

struct StrategyResult {
  NoisyAnswerSet measurement;    // noisy answers to the strategy workload
  std::vector<double> estimate;  // least-squares bins, first d entries
  std::vector<double> answers;   // target workload on the estimate
};

inline StrategyResult strategy_mechanism(const Workload& workload, Strategy strategy,
                                         const Histogram& h, PrivacyBudget& budget,
                                         double epsilon, std::uint64_t seed,
                                         const PostProcessing& pp = {}) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (workload.d() != h.d()) {
    throw std::invalid_argument("workload/histogram dimension mismatch");
  }
  budget.Require(epsilon);

  const Workload a = strategy_workload(strategy, h.d());
  const std::size_t cols = a.d();
  std::vector<double> padded(h.bins().begin(), h.bins().end());
  padded.resize(cols, 0.0);

  StrategyResult res{NoisyAnswerSet{a, evaluate_workload(a, padded), workload_sensitivity(a),
                                     epsilon, seed,
                                     strategy == Strategy::kIdentity ? "strategy-identity"
                                                                     : "strategy-hier"},
                      {},
                      {}};
  Rng rng(seed);
  const double scale = laplace_scale(res.measurement.sensitivity_used, epsilon);
  for (double& y : res.measurement.answers) y += laplace_sample(scale, rng);
  budget.Spend(res.measurement.mechanism, epsilon);

  Eigen::MatrixXd mat(a.m(), cols);
  for (std::size_t i = 0; i < a.m(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) mat(i, j) = a[i][j];
  }
  const Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(res.measurement.answers.data(), a.m());
  Eigen::MatrixXd gram = mat.transpose() * mat;
  gram.diagonal().array() += 1e-9;
  const Eigen::VectorXd x = gram.ldlt().solve(mat.transpose() * y);

  res.estimate.assign(x.data(), x.data() + h.d());
  res.answers = evaluate_workload(workload, res.estimate);
  ApplyPostProcessing(res.answers, pp);
  return res;
}

}  // namespace mldp

#endif  // MLDP_MECHANISMS_HPP_
