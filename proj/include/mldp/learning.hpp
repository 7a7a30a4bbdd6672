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

#ifndef MLDP_LEARNING_HPP_
#define MLDP_LEARNING_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "mldp/errors.hpp"
#include "mldp/mechanisms.hpp"
#include "mldp/seeds.hpp"
#include "mldp/workload.hpp"

namespace mldp {

// Design matrix (query coefficient vectors) and noisy targets.
struct TrainingSet {
  std::size_t d = 0;
  std::vector<std::vector<double>> features;
  std::vector<double> targets;
  double sensitivity = 0.0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;

  std::size_t m() const { return targets.size(); }

  void Validate() const {
    if (targets.empty()) throw std::invalid_argument("training set is empty");
    if (features.size() != targets.size()) {
      throw std::invalid_argument("features and targets differ in length");
    }
    for (const auto& f : features) {
      if (f.size() != d) throw std::invalid_argument("feature length differs from d");
    }
  }
};

inline TrainingSet make_training_set(const NoisyAnswerSet& noisy) {
  TrainingSet t;
  t.d = noisy.workload.d();
  for (const auto& q : noisy.workload) t.features.emplace_back(q.coeffs().begin(), q.coeffs().end());
  t.targets = noisy.answers;
  t.sensitivity = noisy.sensitivity_used;
  t.epsilon = noisy.epsilon_used;
  t.seed = noisy.seed;
  t.Validate();
  return t;
}

// ---------------------------------------------------------------------------
// Training-set selection.

enum class Selection { kSingleton, kGreedyCover, kRandomM };

// kSingleton ignores the pool except for its bin count.
//
// kGreedyCover builds a disjoint-as-possible cover: among pool queries that
// touch at least one uncovered bin, take the one with the fewest overlaps with
// bins already covered, then the fewest non-zero bins, then the lowest index.
// On the complete range pool this yields the singletons.
//
// kRandomM samples m distinct pool entries uniformly (without replacement) and
// keeps them in pool order.
inline Workload select_training_set(const Workload& pool, Selection strategy,
                                    std::optional<std::size_t> m, std::uint64_t seed) {
  const std::size_t d = pool.d();
  switch (strategy) {
    case Selection::kSingleton:
      return singleton_queries(d);

    case Selection::kGreedyCover: {
      if (pool.empty()) throw std::invalid_argument("greedy_cover needs a non-empty pool");
      std::vector<bool> covered(d, false);
      std::size_t n_covered = 0;
      Workload out(d);
      while (n_covered < d) {
        std::optional<std::size_t> best;
        std::size_t best_overlap = 0, best_size = 0;
        for (std::size_t i = 0; i < pool.m(); ++i) {
          std::size_t fresh = 0, overlap = 0, size = 0;
          for (std::size_t j = 0; j < d; ++j) {
            if (pool[i][j] == 0.0) continue;
            ++size;
            covered[j] ? ++overlap : ++fresh;
          }
          if (fresh == 0) continue;
          if (!best || overlap < best_overlap ||
              (overlap == best_overlap && size < best_size)) {
            best = i;
            best_overlap = overlap;
            best_size = size;
          }
        }
        if (!best) {
          std::string missing;
          for (std::size_t j = 0; j < d; ++j) {
            if (!covered[j]) missing += (missing.empty() ? "" : ",") + std::to_string(j);
          }
          throw std::invalid_argument("pool cannot cover bins {" + missing + "}");
        }
        for (std::size_t j = 0; j < d; ++j) {
          if (pool[*best][j] != 0.0 && !covered[j]) {
            covered[j] = true;
            ++n_covered;
          }
        }
        out.Add(pool[*best]);
      }
      return out;
    }

    case Selection::kRandomM: {
      if (!m || *m == 0) throw std::invalid_argument("random_m needs m >= 1");
      if (*m > pool.m()) {
        throw std::invalid_argument("random_m: m=" + std::to_string(*m) +
                                    " exceeds pool size " + std::to_string(pool.m()));
      }
      std::vector<std::size_t> idx(pool.m());
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      Rng rng(seed);
      // Partial Fisher-Yates.
      for (std::size_t i = 0; i < *m; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
        std::swap(idx[i], idx[pick(rng)]);
      }
      idx.resize(*m);
      std::sort(idx.begin(), idx.end());
      Workload out(d);
      for (std::size_t i : idx) out.Add(pool[i]);
      return out;
    }
  }
  throw std::logic_error("unknown selection strategy");
}

// ---------------------------------------------------------------------------
// Published model.

enum class LearnerKind { kLinear, kRbf };

inline std::string to_string(LearnerKind k) { return k == LearnerKind::kLinear ? "linear" : "rbf"; }

struct ModelMeta {
  double epsilon_consumed = 0.0;
  std::size_t training_m = 0;
  double sensitivity = 0.0;
  std::uint64_t seed = 0;
  double target_mean = 0.0;  // mean noisy training answer
  bool fit_intercept = false;
};

// The released synopsis. Linear: weights = [w0, w1..wd]. RBF: one weight per
// center, Gaussian kernel of width `width_u` over query coefficient vectors.
struct PublishedModel {
  LearnerKind kind = LearnerKind::kLinear;
  std::size_t d = 0;
  std::vector<double> weights;
  std::vector<std::vector<double>> centers;
  double width_u = 0.0;
  ModelMeta meta;

  void Validate() const {
    if (d == 0) throw ShapeError("model d must be >= 1");
    if (kind == LearnerKind::kLinear) {
      if (weights.size() != d + 1) {
        throw ShapeError("linear model needs d+1=" + std::to_string(d + 1) +
                         " weights, got " + std::to_string(weights.size()));
      }
      if (!centers.empty()) throw ShapeError("linear model must not carry centers");
      return;
    }
    if (weights.size() != centers.size()) {
      throw ShapeError("rbf model needs one weight per center");
    }
    if (centers.empty()) throw ShapeError("rbf model has no centers");
    for (const auto& c : centers) {
      if (c.size() != d) throw ShapeError("rbf center length differs from d");
    }
    if (!(width_u > 0.0)) throw ShapeError("rbf width_u must be > 0");
  }
};

namespace internal {

inline ModelMeta MetaFrom(const TrainingSet& t) {
  ModelMeta meta;
  meta.epsilon_consumed = t.epsilon;
  meta.training_m = t.m();
  meta.sensitivity = t.sensitivity;
  meta.seed = t.seed;
  meta.target_mean = std::accumulate(t.targets.begin(), t.targets.end(), 0.0) /
                     static_cast<double>(t.m());
  return meta;
}

inline double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return s;
}

}  // namespace internal

inline double gaussian_kernel(std::span<const double> a, std::span<const double> b,
                              double width_u) {
  return std::exp(-internal::SquaredDistance(a, b) / (2.0 * width_u * width_u));
}

// Ridge regression of targets on query coefficients:
//   min_w |X w - y|^2 + ridge * |w[1:]|^2
// X carries a constant column for w0 only when `fit_intercept` is set;
// otherwise w0 is fixed at 0 so that the weights are a bin estimate. The
// intercept is never penalized. ridge = 0 gives the minimum-norm solution.
inline PublishedModel fit_linear(const TrainingSet& t, double ridge = 1e-9,
                                 bool fit_intercept = false) {
  t.Validate();
  if (!(ridge >= 0.0)) throw std::invalid_argument("ridge must be >= 0");
  const std::size_t m = t.m();
  const std::size_t d = t.d;
  const std::size_t offset = fit_intercept ? 1 : 0;
  const std::size_t cols = d + offset;
  const std::size_t penalty_rows = ridge > 0.0 ? d : 0;

  // Augmented least squares [X; sqrt(ridge) I] w = [y; 0].
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + penalty_rows, cols);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m + penalty_rows);
  for (std::size_t i = 0; i < m; ++i) {
    if (fit_intercept) a(i, 0) = 1.0;
    for (std::size_t j = 0; j < d; ++j) a(i, offset + j) = t.features[i][j];
    b(i) = t.targets[i];
  }
  const double root = std::sqrt(ridge);
  for (std::size_t j = 0; j < penalty_rows; ++j) a(m + j, offset + j) = root;

  const Eigen::VectorXd w = a.completeOrthogonalDecomposition().solve(b);

  PublishedModel model;
  model.kind = LearnerKind::kLinear;
  model.d = d;
  model.weights.assign(d + 1, 0.0);
  if (fit_intercept) model.weights[0] = w(0);
  for (std::size_t j = 0; j < d; ++j) model.weights[1 + j] = w(offset + j);
  model.meta = internal::MetaFrom(t);
  model.meta.fit_intercept = fit_intercept;
  return model;
}

// Median pairwise Euclidean distance between training features; 1 when every
// feature is identical.
inline double median_feature_distance(const TrainingSet& t) {
  t.Validate();
  std::vector<double> dist;
  for (std::size_t i = 0; i < t.m(); ++i) {
    for (std::size_t k = i + 1; k < t.m(); ++k) {
      dist.push_back(std::sqrt(internal::SquaredDistance(t.features[i], t.features[k])));
    }
  }
  if (dist.empty()) return 1.0;
  auto mid = dist.begin() + dist.size() / 2;
  std::nth_element(dist.begin(), mid, dist.end());
  double med = *mid;
  if (dist.size() % 2 == 0) {
    med = 0.5 * (med + *std::max_element(dist.begin(), mid));
  }
  return med > 0.0 ? med : 1.0;
}

inline Eigen::MatrixXd kernel_matrix(const std::vector<std::vector<double>>& points,
                                     double width_u) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      k(i, j) = k(j, i) = gaussian_kernel(points[i], points[j], width_u);
    }
  }
  return k;
}

// Kernel ridge regression: alpha = (K + ridge I)^-1 y.
inline PublishedModel fit_rbf(const TrainingSet& t, double width_u, double ridge = 1e-3) {
  t.Validate();
  if (!(width_u > 0.0)) throw std::invalid_argument("rbf width_u must be > 0");
  if (!(ridge > 0.0)) throw std::invalid_argument("rbf ridge must be > 0");
  Eigen::MatrixXd k = kernel_matrix(t.features, width_u);
  k.diagonal().array() += ridge;
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(t.targets.data(),
                                                              static_cast<Eigen::Index>(t.m()));
  const Eigen::VectorXd alpha = k.ldlt().solve(y);

  PublishedModel model;
  model.kind = LearnerKind::kRbf;
  model.d = t.d;
  model.weights.assign(alpha.data(), alpha.data() + alpha.size());
  model.centers = t.features;
  model.width_u = width_u;
  model.meta = internal::MetaFrom(t);
  return model;
}

inline double predict_one(const PublishedModel& model, std::span<const double> q) {
  if (model.kind == LearnerKind::kLinear) {
    double s = model.weights[0];
    for (std::size_t j = 0; j < model.d; ++j) s += model.weights[j + 1] * q[j];
    return s;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < model.centers.size(); ++i) {
    s += model.weights[i] * gaussian_kernel(q, model.centers[i], model.width_u);
  }
  return s;
}

// Answers a workload from the model alone.
inline std::vector<double> predict(const PublishedModel& model, const Workload& workload) {
  if (workload.d() != model.d) {
    throw std::invalid_argument("workload d=" + std::to_string(workload.d()) +
                                " does not match model d=" + std::to_string(model.d));
  }
  std::vector<double> out;
  out.reserve(workload.m());
  for (const auto& q : workload) out.push_back(predict_one(model, q.coeffs()));
  return out;
}

// ---------------------------------------------------------------------------
// Model file (JSON).

inline nlohmann::ordered_json model_to_json(const PublishedModel& model) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(model.kind);
  j["d"] = model.d;
  j["weights"] = model.weights;
  j["centers"] = model.centers;
  j["width_u"] = model.width_u;
  auto& meta = j["meta"];
  meta["epsilon_consumed"] = std::isinf(model.meta.epsilon_consumed)
                                 ? nlohmann::ordered_json(nullptr)
                                 : nlohmann::ordered_json(model.meta.epsilon_consumed);
  meta["training_m"] = model.meta.training_m;
  meta["sensitivity"] = model.meta.sensitivity;
  meta["seed"] = model.meta.seed;
  meta["target_mean"] = model.meta.target_mean;
  meta["fit_intercept"] = model.meta.fit_intercept;
  return j;
}

inline PublishedModel model_from_json(const nlohmann::json& j) {
  PublishedModel model;
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "linear") {
      model.kind = LearnerKind::kLinear;
    } else if (kind == "rbf") {
      model.kind = LearnerKind::kRbf;
    } else {
      throw ParseError("unknown model kind '" + kind + "'");
    }
    model.d = j.at("d").get<std::size_t>();
    model.weights = j.at("weights").get<std::vector<double>>();
    model.centers = j.value("centers", std::vector<std::vector<double>>{});
    model.width_u = j.value("width_u", 0.0);
    const auto& meta = j.at("meta");
    const auto& eps = meta.at("epsilon_consumed");
    model.meta.epsilon_consumed = eps.is_null() ? kNoiseFree : eps.get<double>();
    model.meta.training_m = meta.at("training_m").get<std::size_t>();
    model.meta.sensitivity = meta.at("sensitivity").get<double>();
    model.meta.seed = meta.at("seed").get<std::uint64_t>();
    model.meta.target_mean = meta.value("target_mean", 0.0);
    model.meta.fit_intercept = meta.value("fit_intercept", false);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed model file: ") + e.what());
  }
  model.Validate();
  return model;
}

inline void save_model(const PublishedModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write model file: " + path);
  out << model_to_json(model).dump(2) << '\n';
  if (!out) throw IoError("failed writing model file: " + path);
}

inline PublishedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("model file is not valid JSON: ") + e.what());
  }
  return model_from_json(j);
}

}  // namespace mldp

#endif  // MLDP_LEARNING_HPP_
