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

#ifndef MLDP_BENCH_HPP_
#define MLDP_BENCH_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mldp/budget.hpp"
#include "mldp/errors.hpp"
#include "mldp/histogram.hpp"
#include "mldp/learning.hpp"
#include "mldp/mechanisms.hpp"
#include "mldp/pipeline.hpp"
#include "mldp/seeds.hpp"
#include "mldp/workload.hpp"

namespace mldp {

inline constexpr std::string_view kCodeVersion = "mldp 0.1.0";

// Mean absolute error.
inline double mae(std::span<const double> predicted, std::span<const double> truth) {
  if (predicted.size() != truth.size()) {
    throw std::invalid_argument("mae: length mismatch (" + std::to_string(predicted.size()) +
                                " vs " + std::to_string(truth.size()) + ")");
  }
  if (predicted.empty()) throw std::invalid_argument("mae: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) s += std::abs(predicted[i] - truth[i]);
  return s / static_cast<double>(truth.size());
}

enum class SweepVariable { kTrainingM, kTestM, kEpsilon };

inline std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::kTrainingM: return "training_m";
    case SweepVariable::kTestM: return "test_m";
    case SweepVariable::kEpsilon: return "epsilon";
  }
  return "?";
}

inline const std::vector<std::string>& known_mechanisms() {
  static const std::vector<std::string> names = {"mldp", "laplace", "mwem", "strategy-identity",
                                                 "strategy-hier"};
  return names;
}

struct DatasetSpec {
  std::optional<std::string> path;  // CSV; otherwise simulated
  std::size_t d = 128;
  std::uint64_t max_count = 1000;
  std::uint64_t seed = 7;
};

struct ExperimentConfig {
  DatasetSpec dataset;
  std::vector<std::string> mechanisms;
  SweepVariable sweep = SweepVariable::kEpsilon;
  std::vector<double> grid;

  // Values held fixed for the variables not being swept.
  double epsilon = 1.0;
  std::size_t training_m = 128;
  std::size_t test_m = 500;
  Selection selection = Selection::kSingleton;
  PoolSpec::Kind pool = PoolSpec::Kind::kAllRanges;
  LearnerKind learner = LearnerKind::kLinear;
  std::optional<double> ridge;
  std::optional<double> width_u;
  int mwem_rounds = 20;

  std::size_t trials = 20;
  std::uint64_t base_seed = 1;

  void Validate() const {
    if (mechanisms.empty()) throw std::invalid_argument("experiment needs at least one mechanism");
    std::set<std::string> seen;
    for (const auto& m : mechanisms) {
      const auto& known = known_mechanisms();
      if (std::find(known.begin(), known.end(), m) == known.end()) {
        throw std::invalid_argument("unknown mechanism '" + m + "'");
      }
      if (!seen.insert(m).second) throw std::invalid_argument("duplicate mechanism '" + m + "'");
    }
    if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
      throw std::invalid_argument("epsilon must be finite and > 0");
    }
    if (test_m < 1) throw std::invalid_argument("test_m must be >= 1");
    if (mwem_rounds < 1) throw std::invalid_argument("mwem_rounds must be >= 1");
    for (double v : grid) {
      if (sweep == SweepVariable::kEpsilon) {
        if (!(v > 0.0) || !std::isfinite(v)) {
          throw std::invalid_argument("epsilon grid values must be finite and > 0");
        }
      } else if (!(v >= 1.0) || v != std::floor(v)) {
        throw std::invalid_argument(to_string(sweep) + " grid values must be integers >= 1");
      }
    }
    if (sweep == SweepVariable::kTrainingM && selection != Selection::kRandomM) {
      throw std::invalid_argument("training_m sweep requires random_m selection");
    }
    if (!dataset.path && dataset.d == 0) throw std::invalid_argument("dataset d must be >= 1");
  }
};

inline nlohmann::ordered_json config_to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  if (c.dataset.path) {
    j["dataset"]["path"] = *c.dataset.path;
  } else {
    j["dataset"]["simulated"] = {
        {"d", c.dataset.d}, {"max_count", c.dataset.max_count}, {"seed", c.dataset.seed}};
  }
  j["mechanisms"] = c.mechanisms;
  j["sweep"] = {{"variable", to_string(c.sweep)}, {"grid", c.grid}};
  auto& f = j["fixed"];
  f["epsilon"] = c.epsilon;
  f["training_m"] = c.training_m;
  f["test_m"] = c.test_m;
  f["selection"] = c.selection == Selection::kSingleton     ? "singleton"
                   : c.selection == Selection::kGreedyCover ? "greedy_cover"
                                                            : "random_m";
  f["pool"] = c.pool == PoolSpec::Kind::kAllRanges      ? "all_ranges"
              : c.pool == PoolSpec::Kind::kSubsets      ? "subsets"
              : c.pool == PoolSpec::Kind::kRandomRanges ? "random_ranges"
                                                        : "singletons";
  f["learner"] = to_string(c.learner);
  f["ridge"] = c.ridge ? nlohmann::ordered_json(*c.ridge) : nlohmann::ordered_json(nullptr);
  f["width_u"] = c.width_u ? nlohmann::ordered_json(*c.width_u) : nlohmann::ordered_json(nullptr);
  f["mwem_rounds"] = c.mwem_rounds;
  j["trials"] = c.trials;
  j["base_seed"] = c.base_seed;
  return j;
}

inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("dataset")) {
      const auto& ds = j["dataset"];
      if (ds.contains("path")) {
        c.dataset.path = ds["path"].get<std::string>();
      } else if (ds.contains("simulated")) {
        const auto& sim = ds["simulated"];
        c.dataset.d = sim.value("d", c.dataset.d);
        c.dataset.max_count = sim.value("max_count", c.dataset.max_count);
        c.dataset.seed = sim.value("seed", c.dataset.seed);
      }
    }
    c.mechanisms = j.at("mechanisms").get<std::vector<std::string>>();
    const auto& sw = j.at("sweep");
    const std::string var = sw.at("variable").get<std::string>();
    if (var == "training_m") {
      c.sweep = SweepVariable::kTrainingM;
      c.selection = Selection::kRandomM;
    } else if (var == "test_m") {
      c.sweep = SweepVariable::kTestM;
    } else if (var == "epsilon") {
      c.sweep = SweepVariable::kEpsilon;
    } else {
      throw ParseError("unknown sweep variable '" + var + "'");
    }
    c.grid = sw.at("grid").get<std::vector<double>>();
    if (j.contains("fixed")) {
      const auto& f = j["fixed"];
      c.epsilon = f.value("epsilon", c.epsilon);
      c.training_m = f.value("training_m", c.training_m);
      c.test_m = f.value("test_m", c.test_m);
      if (f.contains("selection")) c.selection = parse_selection(f["selection"].get<std::string>());
      if (f.contains("pool")) c.pool = parse_pool_kind(f["pool"].get<std::string>());
      if (f.contains("learner")) c.learner = parse_learner(f["learner"].get<std::string>());
      if (f.contains("ridge") && !f["ridge"].is_null()) c.ridge = f["ridge"].get<double>();
      if (f.contains("width_u") && !f["width_u"].is_null()) c.width_u = f["width_u"].get<double>();
      c.mwem_rounds = f.value("mwem_rounds", c.mwem_rounds);
    }
    c.trials = j.value("trials", c.trials);
    c.base_seed = j.value("base_seed", c.base_seed);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed experiment config: ") + e.what());
  }
  c.Validate();
  return c;
}

struct ReportRow {
  std::string mechanism;
  double value = 0.0;  // grid point
  double mean_mae = 0.0;
  double std_mae = 0.0;  // sample standard deviation; 0 for one trial
  std::vector<std::uint64_t> trial_seeds;
  std::vector<double> trial_mae;
  // MLDP only: mean number of test queries identical to a training query.
  double mean_overlap = 0.0;
};

struct ExperimentReport {
  SweepVariable sweep = SweepVariable::kEpsilon;
  nlohmann::ordered_json config;
  std::string code_version{kCodeVersion};
  std::string seed_rule{kSeedRule};
  std::vector<ReportRow> rows;  // mechanism-major, grid order

  const ReportRow& row(std::string_view mechanism, std::size_t grid_index) const {
    std::size_t seen = 0;
    for (const auto& r : rows) {
      if (r.mechanism == mechanism && seen++ == grid_index) return r;
    }
    throw std::out_of_range("no report row for " + std::string(mechanism));
  }
  std::vector<double> means(std::string_view mechanism) const {
    std::vector<double> out;
    for (const auto& r : rows) {
      if (r.mechanism == mechanism) out.push_back(r.mean_mae);
    }
    return out;
  }
};

namespace internal {

inline Histogram LoadDataset(const DatasetSpec& ds) {
  if (ds.path) return load_histogram_csv(*ds.path);
  return generate_simulated_histogram(ds.d, ds.max_count, ds.seed);
}

// Whether a mechanism's output depends on the swept variable. Independent
// mechanisms reuse the grid-0 seed so their rows repeat across the grid.
inline bool DependsOnSweep(const std::string& mechanism, SweepVariable v) {
  if (mechanism == "mldp") return v != SweepVariable::kTestM;
  return v != SweepVariable::kTrainingM;
}

inline std::size_t CountOverlap(const Workload& test, const Workload& train) {
  std::size_t n = 0;
  for (const auto& q : test) {
    for (const auto& t : train) {
      if (std::equal(q.coeffs().begin(), q.coeffs().end(), t.coeffs().begin())) {
        ++n;
        break;
      }
    }
  }
  return n;
}

struct JobResult {
  double mae = 0.0;
  std::size_t overlap = 0;
};

inline MldpConfig MldpConfigFor(const ExperimentConfig& c, double epsilon, std::size_t training_m,
                                std::uint64_t seed) {
  MldpConfig m;
  m.selection = c.selection;
  if (c.selection == Selection::kRandomM) m.m = training_m;
  m.pool.kind = c.pool;
  m.pool.m = training_m;
  m.pool.seed = seed;
  m.learner = c.learner;
  m.ridge = c.ridge;
  m.width_u = c.width_u;
  m.epsilon = epsilon;
  m.seed = seed;
  return m;
}

inline JobResult RunJob(const ExperimentConfig& c, const std::string& mechanism,
                        const Histogram& h, const Workload& test,
                        const std::vector<double>& truth, double epsilon,
                        std::size_t training_m, std::uint64_t seed) {
  PrivacyBudget budget(epsilon);
  if (mechanism == "mldp") {
    const auto release = mldp_release(h, MldpConfigFor(c, epsilon, training_m, seed), budget);
    return {mae(mldp_answer(release.model, test), truth), CountOverlap(test, release.training)};
  }
  if (mechanism == "laplace") {
    return {mae(laplace_batch(test, h, budget, epsilon, seed).answers, truth), 0};
  }
  if (mechanism == "mwem") {
    return {mae(mwem_publish(test, h, budget, epsilon, c.mwem_rounds, seed).answers, truth), 0};
  }
  const Strategy s = mechanism == "strategy-identity" ? Strategy::kIdentity
                                                      : Strategy::kHierarchical;
  return {mae(strategy_mechanism(test, s, h, budget, epsilon, seed).answers, truth), 0};
}

inline void Summarize(ReportRow& row) {
  const double n = static_cast<double>(row.trial_mae.size());
  double sum = 0.0;
  for (double v : row.trial_mae) sum += v;
  row.mean_mae = sum / n;
  double ss = 0.0;
  for (double v : row.trial_mae) ss += (v - row.mean_mae) * (v - row.mean_mae);
  row.std_mae = row.trial_mae.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
}

inline ExperimentReport RunSweep(const ExperimentConfig& c) {
  c.Validate();
  const Histogram h = LoadDataset(c.dataset);

  ExperimentReport report;
  report.sweep = c.sweep;
  report.config = config_to_json(c);

  const std::size_t g_count = c.grid.size();
  const std::size_t k_count = c.mechanisms.size();
  std::vector<ReportRow> rows(k_count * g_count);
  std::vector<std::vector<double>> overlap(rows.size());
  for (std::size_t k = 0; k < k_count; ++k) {
    for (std::size_t g = 0; g < g_count; ++g) {
      rows[k * g_count + g].mechanism = c.mechanisms[k];
      rows[k * g_count + g].value = c.grid[g];
    }
  }

  for (std::size_t t = 0; t < c.trials; ++t) {
    const std::uint64_t trial_seed = c.base_seed + t;
    std::optional<Workload> fixed_test;
    std::vector<double> fixed_truth;
    if (c.sweep != SweepVariable::kTestM) {
      fixed_test = random_range_workload(h.d(), c.test_m, DeriveSeed(c.base_seed, "test", 0, t));
      fixed_truth = evaluate_workload(*fixed_test, h);
    }
    for (std::size_t g = 0; g < g_count; ++g) {
      double epsilon = c.epsilon;
      std::size_t training_m = c.training_m;
      Workload test = fixed_test ? *fixed_test : Workload(h.d());
      std::vector<double> truth = fixed_truth;
      switch (c.sweep) {
        case SweepVariable::kEpsilon:
          epsilon = c.grid[g];
          break;
        case SweepVariable::kTrainingM:
          training_m = static_cast<std::size_t>(c.grid[g]);
          break;
        case SweepVariable::kTestM:
          test = random_range_workload(h.d(), static_cast<std::size_t>(c.grid[g]),
                                       DeriveSeed(c.base_seed, "test", g, t));
          truth = evaluate_workload(test, h);
          break;
      }
      for (std::size_t k = 0; k < k_count; ++k) {
        const std::string& mech = c.mechanisms[k];
        const std::size_t seed_g = DependsOnSweep(mech, c.sweep) ? g : 0;
        const auto job = RunJob(c, mech, h, test, truth, epsilon, training_m,
                                DeriveSeed(c.base_seed, mech, seed_g, t));
        auto& row = rows[k * g_count + g];
        row.trial_seeds.push_back(trial_seed);
        row.trial_mae.push_back(job.mae);
        overlap[k * g_count + g].push_back(static_cast<double>(job.overlap));
      }
    }
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Summarize(rows[r]);
    double s = 0.0;
    for (double v : overlap[r]) s += v;
    rows[r].mean_overlap = s / static_cast<double>(overlap[r].size());
  }
  report.rows = std::move(rows);
  return report;
}

inline void RequireSweep(const ExperimentConfig& c, SweepVariable v) {
  if (c.sweep != v) {
    throw std::invalid_argument("config sweeps " + to_string(c.sweep) + ", expected " +
                                to_string(v));
  }
}

inline std::string FormatDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace internal

// MLDP trained on a random_m selection of each grid size; every mechanism is
// scored on one held-out random range workload per trial.
inline ExperimentReport run_training_size_sweep(const ExperimentConfig& c) {
  internal::RequireSweep(c, SweepVariable::kTrainingM);
  return internal::RunSweep(c);
}

// One MLDP model per trial, scored on fresh test workloads of each size.
inline ExperimentReport run_test_size_sweep(const ExperimentConfig& c) {
  internal::RequireSweep(c, SweepVariable::kTestM);
  return internal::RunSweep(c);
}

// Every mechanism re-run at each epsilon with its own budget.
inline ExperimentReport run_epsilon_sweep(const ExperimentConfig& c) {
  internal::RequireSweep(c, SweepVariable::kEpsilon);
  return internal::RunSweep(c);
}

inline ExperimentReport run_experiment(const ExperimentConfig& c) {
  switch (c.sweep) {
    case SweepVariable::kTrainingM: return run_training_size_sweep(c);
    case SweepVariable::kTestM: return run_test_size_sweep(c);
    case SweepVariable::kEpsilon: return run_epsilon_sweep(c);
  }
  throw std::logic_error("unknown sweep");
}

inline nlohmann::ordered_json report_to_json(const ExperimentReport& r) {
  nlohmann::ordered_json j;
  j["code_version"] = r.code_version;
  j["seed_rule"] = r.seed_rule;
  j["config"] = r.config;
  j["sweep_variable"] = to_string(r.sweep);
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    j["rows"].push_back({{"mechanism", row.mechanism},
                         {"value", row.value},
                         {"mean_mae", row.mean_mae},
                         {"std_mae", row.std_mae},
                         {"mean_overlap", row.mean_overlap},
                         {"trial_seeds", row.trial_seeds},
                         {"trial_mae", row.trial_mae}});
  }
  return j;
}

enum class ReportFormat { kCsv, kJson };

// CSV layout: `#` comment lines echo the provenance, then one row per
// (mechanism, grid point, statistic).
inline void write_report_csv(const ExperimentReport& r, std::ostream& out) {
  using internal::FormatDouble;
  out << "# code_version=" << r.code_version << '\n';
  out << "# seed_rule=" << r.seed_rule << '\n';
  out << "# config=" << r.config.dump() << '\n';
  out << "mechanism,sweep_variable,value,statistic,amount\n";
  const std::string var = to_string(r.sweep);
  for (const auto& row : r.rows) {
    const std::string prefix = row.mechanism + ',' + var + ',' + FormatDouble(row.value) + ',';
    out << prefix << "mean_mae," << FormatDouble(row.mean_mae) << '\n';
    out << prefix << "std_mae," << FormatDouble(row.std_mae) << '\n';
    out << prefix << "mean_overlap," << FormatDouble(row.mean_overlap) << '\n';
    for (std::size_t t = 0; t < row.trial_mae.size(); ++t) {
      out << prefix << "trial_" << t << "_mae," << FormatDouble(row.trial_mae[t]) << '\n';
    }
  }
}

inline void emit_report(const ExperimentReport& r, ReportFormat format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report: " + path);
  if (format == ReportFormat::kJson) {
    out << report_to_json(r).dump(2) << '\n';
  } else {
    write_report_csv(r, out);
  }
  if (!out) throw IoError("failed writing report: " + path);
}

}  // namespace mldp

#endif  // MLDP_BENCH_HPP_
