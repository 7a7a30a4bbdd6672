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

#include "mldp/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"
#include "test_support.hpp"

namespace mldp {
namespace {

constexpr int kNumSamples = 100000;

TEST(LaplaceSampleTest, ZeroScaleIsExactlyZero) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(laplace_sample(0.0, rng), 0.0);
  EXPECT_THROW(laplace_sample(-1.0, rng), std::invalid_argument);
}

TEST(LaplaceSampleTest, MeanAbsoluteValueAndMedian) {
  Rng rng(20240601);
  std::vector<double> xs(kNumSamples);
  double abs_sum = 0.0;
  for (auto& x : xs) {
    x = laplace_sample(6.0, rng);
    abs_sum += std::abs(x);
  }
  // E|X| = b for Laplace(b).
  EXPECT_NEAR(abs_sum / kNumSamples, 6.0, 0.18);
  std::nth_element(xs.begin(), xs.begin() + kNumSamples / 2, xs.end());
  EXPECT_NEAR(xs[kNumSamples / 2], 0.0, 0.15);
}

TEST(LaplaceSampleTest, TailMatchesCdf) {
  // P(|X| > b ln 10) = 0.1.
  Rng rng(3);
  int over = 0;
  for (int i = 0; i < kNumSamples; ++i) over += std::abs(laplace_sample(2.0, rng)) > 2.0 * std::log(10.0);
  EXPECT_NEAR(over / double(kNumSamples), 0.1, 0.005);
}

TEST(LaplaceBatchTest, ScalesNoiseBySensitivity) {
  const auto h = testing::GradeHistogram();
  PrivacyBudget budget(2.0);
  const auto all = laplace_batch(testing::GradeRangeWorkload(), h, budget, 1.0, 5);
  EXPECT_EQ(all.sensitivity_used, 6);
  EXPECT_EQ(all.answers.size(), 10u);
  const auto single = laplace_batch(testing::GradeSingletons(), h, budget, 1.0, 5);
  EXPECT_EQ(single.sensitivity_used, 1);
  EXPECT_EQ(budget.consumed(), 2.0);
  EXPECT_EQ(budget.ledger().size(), 2u);
}

TEST(LaplaceBatchTest, EmpiricalErrorMatchesScale) {
  // Per-query MAE over repetitions estimates S_F / epsilon.
  const auto h = testing::GradeHistogram();
  const auto f = testing::GradeRangeWorkload();
  const auto truth = evaluate_workload(f, h);
  constexpr int kReps = 10000;
  std::vector<double> err(f.m(), 0.0);
  for (int r = 0; r < kReps; ++r) {
    PrivacyBudget budget(0.5);
    const auto out = laplace_batch(f, h, budget, 0.5, 1000 + r);
    for (std::size_t i = 0; i < f.m(); ++i) err[i] += std::abs(out.answers[i] - truth[i]);
  }
  for (double e : err) EXPECT_NEAR(e / kReps, 12.0, 0.05 * 12.0);
}

TEST(LaplaceBatchTest, NoiseFreeModeIsExact) {
  const auto h = testing::GradeHistogram();
  PrivacyBudget budget(kNoiseFree);
  const auto out = laplace_batch(testing::GradeRangeWorkload(), h, budget, kNoiseFree, 1);
  EXPECT_EQ(out.answers, evaluate_workload(testing::GradeRangeWorkload(), h));
}

TEST(LaplaceBatchTest, ErrorsAndEmptyWorkload) {
  const auto h = testing::GradeHistogram();
  PrivacyBudget budget(1.0);
  EXPECT_THROW(laplace_batch(testing::GradeSingletons(), h, budget, 2.0, 1), BudgetExceededError);
  EXPECT_THROW(laplace_batch(testing::GradeSingletons(), h, budget, 0.0, 1), std::invalid_argument);
  const auto empty = laplace_batch(Workload(4), h, budget, 1.0, 1);
  EXPECT_TRUE(empty.answers.empty());
  EXPECT_TRUE(budget.ledger().empty());
}

TEST(LaplaceBatchTest, DeterministicAndClamping) {
  const auto h = Histogram({0, 0, 1, 0});
  const auto f = testing::GradeSingletons();
  PrivacyBudget b1(10), b2(10), b3(10);
  EXPECT_EQ(laplace_batch(f, h, b1, 1.0, 77).answers, laplace_batch(f, h, b2, 1.0, 77).answers);
  const auto clamped = laplace_batch(f, h, b3, 0.1, 77, {.clamp_nonnegative = true});
  for (double a : clamped.answers) EXPECT_GE(a, 0.0);
}

TEST(NoisyAnswerSetTest, WritesCsvAndSidecar) {
  const auto h = testing::GradeHistogram();
  PrivacyBudget budget(1.0);
  const auto out = laplace_batch(testing::GradeRangeWorkload(), h, budget, 1.0, 9);
  const std::string csv = testing::TempPath("answers.csv");
  const std::string meta = testing::TempPath("answers.json");
  write_noisy_answers(out, csv, meta);

  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "query_id,noisy_answer");
  for (std::size_t i = 0; i < out.answers.size(); ++i) {
    ASSERT_TRUE(std::getline(in, line));
    EXPECT_EQ(std::stod(line.substr(line.find(',') + 1)), out.answers[i]);
  }
  const auto j = nlohmann::json::parse(std::ifstream(meta));
  EXPECT_EQ(j["mechanism"], "laplace");
  EXPECT_EQ(j["epsilon"], 1.0);
  EXPECT_EQ(j["sensitivity"], 6.0);
  EXPECT_EQ(j["seed"], 9);
}

TEST(ExponentialSelectTest, NoiseFreePicksLowestArgmax) {
  Rng rng(1);
  const std::vector<double> scores = {1, 5, 3, 5};
  EXPECT_EQ(internal::ExponentialSelect(scores, kNoiseFree, 1.0, rng), 1u);
}

TEST(ExponentialSelectTest, FrequenciesFollowWeights) {
  Rng rng(4);
  const std::vector<double> scores = {0.0, std::log(3.0) * 2.0};  // weights 1 : 3 at eps=1
  int second = 0;
  for (int i = 0; i < 40000; ++i) second += internal::ExponentialSelect(scores, 1.0, 1.0, rng);
  EXPECT_NEAR(second / 40000.0, 0.75, 0.01);
}

TEST(MwemTest, AccountingAndInvariants) {
  const auto h = testing::GradeHistogram();
  const auto f = testing::GradeRangeWorkload();
  PrivacyBudget budget(1.0);
  int rounds_seen = 0;
  MwemOptions opts;
  opts.on_round = [&](int, const SyntheticHistogram& s) {
    ++rounds_seen;
    double total = 0.0;
    for (double b : s.bins) {
      EXPECT_GE(b, 0.0);
      total += b;
    }
    EXPECT_NEAR(total, 49.0, 1e-9);
  };
  const auto res = mwem_publish(f, h, budget, 1.0, 7, 3, opts);
  EXPECT_EQ(rounds_seen, 7);
  EXPECT_EQ(budget.ledger().size(), 14u);
  for (const auto& c : budget.ledger()) EXPECT_EQ(c.epsilon, 1.0 / 14.0);
  EXPECT_EQ(budget.consumed(), 1.0);
  EXPECT_EQ(res.answers, evaluate_workload(f, res.synthetic.bins));
}

TEST(MwemTest, ConvergesOnSingleQueryAtHighEpsilon) {
  const auto h = testing::GradeHistogram();
  const Workload f(4, {range_query(1, 1, 4)});
  double err = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PrivacyBudget budget(50.0);
    err += std::abs(mwem_publish(f, h, budget, 50.0, 10, seed).answers[0] - 24.0);
  }
  EXPECT_LT(err / 20.0, 2.0);
}

TEST(MwemTest, FirstUpdateFollowsMultiplicativeRule) {
  // One noise-free round on f8: bins start at 49/4; the selected bin is
  // scaled by exp((24 - 12.25) / 98) and everything renormalised to 49.
  const auto h = testing::GradeHistogram();
  const Workload f(4, {range_query(1, 1, 4)});
  PrivacyBudget budget(kNoiseFree);
  MwemOptions literal;
  literal.replay_passes = 0;
  const auto res = mwem_publish(f, h, budget, kNoiseFree, 1, 0, literal);
  const double grow = 12.25 * std::exp(11.75 / 98.0);
  const double norm = 49.0 / (grow + 3 * 12.25);
  EXPECT_NEAR(res.synthetic.bins[1], grow * norm, 1e-12);
  EXPECT_NEAR(res.synthetic.bins[0], 12.25 * norm, 1e-12);
}

TEST(MwemTest, Errors) {
  const auto h = testing::GradeHistogram();
  PrivacyBudget budget(1.0);
  EXPECT_THROW(mwem_publish(testing::GradeSingletons(), h, budget, 1.0, 0, 1), std::invalid_argument);
  EXPECT_THROW(mwem_publish(Workload(4), h, budget, 1.0, 3, 1), std::invalid_argument);
  EXPECT_THROW(mwem_publish(testing::GradeSingletons(), Histogram({0, 0, 0, 0}), budget, 1.0, 3, 1),
               std::invalid_argument);
  EXPECT_THROW(mwem_publish(testing::GradeSingletons(), h, budget, 2.0, 3, 1), BudgetExceededError);
  EXPECT_TRUE(budget.ledger().empty());
}

TEST(StrategyMechanismTest, StrategySensitivities) {
  EXPECT_EQ(workload_sensitivity(strategy_workload(Strategy::kIdentity, 4)), 1);
  EXPECT_EQ(workload_sensitivity(strategy_workload(Strategy::kHierarchical, 4)), 3);
  EXPECT_EQ(strategy_workload(Strategy::kHierarchical, 4).m(), 7u);
  // Padded to 8 bins.
  const auto padded = strategy_workload(Strategy::kHierarchical, 5);
  EXPECT_EQ(padded.d(), 8u);
  EXPECT_EQ(workload_sensitivity(padded), 4);
}

TEST(StrategyMechanismTest, NoiseFreeReconstructionIsExact) {
  const auto h = generate_simulated_histogram(13, 100, 2);
  const auto f = all_range_queries(13);
  const auto truth = evaluate_workload(f, h);
  for (auto s : {Strategy::kIdentity, Strategy::kHierarchical}) {
    PrivacyBudget budget(kNoiseFree);
    const auto res = strategy_mechanism(f, s, h, budget, kNoiseFree, 1);
    ASSERT_EQ(res.answers.size(), truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) EXPECT_NEAR(res.answers[i], truth[i], 1e-6);
  }
}

TEST(StrategyMechanismTest, ChargesOnceAndUsesStrategyScale) {
  const auto h = testing::GradeHistogram();
  PrivacyBudget budget(1.0);
  const auto res =
      strategy_mechanism(testing::GradeRangeWorkload(), Strategy::kHierarchical, h, budget, 1.0, 4);
  EXPECT_EQ(res.measurement.sensitivity_used, 3);
  EXPECT_EQ(budget.ledger().size(), 1u);
  EXPECT_EQ(budget.consumed(), 1.0);
  EXPECT_THROW(
      strategy_mechanism(testing::GradeRangeWorkload(), Strategy::kIdentity, h, budget, 1.0, 4),
      BudgetExceededError);
}

TEST(StrategyMechanismTest, IdentityLeastSquaresIsTheNoisyBins) {
  const auto h = testing::GradeHistogram();
  PrivacyBudget budget(1.0);
  const auto res = strategy_mechanism(testing::GradeSingletons(), Strategy::kIdentity, h, budget, 1.0, 8);
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_NEAR(res.estimate[j], res.measurement.answers[j], 1e-6);
    EXPECT_NEAR(res.answers[j], res.measurement.answers[j], 1e-6);
  }
}

}  // namespace
}  // namespace mldp
