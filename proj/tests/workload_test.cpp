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

#include "mldp/workload.hpp"

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace mldp {
namespace {

std::vector<double> Vec(std::span<const double> s) { return {s.begin(), s.end()}; }

TEST(RangeQueryTest, BuildsIndicator) {
  EXPECT_EQ(Vec(range_query(1, 2, 4).coeffs()), (std::vector<double>{0, 1, 1, 0}));
  EXPECT_EQ(Vec(range_query(0, 3, 4).coeffs()), (std::vector<double>{1, 1, 1, 1}));
  EXPECT_THROW(range_query(3, 1, 4), std::invalid_argument);
  EXPECT_THROW(range_query(1, 4, 4), std::out_of_range);
}

TEST(EvaluateTest, GradeExample) {
  const auto h = testing::GradeHistogram();
  const auto f = testing::GradeRangeWorkload();
  EXPECT_EQ(evaluate(f[0], h), 49);
  EXPECT_EQ(evaluate(f[6], h), 12);
  EXPECT_EQ(evaluate_workload(f, h), (std::vector<double>{49, 42, 37, 36, 30, 13, 12, 24, 6, 7}));
  EXPECT_EQ(evaluate(f[3], Histogram({0, 0, 0, 0})), 0);
}

TEST(EvaluateTest, EmptySingletonAndMismatch) {
  const auto h = testing::GradeHistogram();
  EXPECT_TRUE(evaluate_workload(Workload(4), h).empty());
  Workload one(4, {range_query(0, 1, 4)});
  EXPECT_EQ(evaluate_workload(one, h), std::vector<double>{evaluate(one[0], h)});
  EXPECT_THROW(evaluate(range_query(0, 1, 3), h), std::invalid_argument);
}

TEST(SensitivityTest, GradeExample) {
  const auto h = testing::GradeHistogram();
  EXPECT_EQ(workload_sensitivity(testing::GradeRangeWorkload()), 6);
  EXPECT_EQ(workload_sensitivity(testing::GradeSingletons()), 1);
  EXPECT_EQ(workload_sensitivity(Workload(4)), 0);
  EXPECT_EQ(brute_force_sensitivity(testing::GradeRangeWorkload(), h), 6);
  EXPECT_EQ(brute_force_sensitivity(Workload(4, {range_query(1, 1, 4)}), h), 1);
}

TEST(SensitivityTest, ClosedFormMatchesBruteForce) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + rng() % 8;
    const std::size_t m = rng() % 12;
    const auto w = testing::RandomBinaryWorkload(d, m, rng);
    const auto h = generate_simulated_histogram(d, 3, rng());
    EXPECT_EQ(workload_sensitivity(w), brute_force_sensitivity(w, h));
  }
}

TEST(SensitivityTest, GeneralCoefficientsUseAbsoluteColumnSums) {
  Workload w(3);
  w.Add(LinearQuery::General({0.5, -2.0, 0.0}));
  w.Add(LinearQuery::General({-0.5, 1.0, 3.0}));
  EXPECT_DOUBLE_EQ(workload_sensitivity(w), 3.0);
  EXPECT_DOUBLE_EQ(brute_force_sensitivity(w, Histogram({1, 1, 1})), 3.0);
}

TEST(SensitivityTest, SubadditiveUnderConcatenation) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + rng() % 8;
    const auto a = testing::RandomBinaryWorkload(d, rng() % 10, rng);
    const auto b = testing::RandomBinaryWorkload(d, rng() % 10, rng);
    EXPECT_LE(workload_sensitivity(concat(a, b)),
              workload_sensitivity(a) + workload_sensitivity(b));
  }
  // Equality when both peak on the same bin.
  Workload a(3, {range_query(0, 1, 3)});
  Workload b(3, {range_query(1, 2, 3)});
  EXPECT_EQ(workload_sensitivity(concat(a, b)), 2);
}

TEST(SensitivityTest, SingleBinaryQueryIsOne) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const std::size_t d = 1 + rng() % 10;
    const std::size_t lo = rng() % d;
    const std::size_t hi = lo + rng() % (d - lo);
    EXPECT_EQ(workload_sensitivity(Workload(d, {range_query(lo, hi, d)})), 1);
  }
}

TEST(AllRangeQueriesTest, MatchesGradeTableOrder) {
  EXPECT_EQ(all_range_queries(4), testing::GradeRangeWorkload());
  const auto one = all_range_queries(1);
  ASSERT_EQ(one.m(), 1u);
  EXPECT_EQ(Vec(one[0].coeffs()), std::vector<double>{1});
}

TEST(AllRangeQueriesTest, CountAndSensitivity) {
  const auto w = all_range_queries(10);
  EXPECT_EQ(w.m(), 55u);
  EXPECT_EQ(workload_sensitivity(w), 30);
  for (std::size_t d = 1; d <= 16; ++d) {
    double best = 0;
    for (std::size_t j = 1; j <= d; ++j) best = std::max(best, double(j * (d - j + 1)));
    EXPECT_EQ(workload_sensitivity(all_range_queries(d)), best) << "d=" << d;
    EXPECT_EQ(all_range_queries(d).m(), d * (d + 1) / 2);
  }
}

TEST(AllSubsetQueriesTest, Enumerates) {
  EXPECT_EQ(all_subset_queries(10).m(), 1023u);
  const auto two = all_subset_queries(2);
  ASSERT_EQ(two.m(), 3u);
  EXPECT_EQ(Vec(two[0].coeffs()), (std::vector<double>{1, 0}));
  EXPECT_EQ(Vec(two[1].coeffs()), (std::vector<double>{0, 1}));
  EXPECT_EQ(Vec(two[2].coeffs()), (std::vector<double>{1, 1}));
  EXPECT_EQ(workload_sensitivity(all_subset_queries(4)), 8);
  EXPECT_THROW(all_subset_queries(21), std::invalid_argument);
}

TEST(RandomRangeWorkloadTest, ContiguousAndDeterministic) {
  const auto w = random_range_workload(128, 1000, 1);
  ASSERT_EQ(w.m(), 1000u);
  for (const auto& q : w) {
    // Scan the row: one run of ones, nothing else.
    std::size_t runs = 0;
    for (std::size_t j = 0; j < q.d(); ++j) {
      ASSERT_TRUE(q[j] == 0.0 || q[j] == 1.0);
      if (q[j] == 1.0 && (j == 0 || q[j - 1] == 0.0)) ++runs;
    }
    EXPECT_EQ(runs, 1u);
  }
  EXPECT_EQ(random_range_workload(128, 1000, 1), w);
  const auto forced = random_range_workload(1, 5, 3);
  for (const auto& q : forced) EXPECT_EQ(Vec(q.coeffs()), std::vector<double>{1});
  EXPECT_THROW(random_range_workload(4, 0, 1), std::invalid_argument);
}

TEST(WorkloadCsvTest, RoundTripsMixedKinds) {
  Workload w(3);
  w.Add(range_query(0, 2, 3));
  w.Add(LinearQuery::Subset({1, 0, 1}));
  w.Add(LinearQuery::General({0.1, -2.5, 1e-17}));
  std::stringstream ss;
  write_workload_csv(w, ss);
  EXPECT_EQ(read_workload_csv(ss), w);
}

TEST(WorkloadCsvTest, RejectsMalformedRows) {
  for (const char* text : {"", "x,4\n", "d,4\nrange,3,1\n", "d,4\nrange,0,9\n",
                           "d,2\nsubset,1\n", "d,2\nsubset,1,2\n", "d,2\nbogus,1,1\n",
                           "d,2\ngeneral,1,abc\n"}) {
    std::stringstream ss(text);
    EXPECT_THROW(read_workload_csv(ss), ParseError) << text;
  }
}

}  // namespace
}  // namespace mldp
