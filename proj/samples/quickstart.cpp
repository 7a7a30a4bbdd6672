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

// Publishes a model for the grade histogram and answers every range query
// from it, next to the direct Laplace release of the same workload.

#include <cstdio>

#include "mldp/mldp.hpp"

int main() {
  const mldp::Histogram grades({12, 24, 6, 7}, {"90-100", "80-89", "70-79", "60-69"});
  const mldp::Workload ranges = mldp::all_range_queries(grades.d());
  const double epsilon = 1.0;

  mldp::MldpConfig cfg;
  cfg.selection = mldp::Selection::kGreedyCover;
  cfg.epsilon = epsilon;
  cfg.seed = 42;

  mldp::PrivacyBudget budget(epsilon);
  const auto model = mldp::mldp_publish(grades, cfg, budget);
  const auto predicted = mldp::mldp_answer(model, ranges);

  mldp::PrivacyBudget direct_budget(epsilon);
  const auto direct = mldp::laplace_batch(ranges, grades, direct_budget, epsilon, 42);
  const auto truth = mldp::evaluate_workload(ranges, grades);

  std::printf("training sensitivity %.0f, workload sensitivity %.0f\n", model.meta.sensitivity,
              mldp::workload_sensitivity(ranges));
  std::printf("%-8s %8s %10s %10s\n", "range", "true", "model", "laplace");
  for (std::size_t i = 0; i < ranges.m(); ++i) {
    std::printf("[%zu,%zu]    %8.0f %10.2f %10.2f\n", ranges[i].lo(), ranges[i].hi(), truth[i],
                predicted[i], direct.answers[i]);
  }
  std::printf("MAE model %.3f, laplace %.3f\n", mldp::mae(predicted, truth),
              mldp::mae(direct.answers, truth));
  return 0;
}
