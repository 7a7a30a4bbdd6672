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

#ifndef MLDP_BUDGET_HPP_
#define MLDP_BUDGET_HPP_

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mldp/errors.hpp"

namespace mldp {

// Passing this as epsilon zeroes every noise scale. Test-only; the CLI
// rejects non-finite budgets.
inline constexpr double kNoiseFree = std::numeric_limits<double>::infinity();

namespace internal {

// Correctly rounded sum of `terms` (Shewchuk's exact partials).
inline double ExactSum(const std::vector<double>& terms) {
  std::vector<double> partials;
  for (double x : terms) {
    std::size_t i = 0;
    for (double y : partials) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials[i++] = lo;
      x = hi;
    }
    partials.resize(i);
    partials.push_back(x);
  }
  // Round-half-even correction over the top partials.
  if (partials.empty()) return 0.0;
  std::size_t n = partials.size();
  double hi = partials[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials[--n];
    hi = x + y;
    const double yr = hi - x;
    lo = y - yr;
    if (lo != 0.0) break;
  }
  if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) ||
                (lo > 0.0 && partials[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

}  // namespace internal

// Sequential-composition ledger. Single writer: callers serialize charges.
class PrivacyBudget {
 public:
  struct Charge {
    std::string label;
    double epsilon;
  };

  explicit PrivacyBudget(double epsilon_total) : total_(epsilon_total) {
    if (!(epsilon_total > 0.0)) {
      throw std::invalid_argument("privacy budget must be positive");
    }
  }

  double total() const { return total_; }
  double consumed() const {
    std::vector<double> eps;
    eps.reserve(ledger_.size());
    for (const auto& c : ledger_) {
      if (std::isinf(c.epsilon)) return kNoiseFree;
      eps.push_back(c.epsilon);
    }
    return internal::ExactSum(eps);
  }
  double remaining() const { return std::isinf(total_) ? total_ : total_ - consumed(); }
  const std::vector<Charge>& ledger() const { return ledger_; }

  bool CanCharge(double epsilon) const {
    if (!(epsilon > 0.0)) return false;
    if (std::isinf(total_)) return true;
    if (std::isinf(epsilon)) return false;
    std::vector<double> eps;
    for (const auto& c : ledger_) eps.push_back(c.epsilon);
    eps.push_back(epsilon);
    return internal::ExactSum(eps) <= total_;
  }

  void Spend(std::string label, double epsilon) {
    if (!(epsilon > 0.0)) {
      throw std::invalid_argument("privacy charge must be strictly positive");
    }
    if (!CanCharge(epsilon)) {
      throw BudgetExceededError("charge '" + label + "' of " + std::to_string(epsilon) +
                                " exceeds remaining budget " +
                                std::to_string(remaining()));
    }
    ledger_.push_back({std::move(label), epsilon});
  }

  void Require(double epsilon) const {
    if (!CanCharge(epsilon)) {
      throw BudgetExceededError("insufficient privacy budget: need " +
                                std::to_string(epsilon) + ", have " +
                                std::to_string(remaining()));
    }
  }

 private:
  double total_;
  std::vector<Charge> ledger_;
};

}  // namespace mldp

#endif  // MLDP_BUDGET_HPP_
