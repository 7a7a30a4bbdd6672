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

#ifndef MLDP_WORKLOAD_HPP_
#define MLDP_WORKLOAD_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mldp/errors.hpp"
#include "mldp/histogram.hpp"

namespace mldp {

enum class QueryKind { kRange, kSubset, kGeneral };

// A linear counting query: answer = coeffs . bins.
class LinearQuery {
 public:
  static LinearQuery Range(std::size_t lo, std::size_t hi, std::size_t d) {
    if (lo > hi) {
      throw std::invalid_argument("range query has lo > hi (" + std::to_string(lo) +
                                  " > " + std::to_string(hi) + ")");
    }
    if (hi >= d) {
      throw std::out_of_range("range query hi=" + std::to_string(hi) +
                              " out of range for d=" + std::to_string(d));
    }
    std::vector<double> c(d, 0.0);
    std::fill(c.begin() + lo, c.begin() + hi + 1, 1.0);
    return LinearQuery(QueryKind::kRange, std::move(c), lo, hi);
  }

  // 0/1 coefficients. A contiguous mask is still tagged as a subset query.
  static LinearQuery Subset(std::vector<double> mask) {
    if (mask.empty()) throw std::invalid_argument("query must have d >= 1");
    for (double c : mask) {
      if (c != 0.0 && c != 1.0) {
        throw std::invalid_argument("subset query coefficients must be 0 or 1");
      }
    }
    return LinearQuery(QueryKind::kSubset, std::move(mask), 0, 0);
  }

  static LinearQuery General(std::vector<double> coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("query must have d >= 1");
    for (double c : coeffs) {
      if (!std::isfinite(c)) throw std::invalid_argument("non-finite coefficient");
    }
    return LinearQuery(QueryKind::kGeneral, std::move(coeffs), 0, 0);
  }

  QueryKind kind() const { return kind_; }
  std::size_t d() const { return coeffs_.size(); }
  std::span<const double> coeffs() const { return coeffs_; }
  double operator[](std::size_t j) const { return coeffs_[j]; }
  // Valid only for kind() == kRange.
  std::size_t lo() const { return lo_; }
  std::size_t hi() const { return hi_; }

  friend bool operator==(const LinearQuery&, const LinearQuery&) = default;

 private:
  LinearQuery(QueryKind kind, std::vector<double> coeffs, std::size_t lo,
              std::size_t hi)
      : kind_(kind), coeffs_(std::move(coeffs)), lo_(lo), hi_(hi) {}

  QueryKind kind_;
  std::vector<double> coeffs_;
  std::size_t lo_;
  std::size_t hi_;
};

// Ordered list of queries over a common bin count.
class Workload {
 public:
  explicit Workload(std::size_t d) : d_(d) {
    if (d == 0) throw std::invalid_argument("workload must have d >= 1");
  }
  Workload(std::size_t d, std::vector<LinearQuery> queries) : Workload(d) {
    queries_.reserve(queries.size());
    for (auto& q : queries) Add(std::move(q));
  }

  void Add(LinearQuery q) {
    if (q.d() != d_) {
      throw std::invalid_argument("query has d=" + std::to_string(q.d()) +
                                  " but workload has d=" + std::to_string(d_));
    }
    queries_.push_back(std::move(q));
  }

  std::size_t d() const { return d_; }
  std::size_t m() const { return queries_.size(); }
  bool empty() const { return queries_.empty(); }
  const LinearQuery& operator[](std::size_t i) const { return queries_[i]; }
  const std::vector<LinearQuery>& queries() const { return queries_; }
  auto begin() const { return queries_.begin(); }
  auto end() const { return queries_.end(); }

  friend bool operator==(const Workload&, const Workload&) = default;

 private:
  std::size_t d_;
  std::vector<LinearQuery> queries_;
};

// Workload concatenation, order-preserving.
inline Workload concat(const Workload& a, const Workload& b) {
  if (a.d() != b.d()) throw std::invalid_argument("cannot concatenate: d differs");
  Workload out(a.d(), a.queries());
  for (const auto& q : b) out.Add(q);
  return out;
}

inline LinearQuery range_query(std::size_t lo, std::size_t hi, std::size_t d) {
  return LinearQuery::Range(lo, hi, d);
}

inline double evaluate(const LinearQuery& f, std::span<const double> bins) {
  if (f.d() != bins.size()) {
    throw std::invalid_argument("query/histogram dimension mismatch (" +
                                std::to_string(f.d()) + " vs " +
                                std::to_string(bins.size()) + ")");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < bins.size(); ++j) s += f[j] * bins[j];
  return s;
}

inline double evaluate(const LinearQuery& f, const Histogram& h) {
  return evaluate(f, h.bins());
}

inline std::vector<double> evaluate_workload(const Workload& w,
                                             std::span<const double> bins) {
  if (w.d() != bins.size()) {
    throw std::invalid_argument("workload/histogram dimension mismatch");
  }
  std::vector<double> out;
  out.reserve(w.m());
  for (const auto& q : w) out.push_back(evaluate(q, bins));
  return out;
}

inline std::vector<double> evaluate_workload(const Workload& w, const Histogram& h) {
  return evaluate_workload(w, h.bins());
}

// L1 sensitivity under add/remove-one-record: the largest absolute column
// sum of the query matrix.
inline double workload_sensitivity(const Workload& w) {
  double best = 0.0;
  for (std::size_t j = 0; j < w.d(); ++j) {
    double col = 0.0;
    for (const auto& q : w) col += std::abs(q[j]);
    best = std::max(best, col);
  }
  return best;
}

// Enumerates every +-1 neighbour of `h` and measures the summed absolute
// change in answers directly. Used as an oracle for workload_sensitivity.
inline double brute_force_sensitivity(const Workload& w, const Histogram& h) {
  if (w.d() != h.d()) throw std::invalid_argument("workload/histogram dimension mismatch");
  const auto base = evaluate_workload(w, h);
  double best = 0.0;
  for (std::size_t j = 0; j < h.d(); ++j) {
    for (int delta : {+1, -1}) {
      if (delta == -1 && h[j] < 1.0) continue;
      const auto moved = evaluate_workload(w, neighbor(h, j, delta));
      double change = 0.0;
      for (std::size_t i = 0; i < base.size(); ++i) change += std::abs(moved[i] - base[i]);
      best = std::max(best, change);
    }
  }
  return best;
}

// All d(d+1)/2 contiguous ranges, longest first, then by lo.
inline Workload all_range_queries(std::size_t d) {
  Workload w(d);
  for (std::size_t len = d; len >= 1; --len) {
    for (std::size_t lo = 0; lo + len <= d; ++lo) w.Add(LinearQuery::Range(lo, lo + len - 1, d));
  }
  return w;
}

// All 2^d - 1 non-empty subset-sum queries, ordered by bitmask value with
// bin j at bit j.
inline Workload all_subset_queries(std::size_t d) {
  if (d == 0) throw std::invalid_argument("workload must have d >= 1");
  if (d > 20) throw std::invalid_argument("all_subset_queries limited to d <= 20");
  Workload w(d);
  const std::uint32_t count = (std::uint32_t{1} << d);
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    std::vector<double> c(d);
    for (std::size_t j = 0; j < d; ++j) c[j] = (mask >> j) & 1u ? 1.0 : 0.0;
    w.Add(LinearQuery::Subset(std::move(c)));
  }
  return w;
}

// The d singleton-bin queries, as range queries [j, j].
inline Workload singleton_queries(std::size_t d) {
  Workload w(d);
  for (std::size_t j = 0; j < d; ++j) w.Add(LinearQuery::Range(j, j, d));
  return w;
}

// m ranges; each draws two uniform endpoints in [0, d) and orders them.
// Duplicates are allowed.
inline Workload random_range_workload(std::size_t d, std::size_t m, std::uint64_t seed) {
  if (d == 0) throw std::invalid_argument("workload must have d >= 1");
  if (m == 0) throw std::invalid_argument("random workload needs m >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, d - 1);
  Workload w(d);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t a = pick(rng);
    std::size_t b = pick(rng);
    if (a > b) std::swap(a, b);
    w.Add(LinearQuery::Range(a, b, d));
  }
  return w;
}

// ---------------------------------------------------------------------------
// Workload CSV.
//
//   d,<bins>
//   range,<lo>,<hi>
//   subset,<c0>,...,<c(d-1)>
//   general,<c0>,...,<c(d-1)>

inline void write_workload_csv(const Workload& w, std::ostream& out) {
  out << "d," << w.d() << '\n';
  char buf[64];
  for (const auto& q : w) {
    switch (q.kind()) {
      case QueryKind::kRange:
        out << "range," << q.lo() << ',' << q.hi() << '\n';
        continue;
      case QueryKind::kSubset:
        out << "subset";
        break;
      case QueryKind::kGeneral:
        out << "general";
        break;
    }
    for (double c : q.coeffs()) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), c);
      out << ',' << std::string_view(buf, ptr - buf);
    }
    out << '\n';
  }
}

inline void write_workload_csv(const Workload& w, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write workload file: " + path);
  write_workload_csv(w, out);
}

inline Workload read_workload_csv(std::istream& in) {
  using internal::ParseDouble;
  std::string line;
  std::size_t row = 0;
  auto fail = [&](const std::string& msg) {
    throw ParseError("workload row " + std::to_string(row) + ": " + msg);
  };
  auto parse_index = [&](std::string_view s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      fail("bad index '" + std::string(s) + "'");
    }
    return v;
  };

  if (!std::getline(in, line)) throw ParseError("empty workload file");
  ++row;
  auto head = internal::SplitCsv(line);
  if (head.size() != 2 || head[0] != "d") fail("first row must be `d,<bins>`");
  const std::size_t d = parse_index(head[1]);
  if (d == 0) fail("d must be >= 1");

  Workload w(d);
  while (std::getline(in, line)) {
    ++row;
    if (internal::Trim(line).empty()) continue;
    auto cells = internal::SplitCsv(line);
    try {
      if (cells[0] == "range") {
        if (cells.size() != 3) fail("range row needs lo,hi");
        w.Add(LinearQuery::Range(parse_index(cells[1]), parse_index(cells[2]), d));
        continue;
      }
      if (cells[0] != "subset" && cells[0] != "general") {
        fail("unknown query kind '" + std::string(cells[0]) + "'");
      }
      if (cells.size() != d + 1) fail("expected " + std::to_string(d) + " coefficients");
      std::vector<double> c(d);
      for (std::size_t j = 0; j < d; ++j) {
        if (!ParseDouble(cells[j + 1], c[j])) fail("bad coefficient");
      }
      w.Add(cells[0] == "subset" ? LinearQuery::Subset(std::move(c))
                                 : LinearQuery::General(std::move(c)));
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    } catch (const std::out_of_range& e) {
      fail(e.what());
    }
  }
  return w;
}

inline Workload read_workload_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open workload file: " + path);
  return read_workload_csv(in);
}

}  // namespace mldp

#endif  // MLDP_WORKLOAD_HPP_
