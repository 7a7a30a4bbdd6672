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

#ifndef MLDP_HISTOGRAM_HPP_
#define MLDP_HISTOGRAM_HPP_

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mldp/errors.hpp"

namespace mldp {

// The private dataset: one non-negative count per bin. Immutable after
// construction; `total()` is the record count.
class Histogram {
 public:
  explicit Histogram(std::vector<double> bins,
                     std::vector<std::string> labels = {})
      : bins_(std::move(bins)), labels_(std::move(labels)) {
    if (bins_.empty()) {
      throw std::invalid_argument("histogram must have at least one bin");
    }
    if (!labels_.empty() && labels_.size() != bins_.size()) {
      throw std::invalid_argument("label count does not match bin count");
    }
    for (std::size_t i = 0; i < bins_.size(); ++i) {
      if (!(bins_[i] >= 0.0) || !std::isfinite(bins_[i])) {
        throw std::invalid_argument("bin " + std::to_string(i) +
                                    " is negative or not finite");
      }
    }
    total_ = std::accumulate(bins_.begin(), bins_.end(), 0.0);
  }

  std::size_t d() const { return bins_.size(); }
  double total() const { return total_; }
  std::span<const double> bins() const { return bins_; }
  double operator[](std::size_t i) const { return bins_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  bool has_labels() const { return !labels_.empty(); }

  friend bool operator==(const Histogram&, const Histogram&) = default;

 private:
  std::vector<double> bins_;
  std::vector<std::string> labels_;
  double total_ = 0.0;
};

namespace internal {

inline std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> SplitCsv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(Trim(line.substr(start)));
      return out;
    }
    out.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

inline bool ParseDouble(std::string_view s, double& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace internal

// Reads a two-column `label,count` CSV with a header line. Counts must be
// non-negative integers. Errors name the 1-based data row.
inline Histogram load_histogram_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open histogram file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty histogram file: " + path);
  auto header = internal::SplitCsv(line);
  if (header.size() != 2 || header[0] != "label" || header[1] != "count") {
    throw ParseError("histogram header must be `label,count`");
  }

  std::vector<double> bins;
  std::vector<std::string> labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (internal::Trim(line).empty()) continue;
    ++row;
    auto cells = internal::SplitCsv(line);
    if (cells.size() != 2) {
      throw ParseError("row " + std::to_string(row) + ": expected 2 columns");
    }
    std::int64_t count = 0;
    auto [ptr, ec] = std::from_chars(cells[1].data(),
                                     cells[1].data() + cells[1].size(), count);
    if (ec != std::errc() || ptr != cells[1].data() + cells[1].size() ||
        cells[1].empty()) {
      throw ParseError("row " + std::to_string(row) +
                       ": count is not an integer: '" + std::string(cells[1]) + "'");
    }
    if (count < 0) {
      throw ParseError("row " + std::to_string(row) + ": negative count " +
                       std::to_string(count));
    }
    labels.emplace_back(cells[0]);
    bins.push_back(static_cast<double>(count));
  }
  if (bins.empty()) throw ParseError("histogram file has no data rows: " + path);
  return Histogram(std::move(bins), std::move(labels));
}

// Inverse of load_histogram_csv. Unlabelled histograms get `bin<i>` labels.
inline void write_histogram_csv(const Histogram& h, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write histogram file: " + path);
  out << "label,count\n";
  char buf[64];
  for (std::size_t i = 0; i < h.d(); ++i) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), h[i]);
    out << (h.has_labels() ? h.labels()[i] : "bin" + std::to_string(i)) << ','
        << std::string_view(buf, ptr - buf) << '\n';
  }
  if (!out) throw IoError("failed writing histogram file: " + path);
}

// Bins drawn i.i.d. uniform on {0..max_count}.
inline Histogram generate_simulated_histogram(std::size_t d,
                                              std::uint64_t max_count,
                                              std::uint64_t seed) {
  if (d == 0) throw std::invalid_argument("bin count must be >= 1");
  if (max_count == 0) throw std::invalid_argument("max_count must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> draw(0, max_count);
  std::vector<double> bins(d);
  for (auto& b : bins) b = static_cast<double>(draw(rng));
  return Histogram(std::move(bins));
}

// Adds or removes one record in `bin`.
inline Histogram neighbor(const Histogram& h, std::size_t bin, int delta) {
  if (delta != 1 && delta != -1) {
    throw std::invalid_argument("neighbor delta must be +1 or -1");
  }
  if (bin >= h.d()) {
    throw std::out_of_range("bin " + std::to_string(bin) + " out of range for d=" +
                            std::to_string(h.d()));
  }
  if (delta == -1 && h[bin] < 1.0) {
    throw std::invalid_argument("cannot remove a record from empty bin " +
                                std::to_string(bin));
  }
  std::vector<double> bins(h.bins().begin(), h.bins().end());
  bins[bin] += delta;
  return Histogram(std::move(bins), h.labels());
}

}  // namespace mldp

#endif  // MLDP_HISTOGRAM_HPP_
