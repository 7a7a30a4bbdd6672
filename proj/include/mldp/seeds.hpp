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

#ifndef MLDP_SEEDS_HPP_
#define MLDP_SEEDS_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace mldp {

using Rng = std::mt19937_64;

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t Fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Child seed for one (stream name, grid index, trial index) job.
inline std::uint64_t DeriveSeed(std::uint64_t base_seed, std::string_view stream,
                                std::uint64_t grid_index, std::uint64_t trial_index) {
  std::uint64_t s = SplitMix64(base_seed + trial_index);
  s = SplitMix64(s ^ Fnv1a64(stream));
  return SplitMix64(s ^ grid_index);
}

inline constexpr std::string_view kSeedRule =
    "child = splitmix64(splitmix64(splitmix64(base_seed + trial) ^ fnv1a64(stream)) ^ "
    "grid_index); trial seed = base_seed + trial";

}  // namespace mldp

#endif  // MLDP_SEEDS_HPP_
