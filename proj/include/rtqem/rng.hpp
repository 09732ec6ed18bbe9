// Copyright 2026 The rtqem Authors
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

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rtqem {

using Rng = std::mt19937_64;

// Stream labels used by the training driver. Each label owns an independent
// child stream of the master seed, so adding draws to one stream never shifts
// another.
namespace stream {
inline constexpr std::string_view kDataset = "dataset";
inline constexpr std::string_view kInit = "init";
inline constexpr std::string_view kShots = "shots";
inline constexpr std::string_view kClifford = "clifford-sampling";
inline constexpr std::string_view kMitigationShots = "mitigation-shots";
inline constexpr std::string_view kWalk = "walk";
inline constexpr std::string_view kEvaluation = "evaluation";
}  // namespace stream

// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline Rng child_stream(std::uint64_t master_seed, std::string_view label) {
  const std::uint64_t tag = fnv1a(label);
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
  return Rng(seq);
}

}  // namespace rtqem
