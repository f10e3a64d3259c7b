// Copyright 2026 The deanon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef DEANON_RANDOM_HPP_
#define DEANON_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace deanon {

using Engine = std::mt19937_64;

// Purposes for which independent seed streams are derived. Values are part of
// the reproducibility contract; do not renumber.
enum class StreamPurpose : std::uint64_t {
  kPopulation = 1,
  kLearningTraces = 2,
  kActualTraces = 3,
  kPermutation = 4,
  kTrial = 5,
  kBoundTrial = 6,
  kGridPoint = 7,
};

// splitmix64 finalizer.
constexpr std::uint64_t MixBits(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic seed for (master, purpose, index). For fixed (master, purpose)
// the map index -> seed is a bijection on 64-bit words, so trial streams never
// collide; purposes are separated by a mixed tag.
constexpr std::uint64_t StreamSeed(std::uint64_t master, std::uint64_t purpose,
                                   std::uint64_t index) noexcept {
  return MixBits(MixBits(master ^ MixBits(purpose * 0xd1342543de82ef95ULL)) +
                 index);
}

constexpr std::uint64_t StreamSeed(std::uint64_t master, StreamPurpose purpose,
                                   std::uint64_t index) noexcept {
  return StreamSeed(master, static_cast<std::uint64_t>(purpose), index);
}

inline Engine MakeEngine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  return Engine(seq);
}

}  // namespace deanon

#endif  // DEANON_RANDOM_HPP_
