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
#ifndef DEANON_HARNESS_HPP_
#define DEANON_HARNESS_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "deanon/attack.hpp"
#include "deanon/bounds.hpp"
#include "deanon/model.hpp"

namespace deanon {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct ExperimentConfig {
  std::vector<Index> n_values;
  Index s = 2;
  double alpha = 1.0;
  double alpha_prime = 1.0;
  double sigma = 0.1;
  double rho = 0.5;
  MeanDistribution mean_dist = MeanDistribution::Uniform(0.0, 1.0);
  std::int64_t trials_per_point = 100;
  std::uint64_t master_seed = 1;
  Adversary mode = Adversary::kLearningData;
  GraphKnowledge graph = GraphKnowledge::kReconstructed;
  AmbiguityPolicy ambiguity = AmbiguityPolicy::kNearest;
  // Scale m and l relative to RequiredLength.
  std::vector<double> length_multipliers = {1.0};
  // Edge threshold; DefaultTau(rho, sigma, n, m) when unset.
  std::optional<double> tau;
  int workers = 1;

  void Validate() const;
};

struct GridPoint {
  Index n = 0;
  double multiplier = 1.0;
  Index m = 1;
  Index l = 1;
};

// m = ceil(multiplier * RequiredLength(n, s, alpha)), l likewise with alpha'.
GridPoint MakeGridPoint(const ExperimentConfig& cfg, Index n, double multiplier);

enum class FailureKind { kNone, kNoMatch, kAmbiguous, kWrong };

struct TrialResult {
  Index n = 0;
  Index s = 0;
  Index m = 0;
  Index l = 0;
  std::uint64_t seed = 0;
  bool graph_exact = false;
  bool group_correct = false;
  bool user1_correct = false;
  // D to the matched group, else the smallest candidate D; NaN without
  // candidates.
  double achieved_distance = 0.0;
  FailureKind failure = FailureKind::kNone;
  std::chrono::nanoseconds wall_time{0};
};

std::uint64_t TrialSeed(const ExperimentConfig& cfg, const GridPoint& point,
                        std::int64_t trial_index);

// One end-to-end sample: population, W, X, anonymization, attack, scoring.
// Determined by (cfg.master_seed, point, trial_index); mode and graph
// knowledge do not enter the seed, so modes can be compared on paired data.
TrialResult RunTrial(const ExperimentConfig& cfg, const GridPoint& point,
                     std::int64_t trial_index);

struct SweepRow {
  Index n = 0;
  Index s = 0;
  Index m = 0;
  Index l = 0;
  double multiplier = 1.0;
  Adversary mode = Adversary::kLearningData;
  GraphKnowledge graph = GraphKnowledge::kReconstructed;
  std::int64_t trials = 0;
  double graph_exact_rate = 0.0;
  double group_correct_rate = 0.0;
  double user1_correct_rate = 0.0;
  double stderr_user1 = 0.0;
  double mean_distance = 0.0;
  std::int64_t failures_nomatch = 0;
  std::int64_t failures_ambiguous = 0;
  std::int64_t failures_wrong = 0;

  bool operator==(const SweepRow&) const = default;
};

// Trials are reduced in index order.
SweepRow AggregateTrials(const ExperimentConfig& cfg, const GridPoint& point,
                         std::span<const TrialResult> trials);

// Rows are sorted by (n, multiplier). When `trials` is non-null it receives
// every TrialResult in row order.
std::vector<SweepRow> RunSweep(const ExperimentConfig& cfg,
                               std::vector<TrialResult>* trials = nullptr);

// ValidateBound over every registered bound at its default scenario.
std::vector<BoundReport> RunBoundSuite(std::int64_t trials,
                                       std::uint64_t master_seed, int workers);

}  // namespace deanon

#endif  // DEANON_HARNESS_HPP_
