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
#include "deanon/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "deanon/error.hpp"
#include "deanon/parallel.hpp"
#include "deanon/random.hpp"

namespace deanon {

void ExperimentConfig::Validate() const {
  if (s < 1) throw Error(ErrorCode::kInvalidConfig, "s must be at least 1");
  for (Index n : n_values) {
    if (n < 1 || n % s != 0) {
      throw Error(ErrorCode::kInvalidConfig,
                  "every n must be a positive multiple of s");
    }
  }
  if (!(alpha > 0.0) || !(alpha_prime > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "alpha and alpha' must be positive");
  }
  if (!(sigma > 0.0)) throw Error(ErrorCode::kInvalidConfig, "sigma must be positive");
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "rho must lie in [0, 1)");
  }
  if (trials_per_point < 1) {
    throw Error(ErrorCode::kInvalidConfig, "trials per point must be >= 1");
  }
  for (double mult : length_multipliers) {
    if (!(mult > 0.0) || !std::isfinite(mult)) {
      throw Error(ErrorCode::kInvalidConfig, "multipliers must be positive");
    }
  }
  if (tau && !(*tau > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "tau must be positive");
  }
  if (workers < 1) throw Error(ErrorCode::kInvalidConfig, "workers must be >= 1");
}

GridPoint MakeGridPoint(const ExperimentConfig& cfg, Index n, double multiplier) {
  auto scaled = [multiplier](Index base) {
    return std::max<Index>(
        1, static_cast<Index>(std::ceil(multiplier * static_cast<double>(base))));
  };
  return {n, multiplier, scaled(RequiredLength(n, cfg.s, cfg.alpha)),
          scaled(RequiredLength(n, cfg.s, cfg.alpha_prime))};
}

std::uint64_t TrialSeed(const ExperimentConfig& cfg, const GridPoint& point,
                        std::int64_t trial_index) {
  std::uint64_t seed = cfg.master_seed;
  for (Index key : {point.n, cfg.s, point.m, point.l}) {
    seed = StreamSeed(seed, StreamPurpose::kGridPoint, static_cast<std::uint64_t>(key));
  }
  return StreamSeed(seed, StreamPurpose::kTrial,
                    static_cast<std::uint64_t>(trial_index));
}

TrialResult RunTrial(const ExperimentConfig& cfg, const GridPoint& point,
                     std::int64_t trial_index) {
  const auto start = std::chrono::steady_clock::now();
  TrialResult out;
  out.n = point.n;
  out.s = cfg.s;
  out.m = point.m;
  out.l = point.l;
  out.seed = TrialSeed(cfg, point, trial_index);

  const UserPopulation pop = SamplePopulation(
      point.n, cfg.s, cfg.mean_dist, cfg.sigma, cfg.rho,
      StreamSeed(out.seed, StreamPurpose::kPopulation, 0));
  const TraceMatrix learning = GenerateTraces(
      pop, point.l, TraceRole::kLearning,
      StreamSeed(out.seed, StreamPurpose::kLearningTraces, 0));
  const TraceMatrix actual = GenerateTraces(
      pop, point.m, TraceRole::kActual,
      StreamSeed(out.seed, StreamPurpose::kActualTraces, 0));
  const Anonymized anon =
      Anonymize(actual, StreamSeed(out.seed, StreamPurpose::kPermutation, 0));

  AttackConfig attack;
  attack.alpha = cfg.alpha;
  attack.alpha_prime = cfg.alpha_prime;
  attack.s = cfg.s;
  attack.sigma = cfg.sigma;
  attack.cov_threshold =
      cfg.tau.value_or(DefaultTau(cfg.rho, cfg.sigma, point.n, point.m));
  attack.mode = cfg.mode;
  attack.graph = cfg.graph;
  attack.ambiguity = cfg.ambiguity;
  attack.target_user = 0;

  const ReconstructedGraph known = RelabelGraph(
      GraphFromPartition(pop.partition, pop.n()), anon.permutation);
  AttackResult result = RunAttack(learning, anon.observed, &pop, attack, &known);
  ScoreAttack(result, pop, anon.permutation, attack.target_user);

  out.graph_exact = result.stage_success.graph_exact;
  out.group_correct = result.stage_success.group_correct;
  out.user1_correct = result.stage_success.individual_correct;

  const GroupMatch& gm = result.group_match;
  if (gm.status == MatchStatus::kMatched) {
    out.achieved_distance = gm.assignment.distance;
  } else if (!gm.distances.empty()) {
    out.achieved_distance =
        *std::min_element(gm.distances.begin(), gm.distances.end());
  } else {
    out.achieved_distance = std::numeric_limits<double>::quiet_NaN();
  }

  if (out.user1_correct) {
    out.failure = FailureKind::kNone;
  } else if (gm.status == MatchStatus::kAmbiguous) {
    out.failure = FailureKind::kAmbiguous;
  } else if (gm.status == MatchStatus::kNoMatch ||
             !result.estimated_perm.contains(attack.target_user)) {
    out.failure = FailureKind::kNoMatch;
  } else {
    out.failure = FailureKind::kWrong;
  }
  out.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - start);
  return out;
}

SweepRow AggregateTrials(const ExperimentConfig& cfg, const GridPoint& point,
                         std::span<const TrialResult> trials) {
  SweepRow row;
  row.n = point.n;
  row.s = cfg.s;
  row.m = point.m;
  row.l = point.l;
  row.multiplier = point.multiplier;
  row.mode = cfg.mode;
  row.graph = cfg.graph;
  row.trials = static_cast<std::int64_t>(trials.size());
  std::int64_t graph_ok = 0, group_ok = 0, user_ok = 0, finite = 0;
  double distance_sum = 0.0;
  for (const TrialResult& t : trials) {
    graph_ok += t.graph_exact;
    group_ok += t.group_correct;
    user_ok += t.user1_correct;
    if (std::isfinite(t.achieved_distance)) {
      distance_sum += t.achieved_distance;
      ++finite;
    }
    switch (t.failure) {
      case FailureKind::kNone:
        break;
      case FailureKind::kNoMatch:
        ++row.failures_nomatch;
        break;
      case FailureKind::kAmbiguous:
        ++row.failures_ambiguous;
        break;
      case FailureKind::kWrong:
        ++row.failures_wrong;
        break;
    }
  }
  if (row.trials == 0) return row;
  const auto total = static_cast<double>(row.trials);
  row.graph_exact_rate = static_cast<double>(graph_ok) / total;
  row.group_correct_rate = static_cast<double>(group_ok) / total;
  row.user1_correct_rate = static_cast<double>(user_ok) / total;
  const double p = row.user1_correct_rate;
  row.stderr_user1 = std::sqrt(p * (1.0 - p) / total);
  row.mean_distance = finite > 0 ? distance_sum / static_cast<double>(finite)
                                 : std::numeric_limits<double>::quiet_NaN();
  return row;
}

std::vector<SweepRow> RunSweep(const ExperimentConfig& cfg,
                               std::vector<TrialResult>* trials) {
  cfg.Validate();
  std::vector<GridPoint> points;
  for (Index n : cfg.n_values) {
    for (double mult : cfg.length_multipliers) {
      points.push_back(MakeGridPoint(cfg, n, mult));
    }
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const GridPoint& a, const GridPoint& b) {
                     return a.n != b.n ? a.n < b.n : a.multiplier < b.multiplier;
                   });

  const auto per_point = static_cast<std::size_t>(cfg.trials_per_point);
  std::vector<TrialResult> results(points.size() * per_point);
  ParallelFor(results.size(), cfg.workers, [&](std::size_t job) {
    results[job] = RunTrial(cfg, points[job / per_point],
                            static_cast<std::int64_t>(job % per_point));
  });

  std::vector<SweepRow> rows;
  rows.reserve(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    rows.push_back(AggregateTrials(
        cfg, points[p],
        std::span<const TrialResult>(results).subspan(p * per_point, per_point)));
  }
  if (trials != nullptr) *trials = std::move(results);
  return rows;
}

std::vector<BoundReport> RunBoundSuite(std::int64_t trials,
                                       std::uint64_t master_seed, int workers) {
  std::vector<BoundReport> reports;
  for (std::string_view name : RegisteredBounds()) {
    reports.push_back(ValidateBound(name, DefaultBoundScenario(name), trials,
                                    master_seed, workers));
  }
  return reports;
}

}  // namespace deanon
