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
#ifndef DEANON_BOUNDS_HPP_
#define DEANON_BOUNDS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "deanon/model.hpp"

namespace deanon {

// P(|mean(X_u) - mean(W_u)| >= delta) <= exp(-m d^2 / 8s^2) + exp(-l d^2 / 8s^2).
double PairMismatchBound(Index m, Index l, double delta, double sigma);
// Looser form 2 exp(-n^(a/2) / 8 sigma^2), valid at m, l >= n^(2/s + a).
double PairMismatchBoundAsymptotic(Index n, double alpha_pp, double sigma);

// Probability that another group's true mean vector lies within 4 Delta_n of
// the target group's under some reordering: (s-1)! 8^s n^(-s a/4) delta.
double GroupMeanCollisionBound(Index n, Index s, double alpha_pp,
                               double delta_bound);

// s exp(-l d^2 / 2 sigma^2): some learning average of the group is d away from
// its true mean.
double LearningConcentrationBound(Index l, double delta, double sigma, Index s);
double LearningConcentrationBoundAsymptotic(Index n, double alpha_pp,
                                            double sigma, Index s);

// 8 s n^(-1 - a/4) delta: some other user's mean within 4 Delta_n of user 1's.
double MeanProximityBound(Index n, Index s, double alpha_pp, double delta_bound);

// coefficient * n^(exponent_constant + exponent_alpha * a) * delta.
struct PowerLawFormula {
  double coefficient = 0.0;
  double exponent_constant = 0.0;
  double exponent_alpha = 0.0;

  double Evaluate(Index n, double alpha_pp, double delta_bound) const;
  std::string ToString() const;
};

PowerLawFormula GroupMeanCollisionFormula(Index s);
PowerLawFormula MeanProximityFormula(Index s);

inline constexpr std::string_view kPairMismatch = "pair_mismatch";
inline constexpr std::string_view kGroupMeanCollision = "group_mean_collision";
inline constexpr std::string_view kLearningConcentration =
    "learning_concentration";
inline constexpr std::string_view kMeanProximity = "mean_proximity";

std::span<const std::string_view> RegisteredBounds();

struct BoundScenario {
  Index n = 16;
  Index s = 2;
  double alpha_pp = 1.0;
  double sigma = 0.1;
  double rho = 0.5;
  Index m = 8;
  Index l = 8;
  // Overrides Delta_n(n, s, alpha_pp) when set.
  std::optional<double> threshold;
  MeanDistribution mean_dist = MeanDistribution::Uniform(0.0, 1.0);

  double Delta() const;
};

BoundScenario DefaultBoundScenario(std::string_view bound_name);

double AnalyticBound(std::string_view bound_name, const BoundScenario& scenario);

struct BoundReport {
  std::string name;
  double analytic = 0.0;
  double empirical = 0.0;
  double standard_error = 0.0;
  std::int64_t trials = 0;
  bool satisfied = false;
  // analytic >= 1: the bound says nothing.
  bool vacuous = false;
};

// Monte Carlo frequency of the event the named bound dominates.
// satisfied = empirical <= min(analytic, 1) + 3 standard errors.
BoundReport ValidateBound(std::string_view bound_name,
                          const BoundScenario& scenario, std::int64_t trials,
                          std::uint64_t master_seed, int workers = 1);

}  // namespace deanon

#endif  // DEANON_BOUNDS_HPP_
