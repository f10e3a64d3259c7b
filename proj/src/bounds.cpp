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
#include "deanon/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "deanon/attack.hpp"
#include "deanon/error.hpp"
#include "deanon/matching.hpp"
#include "deanon/parallel.hpp"
#include "deanon/random.hpp"

namespace deanon {
namespace {

constexpr std::array<std::string_view, 4> kRegistry = {
    kPairMismatch, kGroupMeanCollision, kLearningConcentration, kMeanProximity};

constexpr Index kMaxFactorialArgument = 20;

void RequirePositive(double value, const char* what) {
  if (!(value > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, std::string(what) + " must be positive");
  }
}

void RequireAtLeastOne(Index value, const char* what) {
  if (value < 1) {
    throw Error(ErrorCode::kInvalidConfig, std::string(what) + " must be >= 1");
  }
}

double Factorial(Index k) {
  double out = 1.0;
  for (Index i = 2; i <= k; ++i) out *= static_cast<double>(i);
  return out;
}

std::size_t BoundIndex(std::string_view name) {
  const auto it = std::find(kRegistry.begin(), kRegistry.end(), name);
  if (it == kRegistry.end()) {
    throw Error(ErrorCode::kUnknownBound, std::string(name));
  }
  return static_cast<std::size_t>(it - kRegistry.begin());
}

// |mean(X_1) - mean(W_1)| >= delta for the first user of one group.
bool PairMismatchEvent(const BoundScenario& sc, std::uint64_t seed) {
  const UserPopulation pop = SamplePopulation(
      sc.s, sc.s, sc.mean_dist, sc.sigma, sc.rho,
      StreamSeed(seed, StreamPurpose::kPopulation, 0));
  const TraceMatrix w = GenerateTraces(
      pop, sc.l, TraceRole::kLearning,
      StreamSeed(seed, StreamPurpose::kLearningTraces, 0));
  const TraceMatrix x = GenerateTraces(
      pop, sc.m, TraceRole::kActual,
      StreamSeed(seed, StreamPurpose::kActualTraces, 0));
  const Index first[] = {0};
  const double gap = EmpiricalMeanVector(x, first).values(0) -
                     EmpiricalMeanVector(w, first).values(0);
  return std::abs(gap) >= sc.Delta();
}

// Some learning average in one group is delta or more from its true mean.
bool LearningConcentrationEvent(const BoundScenario& sc, std::uint64_t seed) {
  const UserPopulation pop = SamplePopulation(
      sc.s, sc.s, sc.mean_dist, sc.sigma, sc.rho,
      StreamSeed(seed, StreamPurpose::kPopulation, 0));
  const TraceMatrix w = GenerateTraces(
      pop, sc.l, TraceRole::kLearning,
      StreamSeed(seed, StreamPurpose::kLearningTraces, 0));
  const MeanVector averages = EmpiricalMeanVector(w, pop.partition.front());
  return ((averages.values - pop.means).cwiseAbs().array() >= sc.Delta()).any();
}

// D(P^(1), P^(g)) <= 4 Delta_n for some other group g.
bool GroupMeanCollisionEvent(const BoundScenario& sc, std::uint64_t seed) {
  Engine engine = MakeEngine(StreamSeed(seed, StreamPurpose::kPopulation, 0));
  const Index groups = sc.n / sc.s;
  Eigen::VectorXd means(groups * sc.s);
  for (Index u = 0; u < means.size(); ++u) means(u) = sc.mean_dist.Sample(engine);
  const double radius = 4.0 * sc.Delta();
  const auto target = means.head(sc.s);
  for (Index g = 1; g < groups; ++g) {
    if (PermInfDistance(target, means.segment(g * sc.s, sc.s)).distance <= radius) {
      return true;
    }
  }
  return false;
}

// |mu_u - mu_1| <= 4 Delta_n for one of s further users.
bool MeanProximityEvent(const BoundScenario& sc, std::uint64_t seed) {
  Engine engine = MakeEngine(StreamSeed(seed, StreamPurpose::kPopulation, 0));
  const double first = sc.mean_dist.Sample(engine);
  const double radius = 4.0 * sc.Delta();
  bool hit = false;
  for (Index u = 0; u < sc.s; ++u) {
    hit |= std::abs(sc.mean_dist.Sample(engine) - first) <= radius;
  }
  return hit;
}

}  // namespace

double PairMismatchBound(Index m, Index l, double delta, double sigma) {
  RequireAtLeastOne(m, "m");
  RequireAtLeastOne(l, "l");
  RequirePositive(delta, "delta");
  RequirePositive(sigma, "sigma");
  const double scale = delta * delta / (8.0 * sigma * sigma);
  return std::exp(-static_cast<double>(m) * scale) +
         std::exp(-static_cast<double>(l) * scale);
}

double PairMismatchBoundAsymptotic(Index n, double alpha_pp, double sigma) {
  RequireAtLeastOne(n, "n");
  RequirePositive(alpha_pp, "alpha''");
  RequirePositive(sigma, "sigma");
  return 2.0 * std::exp(-std::pow(static_cast<double>(n), alpha_pp / 2.0) /
                        (8.0 * sigma * sigma));
}

double GroupMeanCollisionBound(Index n, Index s, double alpha_pp,
                               double delta_bound) {
  RequireAtLeastOne(n, "n");
  RequireAtLeastOne(s, "s");
  RequirePositive(alpha_pp, "alpha''");
  if (s > kMaxFactorialArgument) {
    throw Error(ErrorCode::kOverflow, "group size too large for (s-1)!");
  }
  const double sd = static_cast<double>(s);
  return Factorial(s - 1) * std::pow(8.0, sd) *
         std::pow(static_cast<double>(n), -sd * alpha_pp / 4.0) * delta_bound;
}

double LearningConcentrationBound(Index l, double delta, double sigma, Index s) {
  RequireAtLeastOne(l, "l");
  RequireAtLeastOne(s, "s");
  RequirePositive(delta, "delta");
  RequirePositive(sigma, "sigma");
  return static_cast<double>(s) *
         std::exp(-static_cast<double>(l) * delta * delta / (2.0 * sigma * sigma));
}

double LearningConcentrationBoundAsymptotic(Index n, double alpha_pp,
                                            double sigma, Index s) {
  RequireAtLeastOne(n, "n");
  RequireAtLeastOne(s, "s");
  RequirePositive(alpha_pp, "alpha''");
  RequirePositive(sigma, "sigma");
  return static_cast<double>(s) *
         std::exp(-std::pow(static_cast<double>(n), alpha_pp / 2.0) /
                  (2.0 * sigma * sigma));
}

double MeanProximityBound(Index n, Index s, double alpha_pp, double delta_bound) {
  RequireAtLeastOne(n, "n");
  RequireAtLeastOne(s, "s");
  RequirePositive(alpha_pp, "alpha''");
  return 8.0 * static_cast<double>(s) *
         std::pow(static_cast<double>(n), -1.0 - alpha_pp / 4.0) * delta_bound;
}

double PowerLawFormula::Evaluate(Index n, double alpha_pp,
                                 double delta_bound) const {
  return coefficient *
         std::pow(static_cast<double>(n),
                  exponent_constant + exponent_alpha * alpha_pp) *
         delta_bound;
}

std::string PowerLawFormula::ToString() const {
  std::ostringstream out;
  out << coefficient << " * n^(";
  if (exponent_constant != 0.0) out << exponent_constant << " ";
  out << (exponent_alpha < 0.0 ? "- " : "+ ") << std::abs(exponent_alpha)
      << "*a) * delta";
  return out.str();
}

PowerLawFormula GroupMeanCollisionFormula(Index s) {
  RequireAtLeastOne(s, "s");
  if (s > kMaxFactorialArgument) {
    throw Error(ErrorCode::kOverflow, "group size too large for (s-1)!");
  }
  const double sd = static_cast<double>(s);
  return {Factorial(s - 1) * std::pow(8.0, sd), 0.0, -sd / 4.0};
}

PowerLawFormula MeanProximityFormula(Index s) {
  RequireAtLeastOne(s, "s");
  return {8.0 * static_cast<double>(s), -1.0, -0.25};
}

std::span<const std::string_view> RegisteredBounds() { return kRegistry; }

double BoundScenario::Delta() const {
  return threshold.value_or(DeltaN(n, s, alpha_pp));
}

BoundScenario DefaultBoundScenario(std::string_view bound_name) {
  BoundScenario sc;
  switch (BoundIndex(bound_name)) {
    case 0:  // Delta = 0.125; analytic 2e^-1.5625.
      sc.m = 8;
      sc.l = 8;
      break;
    case 1:
      sc.n = 10000;
      sc.s = 2;
      break;
    case 2:  // Delta = 0.125; analytic 2e^-3.125.
      sc.l = 4;
      break;
    case 3:
      sc.n = 100;
      sc.s = 1;
      break;
  }
  return sc;
}

double AnalyticBound(std::string_view bound_name, const BoundScenario& sc) {
  switch (BoundIndex(bound_name)) {
    case 0:
      return PairMismatchBound(sc.m, sc.l, sc.Delta(), sc.sigma);
    case 1:
      return GroupMeanCollisionBound(sc.n, sc.s, sc.alpha_pp,
                                     sc.mean_dist.density_bound());
    case 2:
      return LearningConcentrationBound(sc.l, sc.Delta(), sc.sigma, sc.s);
    case 3:
      return MeanProximityBound(sc.n, sc.s, sc.alpha_pp,
                                sc.mean_dist.density_bound());
  }
  throw Error(ErrorCode::kUnknownBound, std::string(bound_name));
}

BoundReport ValidateBound(std::string_view bound_name,
                          const BoundScenario& scenario, std::int64_t trials,
                          std::uint64_t master_seed, int workers) {
  const std::size_t which = BoundIndex(bound_name);
  if (trials < 100) {
    throw Error(ErrorCode::kInvalidConfig, "bound validation needs >= 100 trials");
  }
  if (scenario.n % scenario.s != 0) {
    throw Error(ErrorCode::kInvalidConfig, "n must be a multiple of s");
  }
  BoundReport report;
  report.name = std::string(bound_name);
  report.trials = trials;
  report.analytic = AnalyticBound(bound_name, scenario);
  report.vacuous = report.analytic >= 1.0;

  using EventFn = bool (*)(const BoundScenario&, std::uint64_t);
  constexpr std::array<EventFn, 4> kEvents = {
      PairMismatchEvent, GroupMeanCollisionEvent, LearningConcentrationEvent,
      MeanProximityEvent};
  const std::uint64_t bound_seed =
      StreamSeed(master_seed, StreamPurpose::kBoundTrial, which);
  std::vector<char> hits(static_cast<std::size_t>(trials), 0);
  ParallelFor(hits.size(), workers, [&](std::size_t i) {
    hits[i] = kEvents[which](scenario,
                             StreamSeed(bound_seed, StreamPurpose::kTrial, i));
  });
  const auto count = std::count(hits.begin(), hits.end(), char{1});
  const double p = static_cast<double>(count) / static_cast<double>(trials);
  report.empirical = p;
  report.standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  report.satisfied = report.empirical <=
                     std::min(report.analytic, 1.0) + 3.0 * report.standard_error;
  return report;
}

}  // namespace deanon
