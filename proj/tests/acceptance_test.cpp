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
// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "deanon/harness.hpp"
#include "deanon/io.hpp"
#include "deanon/matching.hpp"
#include "deanon/random.hpp"

namespace {

using deanon::ExperimentConfig;
using deanon::GridPoint;
using deanon::Index;

int failures = 0;

void Report(const char* id, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <typename... Args>
std::string Fmt(const char* fmt, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

ExperimentConfig BaseScenario() {
  ExperimentConfig cfg;
  cfg.n_values = {16};
  cfg.s = 2;
  cfg.sigma = 0.1;
  cfg.rho = 0.5;
  cfg.alpha = 1.0;
  cfg.alpha_prime = 1.0;
  cfg.mean_dist = deanon::MeanDistribution::Uniform(0.0, 1.0);
  cfg.mode = deanon::Adversary::kLearningData;
  cfg.graph = deanon::GraphKnowledge::kReconstructed;
  cfg.master_seed = 20260;
  return cfg;
}

double User1Rate(const ExperimentConfig& cfg, const GridPoint& point,
                 std::int64_t trials) {
  std::int64_t correct = 0;
  for (std::int64_t i = 0; i < trials; ++i) {
    correct += deanon::RunTrial(cfg, point, i).user1_correct;
  }
  return static_cast<double>(correct) / static_cast<double>(trials);
}

void MetricOracle() {
  deanon::Engine engine = deanon::MakeEngine(11);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> grid(0, 3);
  const auto start = std::chrono::steady_clock::now();
  int mismatches = 0;
  int pairs = 0;
  for (Index s = 2; s <= 7; ++s) {
    for (int k = 0; k < 10000; ++k, ++pairs) {
      Eigen::VectorXd u(s), v(s);
      const bool tied = k % 4 == 0;
      for (Index i = 0; i < s; ++i) {
        u(i) = tied ? grid(engine) : unit(engine);
        v(i) = tied ? grid(engine) : unit(engine);
      }
      if (deanon::PermInfDistance(u, v).distance !=
          deanon::BottleneckAssignmentOracle(u, v).distance) {
        ++mismatches;
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Report("A1", mismatches == 0 && secs < 5.0,
         Fmt("%d pairs, %d mismatches, %.2f s (limit 5 s)", pairs, mismatches, secs));
}

void GraphRecovery() {
  ExperimentConfig cfg;
  cfg.n_values = {32};
  cfg.s = 2;
  cfg.rho = 0.5;
  cfg.sigma = 1.0;
  cfg.tau = 0.25;
  cfg.master_seed = 31;
  const GridPoint point{32, 1.0, 1024, 1024};
  int exact = 0;
  for (std::int64_t i = 0; i < 200; ++i) exact += deanon::RunTrial(cfg, point, i).graph_exact;
  const double rate = exact / 200.0;
  Report("A2", rate >= 0.95, Fmt("exact recovery rate %.3f (need >= %.2f)", rate, 0.95));
}

void AboveThreshold() {
  const ExperimentConfig cfg = BaseScenario();
  const GridPoint point = deanon::MakeGridPoint(cfg, 16, 1.0);
  const double rate = User1Rate(cfg, point, 100);
  Report("A3", point.m == 256 && point.l == 256 && rate >= 0.90,
         Fmt("m=%td l=%td, user1 rate %.3f (need >= 0.90)", point.m, point.l, rate));
}

void BelowThreshold() {
  const ExperimentConfig cfg = BaseScenario();
  const GridPoint point{16, 4.0 / 256.0, 4, 4};
  const double rate = User1Rate(cfg, point, 200);
  Report("A4", rate <= 0.25, Fmt("m=l=4, user1 rate %.3f (need <= %.2f)", rate, 0.25));
}

void Monotonicity() {
  ExperimentConfig cfg = BaseScenario();
  cfg.length_multipliers = {0.05, 0.2, 0.5, 1.0, 2.0};
  cfg.trials_per_point = 200;
  const auto rows = deanon::RunSweep(cfg);
  bool ok = rows.size() == 5;
  std::string detail = "rates";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    detail += Fmt(" %.3f", rows[i].user1_correct_rate);
    if (i == 0) continue;
    const double pooled = std::hypot(rows[i].stderr_user1, rows[i - 1].stderr_user1);
    if (rows[i].user1_correct_rate < rows[i - 1].user1_correct_rate - 2.0 * pooled) {
      ok = false;
    }
  }
  Report("A5", ok, detail + " (nondecreasing within 2 pooled SE)");
}

void BoundDominance() {
  const auto reports = deanon::RunBoundSuite(10000, 5, 1);
  bool ok = reports.size() == 4;
  std::string detail;
  for (const auto& r : reports) {
    ok = ok && r.satisfied;
    detail += r.name + Fmt("=%.4f<=%.4f ", r.empirical, std::min(r.analytic, 1.0));
  }
  Report("A6", ok, detail + "(+3 SE)");
}

void PriorDominance() {
  ExperimentConfig learning = BaseScenario();
  ExperimentConfig prior = learning;
  prior.mode = deanon::Adversary::kPerfectPrior;
  const GridPoint point = deanon::MakeGridPoint(learning, 16, 0.2);
  const int trials = 200;
  std::vector<double> diff(trials);
  double learning_count = 0.0, prior_count = 0.0;
  for (int i = 0; i < trials; ++i) {
    const double a = deanon::RunTrial(learning, point, i).user1_correct;
    const double b = deanon::RunTrial(prior, point, i).user1_correct;
    learning_count += a;
    prior_count += b;
    diff[static_cast<std::size_t>(i)] = b - a;
  }
  const double mean = (prior_count - learning_count) / trials;
  double var = 0.0;
  for (double d : diff) var += (d - mean) * (d - mean);
  var /= trials - 1;
  const double slack = 3.0 * std::sqrt(trials * var);
  Report("A7", prior_count >= learning_count - slack,
         Fmt("prior %.0f vs learning %.0f correct of %d, slack %.2f",
             prior_count, learning_count, trials, slack));
}

void Determinism() {
  ExperimentConfig cfg = BaseScenario();
  cfg.n_values = {8, 16};
  cfg.length_multipliers = {0.2, 1.0};
  cfg.trials_per_point = 50;
  cfg.workers = 1;
  const std::string reference = deanon::FormatCsv(deanon::RunSweep(cfg));
  bool ok = deanon::FormatCsv(deanon::RunSweep(cfg)) == reference;
  for (int workers : {2, 4}) {
    cfg.workers = workers;
    ok = ok && deanon::FormatCsv(deanon::RunSweep(cfg)) == reference;
  }
  Report("A8", ok, "CSV byte-identical across reruns and workers 1/2/4");
}

}  // namespace

int main() {
  MetricOracle();
  GraphRecovery();
  AboveThreshold();
  BelowThreshold();
  Monotonicity();
  BoundDominance();
  PriorDominance();
  Determinism();
  std::printf("%d failed\n", failures);
  return failures == 0 ? 0 : 1;
}
