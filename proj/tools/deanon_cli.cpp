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
// Simulation CLI: `sweep`, `bounds` and `trial` subcommands.
//
// Exit codes: 0 success, 1 invalid configuration, 2 I/O failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "deanon/error.hpp"
#include "deanon/harness.hpp"
#include "deanon/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidConfig = 1;
constexpr int kExitIo = 2;

struct Flags {
  std::string config_path;
  std::string n_values;
  std::optional<long> s;
  std::optional<double> alpha;
  std::optional<double> alpha_prime;
  std::optional<double> sigma;
  std::optional<double> rho;
  std::optional<std::int64_t> trials;
  std::optional<std::uint64_t> seed;
  std::string multipliers;
  std::string mode;
  std::string graph;
  std::string ambiguity;
  std::string mean_dist;
  std::optional<double> tau;
  std::optional<int> workers;
  std::string out;
  std::int64_t trial_index = 0;
};

void AddCommonFlags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config_path, "Flat key=value config file");
  cmd.add_option("--n", f.n_values, "User counts, comma separated");
  cmd.add_option("--s", f.s, "Group size");
  cmd.add_option("--alpha", f.alpha, "Observation length exponent offset");
  cmd.add_option("--alpha-prime", f.alpha_prime, "Learning length exponent offset");
  cmd.add_option("--sigma", f.sigma, "Per-user standard deviation");
  cmd.add_option("--rho", f.rho, "Intra-group correlation in [0, 1)");
  cmd.add_option("--trials", f.trials, "Trials per grid point");
  cmd.add_option("--seed", f.seed, "Master seed");
  cmd.add_option("--multipliers", f.multipliers,
                 "Length multipliers on the required length, comma separated");
  cmd.add_option("--mode", f.mode, "Adversary: learning or oracle")
      ->check(CLI::IsMember({"learning", "oracle"}));
  cmd.add_option("--graph", f.graph, "Association graph: known or recon")
      ->check(CLI::IsMember({"known", "recon"}));
  cmd.add_option("--ambiguity", f.ambiguity, "Group tie policy: nearest or reject")
      ->check(CLI::IsMember({"nearest", "reject"}));
  cmd.add_option("--mean-dist", f.mean_dist,
                 "uniform:a,b or truncnormal:center,spread,a,b");
  cmd.add_option("--tau", f.tau, "Covariance edge threshold");
  cmd.add_option("--out", f.out, "Output path (.json for JSON, else CSV)");
  cmd.add_option("--workers", f.workers, "Worker threads");
}

deanon::ExperimentConfig BuildConfig(const Flags& f) {
  deanon::ExperimentConfig cfg;
  if (!f.config_path.empty()) {
    deanon::ApplyConfigText(deanon::ReadTextFile(f.config_path), cfg);
  }
  if (!f.n_values.empty()) cfg.n_values = deanon::ParseIndexList(f.n_values);
  if (f.s) cfg.s = *f.s;
  if (f.alpha) cfg.alpha = *f.alpha;
  if (f.alpha_prime) cfg.alpha_prime = *f.alpha_prime;
  if (f.sigma) cfg.sigma = *f.sigma;
  if (f.rho) cfg.rho = *f.rho;
  if (f.trials) cfg.trials_per_point = *f.trials;
  if (f.seed) cfg.master_seed = *f.seed;
  if (!f.multipliers.empty()) {
    cfg.length_multipliers = deanon::ParseDoubleList(f.multipliers);
  }
  if (!f.mode.empty()) cfg.mode = deanon::ParseAdversary(f.mode);
  if (!f.graph.empty()) cfg.graph = deanon::ParseGraphKnowledge(f.graph);
  if (!f.ambiguity.empty()) cfg.ambiguity = deanon::ParseAmbiguityPolicy(f.ambiguity);
  if (!f.mean_dist.empty()) cfg.mean_dist = deanon::ParseMeanDistribution(f.mean_dist);
  if (f.tau) cfg.tau = *f.tau;
  if (f.workers) cfg.workers = *f.workers;
  cfg.Validate();
  return cfg;
}

void Emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    deanon::WriteTextFile(out_path, content);
  }
}

bool WantsJson(const std::string& out_path) {
  return std::filesystem::path(out_path).extension() == ".json";
}

void RunSweepCommand(const Flags& f) {
  const deanon::ExperimentConfig cfg = BuildConfig(f);
  const auto rows = deanon::RunSweep(cfg);
  Emit(f.out, WantsJson(f.out) ? deanon::FormatSweepJson(rows, cfg.master_seed)
                               : deanon::FormatCsv(rows));
}

void RunBoundsCommand(const Flags& f) {
  deanon::ExperimentConfig cfg = BuildConfig(f);
  const std::int64_t trials = f.trials ? *f.trials : 10000;
  const auto reports = deanon::RunBoundSuite(trials, cfg.master_seed, cfg.workers);
  Emit(f.out, deanon::FormatBoundsJson(reports, cfg.master_seed));
  for (const auto& r : reports) {
    std::cerr << r.name << ": analytic=" << r.analytic << " empirical=" << r.empirical
              << " +/- " << r.standard_error
              << (r.vacuous ? " (vacuous)" : "")
              << (r.satisfied ? " satisfied" : " VIOLATED") << "\n";
  }
}

void RunTrialCommand(const Flags& f) {
  const deanon::ExperimentConfig cfg = BuildConfig(f);
  if (cfg.n_values.empty()) {
    throw deanon::Error(deanon::ErrorCode::kInvalidConfig, "trial needs --n");
  }
  const deanon::GridPoint point = deanon::MakeGridPoint(
      cfg, cfg.n_values.front(), cfg.length_multipliers.front());
  Emit(f.out, deanon::FormatTrialJson(deanon::RunTrial(cfg, point, f.trial_index)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo de-anonymization of dependent Gaussian time series"};
  app.require_subcommand(1);
  Flags flags;
  CLI::App* sweep = app.add_subcommand("sweep", "Success rates over (n, multiplier)");
  CLI::App* bounds = app.add_subcommand("bounds", "Analytic bounds vs Monte Carlo");
  CLI::App* trial = app.add_subcommand("trial", "Run one end-to-end trial");
  for (CLI::App* cmd : {sweep, bounds, trial}) AddCommonFlags(*cmd, flags);
  trial->add_option("--index", flags.trial_index, "Trial index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }

  try {
    if (sweep->parsed()) RunSweepCommand(flags);
    if (bounds->parsed()) RunBoundsCommand(flags);
    if (trial->parsed()) RunTrialCommand(flags);
  } catch (const deanon::Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == deanon::ErrorCode::kIoError ? kExitIo : kExitInvalidConfig;
  }
  return kExitOk;
}
