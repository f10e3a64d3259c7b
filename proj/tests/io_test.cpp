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
#include "deanon/io.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "deanon/error.hpp"
#include "deanon/random.hpp"

namespace deanon {
namespace {

SweepRow RandomRow(Engine& engine) {
  std::uniform_int_distribution<Index> small(1, 5000);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SweepRow r;
  r.n = small(engine);
  r.s = small(engine);
  r.m = small(engine);
  r.l = small(engine);
  r.multiplier = unit(engine) * 10.0;
  r.mode = unit(engine) < 0.5 ? Adversary::kLearningData : Adversary::kPerfectPrior;
  r.graph = unit(engine) < 0.5 ? GraphKnowledge::kKnown : GraphKnowledge::kReconstructed;
  r.trials = small(engine);
  r.graph_exact_rate = unit(engine);
  r.group_correct_rate = unit(engine);
  r.user1_correct_rate = std::floor(unit(engine) * 100) / 100;
  r.stderr_user1 = unit(engine) * 0.05;
  r.mean_distance = unit(engine) * 1e-3;
  r.failures_nomatch = small(engine);
  r.failures_ambiguous = small(engine);
  r.failures_wrong = small(engine);
  return r;
}

TEST(CsvTest, HeaderIsExact) {
  EXPECT_EQ(FormatCsv({}),
            "n,s,m,l,multiplier,mode,graph,trials,graph_exact_rate,"
            "group_correct_rate,user1_correct_rate,stderr_user1,mean_distance,"
            "failures_nomatch,failures_ambiguous,failures_wrong\n");
}

TEST(CsvTest, RoundTripIsExact) {
  Engine engine = MakeEngine(4);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<SweepRow> rows;
    for (int i = 0; i < iter % 7; ++i) rows.push_back(RandomRow(engine));
    const std::string text = FormatCsv(rows);
    EXPECT_EQ(ParseCsv(text), rows);
    EXPECT_EQ(FormatCsv(ParseCsv(text)), text);
  }
}

TEST(CsvTest, NanDistanceRoundTrips) {
  SweepRow r;
  r.mean_distance = std::numeric_limits<double>::quiet_NaN();
  const std::vector<SweepRow> rows = {r};
  const std::string text = FormatCsv(rows);
  EXPECT_NE(text.find(",nan,"), std::string::npos);
  EXPECT_TRUE(std::isnan(ParseCsv(text).front().mean_distance));
  EXPECT_EQ(FormatCsv(ParseCsv(text)), text);
}

TEST(CsvTest, RejectsSchemaMismatch) {
  EXPECT_THROW(ParseCsv("n,s\n1,2\n"), Error);
  EXPECT_THROW(ParseCsv(std::string(kCsvHeader) + "\n1,2,3\n"), Error);
}

TEST(JsonTest, SweepDocument) {
  Engine engine = MakeEngine(9);
  const std::vector<SweepRow> rows = {RandomRow(engine), RandomRow(engine)};
  const auto doc = nlohmann::json::parse(FormatSweepJson(rows, 77));
  EXPECT_EQ(doc["master_seed"], 77);
  EXPECT_EQ(doc["version"], std::string(kToolVersion));
  ASSERT_EQ(doc["points"].size(), 2u);
  EXPECT_EQ(doc["points"][0]["n"], rows[0].n);
  EXPECT_EQ(doc["points"][1]["user1_correct_rate"].get<double>(),
            rows[1].user1_correct_rate);
  EXPECT_EQ(doc["points"][0].size(), 16u);
}

TEST(JsonTest, BoundsDocument) {
  BoundReport r;
  r.name = "pair_mismatch";
  r.analytic = 0.5;
  r.empirical = 0.1;
  r.trials = 100;
  r.satisfied = true;
  const std::vector<BoundReport> reports = {r};
  const auto doc = nlohmann::json::parse(FormatBoundsJson(reports, 5));
  EXPECT_EQ(doc["bounds"][0]["name"], "pair_mismatch");
  EXPECT_EQ(doc["bounds"][0]["satisfied"], true);
}

TEST(ConfigTextTest, AppliesKeys) {
  ExperimentConfig cfg;
  ApplyConfigText(R"(
# phase transition scan
n = 8, 16
s = 2
alpha = 0.5
alpha-prime = 0.75
sigma = 0.2
rho = 0.3   # intra-group
mean_dist = truncnormal:0.5,0.2,0,1
trials = 42
seed = 9
mode = oracle
graph = known
ambiguity = reject
multipliers = 0.5,1,2
tau = 0.01
workers = 3
)",
                  cfg);
  EXPECT_EQ(cfg.n_values, (std::vector<Index>{8, 16}));
  EXPECT_EQ(cfg.s, 2);
  EXPECT_EQ(cfg.alpha, 0.5);
  EXPECT_EQ(cfg.alpha_prime, 0.75);
  EXPECT_EQ(cfg.sigma, 0.2);
  EXPECT_EQ(cfg.rho, 0.3);
  EXPECT_EQ(cfg.mean_dist.kind(), MeanDistribution::Kind::kTruncatedNormal);
  EXPECT_EQ(cfg.trials_per_point, 42);
  EXPECT_EQ(cfg.master_seed, 9u);
  EXPECT_EQ(cfg.mode, Adversary::kPerfectPrior);
  EXPECT_EQ(cfg.graph, GraphKnowledge::kKnown);
  EXPECT_EQ(cfg.ambiguity, AmbiguityPolicy::kReject);
  EXPECT_EQ(cfg.length_multipliers, (std::vector<double>{0.5, 1.0, 2.0}));
  EXPECT_EQ(cfg.tau, 0.01);
  EXPECT_EQ(cfg.workers, 3);
  EXPECT_NO_THROW(cfg.Validate());
}

TEST(ConfigTextTest, Errors) {
  ExperimentConfig cfg;
  EXPECT_THROW(ApplyConfigText("colour = red", cfg), Error);
  EXPECT_THROW(ApplyConfigText("sigma 0.1", cfg), Error);
  EXPECT_THROW(ApplyConfigText("s = two", cfg), Error);
  EXPECT_THROW(ApplyConfigText("mode = bayes", cfg), Error);
}

TEST(ParseTest, MeanDistribution) {
  const MeanDistribution u = ParseMeanDistribution("uniform:-1,2");
  EXPECT_EQ(u.lower(), -1.0);
  EXPECT_EQ(u.upper(), 2.0);
  EXPECT_EQ(FormatMeanDistribution(u), "uniform:-1,2");
  EXPECT_THROW(ParseMeanDistribution("uniform:1"), Error);
  EXPECT_THROW(ParseMeanDistribution("beta:1,2"), Error);
}

TEST(ParseTest, Lists) {
  EXPECT_EQ(ParseIndexList("4, 8,16"), (std::vector<Index>{4, 8, 16}));
  EXPECT_TRUE(ParseIndexList("").empty());
  EXPECT_EQ(ParseDoubleList("0.05,2"), (std::vector<double>{0.05, 2.0}));
  EXPECT_THROW(ParseIndexList("4,x"), Error);
  EXPECT_EQ(FormatDouble(0.1), "0.1");
}

TEST(FileTest, WriteFailureIsIoError) {
  try {
    WriteTextFile("/nonexistent-dir/out.csv", "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
  const auto path = std::filesystem::temp_directory_path() / "deanon_io_test.txt";
  WriteTextFile(path, "hello\n");
  EXPECT_EQ(ReadTextFile(path), "hello\n");
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace deanon
