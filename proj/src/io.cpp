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

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "deanon/error.hpp"

namespace deanon {
namespace {

constexpr std::size_t kCsvColumns = 16;

std::string_view Trim(std::string_view text) {
  constexpr std::string_view kSpace = " \t\r\n";
  const auto begin = text.find_first_not_of(kSpace);
  if (begin == std::string_view::npos) return {};
  const auto end = text.find_last_not_of(kSpace);
  return text.substr(begin, end - begin + 1);
}

std::vector<std::string_view> Split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    parts.push_back(Trim(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename Int>
Int ParseInteger(std::string_view text) {
  text = Trim(text);
  Int value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::kInvalidConfig,
                "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

// NaN is written as null.
nlohmann::json JsonNumber(double value) {
  return std::isfinite(value) ? nlohmann::json(value) : nlohmann::json(nullptr);
}

nlohmann::json RowJson(const SweepRow& r) {
  return {{"n", r.n},
          {"s", r.s},
          {"m", r.m},
          {"l", r.l},
          {"multiplier", r.multiplier},
          {"mode", AdversaryName(r.mode)},
          {"graph", GraphKnowledgeName(r.graph)},
          {"trials", r.trials},
          {"graph_exact_rate", r.graph_exact_rate},
          {"group_correct_rate", r.group_correct_rate},
          {"user1_correct_rate", r.user1_correct_rate},
          {"stderr_user1", r.stderr_user1},
          {"mean_distance", JsonNumber(r.mean_distance)},
          {"failures_nomatch", r.failures_nomatch},
          {"failures_ambiguous", r.failures_ambiguous},
          {"failures_wrong", r.failures_wrong}};
}

}  // namespace

std::string_view AdversaryName(Adversary mode) {
  return mode == Adversary::kPerfectPrior ? "oracle" : "learning";
}

Adversary ParseAdversary(std::string_view text) {
  text = Trim(text);
  if (text == "learning" || text == "learning-data") return Adversary::kLearningData;
  if (text == "oracle" || text == "perfect-prior") return Adversary::kPerfectPrior;
  throw Error(ErrorCode::kInvalidConfig, "unknown mode '" + std::string(text) + "'");
}

std::string_view GraphKnowledgeName(GraphKnowledge graph) {
  return graph == GraphKnowledge::kKnown ? "known" : "recon";
}

GraphKnowledge ParseGraphKnowledge(std::string_view text) {
  text = Trim(text);
  if (text == "known") return GraphKnowledge::kKnown;
  if (text == "recon" || text == "reconstructed") return GraphKnowledge::kReconstructed;
  throw Error(ErrorCode::kInvalidConfig, "unknown graph '" + std::string(text) + "'");
}

std::string_view AmbiguityPolicyName(AmbiguityPolicy policy) {
  return policy == AmbiguityPolicy::kReject ? "reject" : "nearest";
}

AmbiguityPolicy ParseAmbiguityPolicy(std::string_view text) {
  text = Trim(text);
  if (text == "nearest") return AmbiguityPolicy::kNearest;
  if (text == "reject") return AmbiguityPolicy::kReject;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown ambiguity policy '" + std::string(text) + "'");
}

std::string_view FailureKindName(FailureKind kind) {
  switch (kind) {
    case FailureKind::kNone:
      return "none";
    case FailureKind::kNoMatch:
      return "no-match";
    case FailureKind::kAmbiguous:
      return "ambiguous";
    case FailureKind::kWrong:
      return "wrong";
  }
  return "unknown";
}

MeanDistribution ParseMeanDistribution(std::string_view text) {
  text = Trim(text);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidConfig,
                "mean distribution must look like kind:params");
  }
  const std::string_view kind = Trim(text.substr(0, colon));
  const std::vector<double> params = ParseDoubleList(text.substr(colon + 1));
  if (kind == "uniform" && params.size() == 2) {
    return MeanDistribution::Uniform(params[0], params[1]);
  }
  if (kind == "truncnormal" && params.size() == 4) {
    return MeanDistribution::TruncatedNormal(params[0], params[1], params[2],
                                             params[3]);
  }
  throw Error(ErrorCode::kInvalidConfig,
              "unknown mean distribution '" + std::string(text) + "'");
}

std::string FormatMeanDistribution(const MeanDistribution& dist) {
  if (dist.kind() == MeanDistribution::Kind::kUniform) {
    return "uniform:" + FormatDouble(dist.lower()) + "," + FormatDouble(dist.upper());
  }
  return "truncnormal:" + FormatDouble(dist.center()) + "," +
         FormatDouble(dist.spread()) + "," + FormatDouble(dist.lower()) + "," +
         FormatDouble(dist.upper());
}

std::string FormatDouble(double value) {
  std::array<char, 64> buffer{};
  const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), ptr);
}

double ParseDouble(std::string_view text) {
  text = Trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::kInvalidConfig,
                "expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<Index> ParseIndexList(std::string_view text) {
  std::vector<Index> out;
  if (Trim(text).empty()) return out;
  for (std::string_view part : Split(text, ',')) out.push_back(ParseInteger<Index>(part));
  return out;
}

std::vector<double> ParseDoubleList(std::string_view text) {
  std::vector<double> out;
  if (Trim(text).empty()) return out;
  for (std::string_view part : Split(text, ',')) out.push_back(ParseDouble(part));
  return out;
}

std::string FormatCsv(std::span<const SweepRow> rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const SweepRow& r : rows) {
    const std::array<std::string, kCsvColumns> fields = {
        std::to_string(r.n),
        std::to_string(r.s),
        std::to_string(r.m),
        std::to_string(r.l),
        FormatDouble(r.multiplier),
        std::string(AdversaryName(r.mode)),
        std::string(GraphKnowledgeName(r.graph)),
        std::to_string(r.trials),
        FormatDouble(r.graph_exact_rate),
        FormatDouble(r.group_correct_rate),
        FormatDouble(r.user1_correct_rate),
        FormatDouble(r.stderr_user1),
        FormatDouble(r.mean_distance),
        std::to_string(r.failures_nomatch),
        std::to_string(r.failures_ambiguous),
        std::to_string(r.failures_wrong)};
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out += ',';
      out += fields[i];
    }
    out += '\n';
  }
  return out;
}

std::vector<SweepRow> ParseCsv(std::string_view text) {
  std::vector<SweepRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || Trim(line) != kCsvHeader) {
    throw Error(ErrorCode::kInvalidConfig, "CSV header does not match the schema");
  }
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    const auto f = Split(line, ',');
    if (f.size() != kCsvColumns) {
      throw Error(ErrorCode::kInvalidConfig, "CSV row has the wrong column count");
    }
    SweepRow r;
    r.n = ParseInteger<Index>(f[0]);
    r.s = ParseInteger<Index>(f[1]);
    r.m = ParseInteger<Index>(f[2]);
    r.l = ParseInteger<Index>(f[3]);
    r.multiplier = ParseDouble(f[4]);
    r.mode = ParseAdversary(f[5]);
    r.graph = ParseGraphKnowledge(f[6]);
    r.trials = ParseInteger<std::int64_t>(f[7]);
    r.graph_exact_rate = ParseDouble(f[8]);
    r.group_correct_rate = ParseDouble(f[9]);
    r.user1_correct_rate = ParseDouble(f[10]);
    r.stderr_user1 = ParseDouble(f[11]);
    r.mean_distance = ParseDouble(f[12]);
    r.failures_nomatch = ParseInteger<std::int64_t>(f[13]);
    r.failures_ambiguous = ParseInteger<std::int64_t>(f[14]);
    r.failures_wrong = ParseInteger<std::int64_t>(f[15]);
    rows.push_back(r);
  }
  return rows;
}

std::string FormatSweepJson(std::span<const SweepRow> rows,
                            std::uint64_t master_seed) {
  nlohmann::json doc;
  doc["tool"] = "deanon";
  doc["version"] = kToolVersion;
  doc["master_seed"] = master_seed;
  doc["points"] = nlohmann::json::array();
  for (const SweepRow& r : rows) doc["points"].push_back(RowJson(r));
  return doc.dump(2) + "\n";
}

std::string FormatBoundsJson(std::span<const BoundReport> reports,
                             std::uint64_t master_seed) {
  nlohmann::json doc;
  doc["tool"] = "deanon";
  doc["version"] = kToolVersion;
  doc["master_seed"] = master_seed;
  doc["bounds"] = nlohmann::json::array();
  for (const BoundReport& r : reports) {
    doc["bounds"].push_back({{"name", r.name},
                             {"analytic", JsonNumber(r.analytic)},
                             {"empirical", r.empirical},
                             {"stderr", r.standard_error},
                             {"trials", r.trials},
                             {"satisfied", r.satisfied},
                             {"vacuous", r.vacuous}});
  }
  return doc.dump(2) + "\n";
}

std::string FormatTrialJson(const TrialResult& t) {
  nlohmann::json doc = {
      {"n", t.n},
      {"s", t.s},
      {"m", t.m},
      {"l", t.l},
      {"seed", t.seed},
      {"graph_exact", t.graph_exact},
      {"group_correct", t.group_correct},
      {"user1_correct", t.user1_correct},
      {"achieved_distance", JsonNumber(t.achieved_distance)},
      {"failure", FailureKindName(t.failure)},
      {"wall_time_us",
       std::chrono::duration<double, std::micro>(t.wall_time).count()}};
  return doc.dump(2) + "\n";
}

void ApplyConfigText(std::string_view text, ExperimentConfig& cfg) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidConfig,
                  "config line " + std::to_string(line_no) + " has no '='");
    }
    std::string key(Trim(line.substr(0, eq)));
    for (char& c : key) {
      if (c == '-') c = '_';
    }
    const std::string_view value = Trim(line.substr(eq + 1));
    if (key == "n" || key == "n_values") {
      cfg.n_values = ParseIndexList(value);
    } else if (key == "s") {
      cfg.s = ParseInteger<Index>(value);
    } else if (key == "alpha") {
      cfg.alpha = ParseDouble(value);
    } else if (key == "alpha_prime") {
      cfg.alpha_prime = ParseDouble(value);
    } else if (key == "sigma") {
      cfg.sigma = ParseDouble(value);
    } else if (key == "rho") {
      cfg.rho = ParseDouble(value);
    } else if (key == "mean_dist") {
      cfg.mean_dist = ParseMeanDistribution(value);
    } else if (key == "trials" || key == "trials_per_point") {
      cfg.trials_per_point = ParseInteger<std::int64_t>(value);
    } else if (key == "seed" || key == "master_seed") {
      cfg.master_seed = ParseInteger<std::uint64_t>(value);
    } else if (key == "mode") {
      cfg.mode = ParseAdversary(value);
    } else if (key == "graph") {
      cfg.graph = ParseGraphKnowledge(value);
    } else if (key == "ambiguity") {
      cfg.ambiguity = ParseAmbiguityPolicy(value);
    } else if (key == "multipliers" || key == "length_multipliers") {
      cfg.length_multipliers = ParseDoubleList(value);
    } else if (key == "tau") {
      cfg.tau = ParseDouble(value);
    } else if (key == "workers") {
      cfg.workers = ParseInteger<int>(value);
    } else {
      throw Error(ErrorCode::kInvalidConfig, "unknown config key '" + key + "'");
    }
  }
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream content;
  content << in.rdbuf();
  return content.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

}  // namespace deanon
