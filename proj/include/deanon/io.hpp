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
#ifndef DEANON_IO_HPP_
#define DEANON_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "deanon/bounds.hpp"
#include "deanon/harness.hpp"

namespace deanon {

inline constexpr std::string_view kCsvHeader =
    "n,s,m,l,multiplier,mode,graph,trials,graph_exact_rate,group_correct_rate,"
    "user1_correct_rate,stderr_user1,mean_distance,failures_nomatch,"
    "failures_ambiguous,failures_wrong";

std::string_view AdversaryName(Adversary mode);
Adversary ParseAdversary(std::string_view text);
std::string_view GraphKnowledgeName(GraphKnowledge graph);
GraphKnowledge ParseGraphKnowledge(std::string_view text);
std::string_view AmbiguityPolicyName(AmbiguityPolicy policy);
AmbiguityPolicy ParseAmbiguityPolicy(std::string_view text);
std::string_view FailureKindName(FailureKind kind);

// "uniform:a,b" or "truncnormal:center,spread,a,b".
MeanDistribution ParseMeanDistribution(std::string_view text);
std::string FormatMeanDistribution(const MeanDistribution& dist);

// Shortest representation that parses back to the same double.
std::string FormatDouble(double value);
double ParseDouble(std::string_view text);
std::vector<Index> ParseIndexList(std::string_view text);
std::vector<double> ParseDoubleList(std::string_view text);

std::string FormatCsv(std::span<const SweepRow> rows);
std::vector<SweepRow> ParseCsv(std::string_view text);

std::string FormatSweepJson(std::span<const SweepRow> rows,
                            std::uint64_t master_seed);
std::string FormatBoundsJson(std::span<const BoundReport> reports,
                             std::uint64_t master_seed);
std::string FormatTrialJson(const TrialResult& trial);

// Flat "key = value" lines; '#' starts a comment. Overwrites matching fields.
void ApplyConfigText(std::string_view text, ExperimentConfig& cfg);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view content);

}  // namespace deanon

#endif  // DEANON_IO_HPP_
