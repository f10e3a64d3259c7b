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
#include "deanon/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "deanon/error.hpp"

namespace deanon {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(Index n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }

  Index Find(Index x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void Union(Index a, Index b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<Index> parent_;
};

MeanVector TrueMeans(const UserPopulation& pop, const Group& group) {
  MeanVector out;
  out.source = MeanSource::kTrue;
  out.values.resize(static_cast<Index>(group.size()));
  for (std::size_t j = 0; j < group.size(); ++j) {
    out.values(static_cast<Index>(j)) = pop.means(group[j]);
  }
  return out;
}

}  // namespace

ReconstructedGraph GraphFromEdges(Index n,
                                  std::set<std::pair<Index, Index>> edges) {
  DisjointSets sets(n);
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n || a >= b) {
      throw Error(ErrorCode::kIndexOutOfRange, "invalid edge");
    }
    sets.Union(a, b);
  }
  ReconstructedGraph graph;
  graph.n = n;
  graph.edges = std::move(edges);
  std::map<Index, std::size_t> slot;
  for (Index u = 0; u < n; ++u) {
    const Index root = sets.Find(u);
    auto [it, inserted] = slot.try_emplace(root, graph.groups.size());
    if (inserted) graph.groups.emplace_back();
    graph.groups[it->second].push_back(u);
  }
  return graph;
}

ReconstructedGraph GraphFromPartition(const Partition& partition, Index n) {
  std::set<std::pair<Index, Index>> edges;
  for (const Group& group : partition) {
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        edges.emplace(std::min(group[i], group[j]),
                      std::max(group[i], group[j]));
      }
    }
  }
  return GraphFromEdges(n, std::move(edges));
}

ReconstructedGraph RelabelGraph(const ReconstructedGraph& graph,
                                const Permutation& relabel) {
  std::set<std::pair<Index, Index>> edges;
  for (const auto& [a, b] : graph.edges) {
    const Index x = relabel(a);
    const Index y = relabel(b);
    edges.emplace(std::min(x, y), std::max(x, y));
  }
  return GraphFromEdges(graph.n, std::move(edges));
}

Eigen::MatrixXd SampleCovariance(const TraceMatrix& traces) {
  const Index m = traces.cols();
  if (m < 2) {
    throw Error(ErrorCode::kInvalidConfig,
                "sample covariance needs at least two samples");
  }
  const Eigen::MatrixXd centered =
      traces.values.colwise() - traces.values.rowwise().mean();
  return (centered * centered.transpose()) / static_cast<double>(m - 1);
}

ReconstructedGraph ThresholdCovariance(const Eigen::MatrixXd& cov, double tau) {
  if (!(tau > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "tau must be positive");
  }
  if (cov.rows() != cov.cols()) {
    throw Error(ErrorCode::kLengthMismatch, "covariance must be square");
  }
  std::set<std::pair<Index, Index>> edges;
  for (Index u = 0; u < cov.rows(); ++u) {
    for (Index v = u + 1; v < cov.cols(); ++v) {
      if (cov(u, v) >= tau) edges.emplace(u, v);
    }
  }
  return GraphFromEdges(cov.rows(), std::move(edges));
}

ReconstructedGraph ReconstructGraph(const TraceMatrix& observed, double tau) {
  return ThresholdCovariance(SampleCovariance(observed), tau);
}

double DefaultTau(double rho, double sigma, Index n, Index m) {
  const double variance = sigma * sigma;
  if (rho > 0.0) return 0.5 * rho * variance;
  const double log_n = std::log(static_cast<double>(std::max<Index>(n, 2)));
  return 4.0 * variance *
         std::sqrt(log_n / static_cast<double>(std::max<Index>(m, 1)));
}

double DeltaN(Index n, Index s, double alpha_pp) {
  if (n < 1 || s < 1 || !(alpha_pp > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "DeltaN needs n, s >= 1, alpha > 0");
  }
  return std::pow(static_cast<double>(n),
                  -1.0 / static_cast<double>(s) - alpha_pp / 4.0);
}

Index RequiredLength(Index n, Index s, double alpha) {
  if (n < 1 || s < 1 || !(alpha > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "RequiredLength needs n, s >= 1, alpha > 0");
  }
  const double exact = std::pow(static_cast<double>(n),
                                2.0 / static_cast<double>(s) + alpha);
  if (!(exact < 9.0e15)) {
    throw Error(ErrorCode::kOverflow, "required length is not representable");
  }
  // pow() can land a hair above an exact integer power.
  const double nearest = std::round(exact);
  const double value =
      std::abs(exact - nearest) <= 1e-9 * nearest ? nearest : std::ceil(exact);
  return std::max<Index>(1, static_cast<Index>(value));
}

std::string_view MatchStatusName(MatchStatus status) {
  switch (status) {
    case MatchStatus::kMatched:
      return "matched";
    case MatchStatus::kNoMatch:
      return "no-match";
    case MatchStatus::kAmbiguous:
      return "ambiguous";
  }
  return "unknown";
}

GroupMatch IdentifyGroup(const MeanVector& learning_group,
                         std::span<const GroupCandidate> observed_groups,
                         double delta, AmbiguityPolicy policy) {
  if (observed_groups.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "no candidate groups");
  }
  GroupMatch match;
  match.distances.reserve(observed_groups.size());
  std::size_t best = observed_groups.size();
  MatchAssignment best_assignment;
  bool tied = false;
  for (std::size_t i = 0; i < observed_groups.size(); ++i) {
    MatchAssignment a = PermInfDistance(learning_group, observed_groups[i].means);
    match.distances.push_back(a.distance);
    if (a.distance > delta) continue;
    ++match.within_threshold;
    if (best == observed_groups.size() ||
        a.distance < best_assignment.distance) {
      best = i;
      best_assignment = std::move(a);
      tied = false;
    } else if (a.distance == best_assignment.distance) {
      tied = true;
    }
  }
  if (match.within_threshold == 0) return match;
  const bool ambiguous =
      policy == AmbiguityPolicy::kReject ? match.within_threshold > 1 : tied;
  if (ambiguous) {
    match.status = MatchStatus::kAmbiguous;
    return match;
  }
  match.status = MatchStatus::kMatched;
  match.group_id = observed_groups[best].id;
  match.assignment = std::move(best_assignment);
  return match;
}

std::vector<Pairing> MatchWithinGroup(const MeanVector& learning_means,
                                      const MeanVector& observed_means,
                                      std::span<const Index> observed_user_ids,
                                      double delta) {
  if (observed_means.size() != static_cast<Index>(observed_user_ids.size())) {
    throw Error(ErrorCode::kLengthMismatch,
                "one observed id is needed per observed mean");
  }
  const MatchAssignment sorted = PermInfDistance(learning_means, observed_means);
  std::vector<Pairing> pairings(sorted.perm.size());
  for (std::size_t i = 0; i < sorted.perm.size(); ++i) {
    const Index j = sorted.perm[i];
    const double diff = std::abs(learning_means.values(static_cast<Index>(i)) -
                                 observed_means.values(j));
    pairings[i] = {observed_user_ids[j], diff, diff <= delta};
  }
  return pairings;
}

void AttackConfig::Validate() const {
  if (!(alpha > 0.0) || !(alpha_prime > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "alpha and alpha' must be positive");
  }
  if (!(cov_threshold > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "covariance threshold must be positive");
  }
  if (s < 1) throw Error(ErrorCode::kInvalidConfig, "s must be at least 1");
  if (!(sigma > 0.0)) throw Error(ErrorCode::kInvalidConfig, "sigma must be positive");
}

AttackResult RunAttack(const TraceMatrix& learning, const TraceMatrix& observed,
                       const UserPopulation* population, const AttackConfig& cfg,
                       const ReconstructedGraph* known_graph) {
  cfg.Validate();
  const Index n = observed.rows();
  if (learning.rows() != n) {
    throw Error(ErrorCode::kLengthMismatch,
                "learning and observed sets differ in user count");
  }
  if (population != nullptr && population->n() != n) {
    throw Error(ErrorCode::kLengthMismatch, "population size differs from traces");
  }
  if (cfg.target_user < 0 || cfg.target_user >= n) {
    throw Error(ErrorCode::kIndexOutOfRange, "target user out of range");
  }
  const bool perfect_prior = cfg.mode == Adversary::kPerfectPrior;
  if (perfect_prior && population == nullptr) {
    throw Error(ErrorCode::kInvalidConfig, "perfect-prior mode needs true means");
  }

  AttackResult result;
  result.delta = DeltaN(n, cfg.s, cfg.alpha_pp());

  // Stage 1: observed-space association graph.
  if (cfg.graph == GraphKnowledge::kKnown) {
    if (known_graph == nullptr || known_graph->n != n) {
      throw Error(ErrorCode::kInvalidConfig,
                  "known-graph mode needs the observed association graph");
    }
    result.reconstructed_graph = *known_graph;
  } else if (observed.cols() >= 2) {
    result.reconstructed_graph = ReconstructGraph(observed, cfg.cov_threshold);
  } else {
    result.reconstructed_graph = GraphFromEdges(n, {});
  }

  // Identity-space group of the target user.
  if (population != nullptr) {
    result.learning_group = population->partition[population->GroupOf(cfg.target_user)];
  } else {
    const ReconstructedGraph learned =
        learning.cols() >= 2 ? ReconstructGraph(learning, cfg.cov_threshold)
                             : GraphFromEdges(n, {});
    for (const Group& g : learned.groups) {
      if (std::binary_search(g.begin(), g.end(), cfg.target_user)) {
        result.learning_group = g;
      }
    }
  }

  // Stage 2: group identification among observed groups of size s.
  if (static_cast<Index>(result.learning_group.size()) != cfg.s) return result;
  std::vector<GroupCandidate> candidates;
  const Partition& groups = result.reconstructed_graph.groups;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (static_cast<Index>(groups[g].size()) != cfg.s) continue;
    candidates.push_back({g, EmpiricalMeanVector(observed, groups[g])});
  }
  if (candidates.empty()) return result;
  const MeanVector reference =
      perfect_prior ? TrueMeans(*population, result.learning_group)
                    : EmpiricalMeanVector(learning, result.learning_group);
  result.group_match =
      IdentifyGroup(reference, candidates, result.delta, cfg.ambiguity);
  if (result.group_match.status != MatchStatus::kMatched) return result;

  // Stage 3: within-group matching.
  result.matched_observed_group = groups[result.group_match.group_id];
  const MeanVector observed_means =
      EmpiricalMeanVector(observed, result.matched_observed_group);
  result.pairings = MatchWithinGroup(reference, observed_means,
                                     result.matched_observed_group, result.delta);
  for (std::size_t i = 0; i < result.pairings.size(); ++i) {
    const Pairing& p = result.pairings[i];
    if (!p.accepted) continue;
    result.estimated_perm[result.learning_group[i]] = p.observed_id;
    result.confidence[result.learning_group[i]] = p.difference;
  }
  return result;
}

void ScoreAttack(AttackResult& result, const UserPopulation& population,
                 const Permutation& truth, Index target_user) {
  const ReconstructedGraph expected =
      RelabelGraph(GraphFromPartition(population.partition, population.n()), truth);
  StageSuccess& stage = result.stage_success;
  stage.graph_exact = result.reconstructed_graph.edges == expected.edges;

  const Group& true_group = population.partition[population.GroupOf(target_user)];
  Group true_observed;
  for (Index u : true_group) true_observed.push_back(truth(u));
  std::sort(true_observed.begin(), true_observed.end());
  stage.group_correct = result.group_match.status == MatchStatus::kMatched &&
                        result.matched_observed_group == true_observed;

  const auto it = result.estimated_perm.find(target_user);
  stage.individual_correct = stage.group_correct &&
                             it != result.estimated_perm.end() &&
                             it->second == truth(target_user);
  result.scored = true;
}

double EstimateDataPoint(const TraceMatrix& observed,
                         const EstimatedPermutation& pi_hat, Index u, Index k) {
  const auto it = pi_hat.find(u);
  if (it == pi_hat.end()) {
    throw Error(ErrorCode::kUnmatched, "user " + std::to_string(u) + " unmatched");
  }
  if (k < 0 || k >= observed.cols()) {
    throw Error(ErrorCode::kIndexOutOfRange, "time index out of range");
  }
  return observed.values(it->second, k);
}

}  // namespace deanon
