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
#ifndef DEANON_ATTACK_HPP_
#define DEANON_ATTACK_HPP_

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "deanon/matching.hpp"
#include "deanon/model.hpp"

namespace deanon {

// Undirected graph on {0..n-1}; edges stored with first < second, groups are
// the connected components ordered by smallest member.
struct ReconstructedGraph {
  Index n = 0;
  std::set<std::pair<Index, Index>> edges;
  Partition groups;
};

ReconstructedGraph GraphFromEdges(Index n,
                                  std::set<std::pair<Index, Index>> edges);
// Every group becomes a clique.
ReconstructedGraph GraphFromPartition(const Partition& partition, Index n);
// Relabels vertices: u becomes relabel(u).
ReconstructedGraph RelabelGraph(const ReconstructedGraph& graph,
                                const Permutation& relabel);

// Unbiased sample covariance of the rows. Requires at least two columns.
Eigen::MatrixXd SampleCovariance(const TraceMatrix& traces);

// Edge (u, v) iff cov(u, v) >= tau.
ReconstructedGraph ThresholdCovariance(const Eigen::MatrixXd& cov, double tau);

ReconstructedGraph ReconstructGraph(const TraceMatrix& observed, double tau);

// rho * sigma^2 / 2 when rho > 0, else 4 sigma^2 sqrt(log n / m).
double DefaultTau(double rho, double sigma, Index n, Index m);

// Acceptance radius n^(-1/s - alpha_pp/4).
double DeltaN(Index n, Index s, double alpha_pp);

// ceil(n^(2/s + alpha)).
Index RequiredLength(Index n, Index s, double alpha);

enum class MatchStatus { kMatched, kNoMatch, kAmbiguous };

std::string_view MatchStatusName(MatchStatus status);

// kNearest: the smallest distance within delta wins; an exact tie is
// ambiguous. kReject: any second candidate within delta is ambiguous.
enum class AmbiguityPolicy { kNearest, kReject };

struct GroupCandidate {
  std::size_t id = 0;
  MeanVector means;
};

struct GroupMatch {
  MatchStatus status = MatchStatus::kNoMatch;
  std::size_t group_id = 0;
  MatchAssignment assignment;
  // D to every candidate, in candidate order.
  std::vector<double> distances;
  int within_threshold = 0;
};

GroupMatch IdentifyGroup(const MeanVector& learning_group,
                         std::span<const GroupCandidate> observed_groups,
                         double delta,
                         AmbiguityPolicy policy = AmbiguityPolicy::kNearest);

struct Pairing {
  Index observed_id = 0;
  double difference = 0.0;
  bool accepted = false;
};

// Pairs learning position i with an observed user by sorted order; a pairing
// is accepted when its absolute difference is at most delta.
std::vector<Pairing> MatchWithinGroup(const MeanVector& learning_means,
                                      const MeanVector& observed_means,
                                      std::span<const Index> observed_user_ids,
                                      double delta);

enum class Adversary { kLearningData, kPerfectPrior };
enum class GraphKnowledge { kKnown, kReconstructed };

struct AttackConfig {
  double alpha = 1.0;
  double alpha_prime = 1.0;
  Index s = 1;
  double sigma = 1.0;
  double cov_threshold = 0.5;
  Adversary mode = Adversary::kLearningData;
  GraphKnowledge graph = GraphKnowledge::kReconstructed;
  AmbiguityPolicy ambiguity = AmbiguityPolicy::kNearest;
  Index target_user = 0;

  double alpha_pp() const { return std::min(alpha, alpha_prime); }
  void Validate() const;
};

struct StageSuccess {
  bool graph_exact = false;
  bool group_correct = false;
  bool individual_correct = false;
};

// Partial map from learning (true) user to estimated observed row.
using EstimatedPermutation = std::map<Index, Index>;

struct AttackResult {
  double delta = 0.0;
  ReconstructedGraph reconstructed_graph;
  Group learning_group;
  GroupMatch group_match;
  Group matched_observed_group;
  std::vector<Pairing> pairings;
  EstimatedPermutation estimated_perm;
  // |learning mean - observed mean| of each accepted pairing.
  std::map<Index, double> confidence;
  StageSuccess stage_success;
  bool scored = false;
};

// Runs graph stage, group identification and within-group matching for the
// target user's group. In perfect-prior mode the true means replace the
// learning averages. known_graph is the observed-space association graph and
// is required when cfg.graph == kKnown. Identity-space groups come from
// population->partition when given, else from the learning traces.
AttackResult RunAttack(const TraceMatrix& learning, const TraceMatrix& observed,
                       const UserPopulation* population, const AttackConfig& cfg,
                       const ReconstructedGraph* known_graph = nullptr);

// Fills stage_success against the hidden permutation.
void ScoreAttack(AttackResult& result, const UserPopulation& population,
                 const Permutation& truth, Index target_user);

// Y[pi_hat(u)][k].
double EstimateDataPoint(const TraceMatrix& observed,
                         const EstimatedPermutation& pi_hat, Index u, Index k);

}  // namespace deanon

#endif  // DEANON_ATTACK_HPP_
