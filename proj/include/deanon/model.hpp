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
#ifndef DEANON_MODEL_HPP_
#define DEANON_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "deanon/random.hpp"

namespace deanon {

using Index = Eigen::Index;

// A partition of {0..n-1} into groups; each group is sorted ascending.
using Group = std::vector<Index>;
using Partition = std::vector<Group>;

// Density from which per-user means are drawn. The density is bounded above by
// density_bound(), the constant the collision bounds are stated in terms of.
class MeanDistribution {
 public:
  enum class Kind { kUniform, kTruncatedNormal };

  static MeanDistribution Uniform(double a, double b);
  static MeanDistribution TruncatedNormal(double center, double spread,
                                          double a, double b);

  Kind kind() const { return kind_; }
  double lower() const { return a_; }
  double upper() const { return b_; }
  double center() const { return center_; }
  double spread() const { return spread_; }

  double density(double x) const;
  // Supremum of density().
  double density_bound() const;
  double Sample(Engine& engine) const;

 private:
  MeanDistribution(Kind kind, double center, double spread, double a, double b);
  double NormalizingMass() const;

  Kind kind_;
  double center_;
  double spread_;
  double a_;
  double b_;
};

// Hidden ground truth: means, shared sigma, group structure and the
// equicorrelated block covariance.
struct UserPopulation {
  Eigen::VectorXd means;
  double sigma = 1.0;
  double rho = 0.0;
  Partition partition;
  Eigen::MatrixXd covariance;
  // Lower Cholesky factor of covariance, used for trace synthesis.
  Eigen::MatrixXd factor;

  Index n() const { return means.size(); }
  // Index into partition of the group holding user u.
  std::size_t GroupOf(Index u) const;
};

enum class TraceRole { kLearning, kActual, kObserved };

std::string_view TraceRoleName(TraceRole role);

// n x T samples; row u is one user's trace.
struct TraceMatrix {
  Eigen::MatrixXd values;
  TraceRole role = TraceRole::kActual;

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }
};

// forward[u] = Pi(u): the observed row holding actual user u.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<Index> forward);

  static Permutation Identity(Index n);
  static Permutation Random(Index n, Engine& engine);

  Index size() const { return static_cast<Index>(forward_.size()); }
  Index operator()(Index u) const { return forward_[u]; }
  Index Inverse(Index v) const { return inverse_[v]; }
  std::span<const Index> forward() const { return forward_; }
  std::span<const Index> inverse() const { return inverse_; }

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<Index> forward_;
  std::vector<Index> inverse_;
};

// Equal-size groups {0..s-1}, {s..2s-1}, ... Requires n % s == 0, 0 <= rho < 1,
// sigma > 0.
UserPopulation SamplePopulation(Index n, Index s,
                                const MeanDistribution& mean_dist, double sigma,
                                double rho, std::uint64_t seed);

// Mixed-size groups laid out consecutively in the order given.
UserPopulation SamplePopulationMixed(std::span<const Index> group_sizes,
                                     const MeanDistribution& mean_dist,
                                     double sigma, double rho,
                                     std::uint64_t seed);

// Block equicorrelation matrix: sigma^2 on the diagonal, rho*sigma^2 within a
// group, zero across groups.
Eigen::MatrixXd BlockCovariance(const Partition& partition, Index n,
                                double sigma, double rho);

// Columns are i.i.d. N(means, covariance).
TraceMatrix GenerateTraces(const UserPopulation& pop, Index length,
                           TraceRole role, std::uint64_t seed);

struct Anonymized {
  TraceMatrix observed;
  Permutation permutation;
};

// Y row Pi(u) = X row u, Pi uniform over all n! permutations.
Anonymized Anonymize(const TraceMatrix& actual, std::uint64_t seed);
Anonymized Anonymize(const TraceMatrix& actual, const Permutation& permutation);

}  // namespace deanon

#endif  // DEANON_MODEL_HPP_
