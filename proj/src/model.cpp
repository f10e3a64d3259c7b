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
#include "deanon/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Cholesky>

#include "deanon/error.hpp"

namespace deanon {
namespace {

double StdNormalPdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double StdNormalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

void CheckGenerationParams(double sigma, double rho) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kInvalidConfig, "sigma must be positive");
  }
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "rho must lie in [0, 1)");
  }
}

UserPopulation BuildPopulation(Partition partition, Index n,
                               const MeanDistribution& mean_dist, double sigma,
                               double rho, std::uint64_t seed) {
  UserPopulation pop;
  pop.sigma = sigma;
  pop.rho = rho;
  pop.partition = std::move(partition);
  pop.means.resize(n);
  Engine engine = MakeEngine(seed);
  for (Index u = 0; u < n; ++u) pop.means(u) = mean_dist.Sample(engine);
  pop.covariance = BlockCovariance(pop.partition, n, sigma, rho);
  Eigen::LLT<Eigen::MatrixXd> llt(pop.covariance);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kInvalidConfig, "covariance is not positive definite");
  }
  pop.factor = llt.matrixL();
  return pop;
}

}  // namespace

MeanDistribution::MeanDistribution(Kind kind, double center, double spread,
                                   double a, double b)
    : kind_(kind), center_(center), spread_(spread), a_(a), b_(b) {}

MeanDistribution MeanDistribution::Uniform(double a, double b) {
  if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::kInvalidConfig, "uniform requires finite a < b");
  }
  return MeanDistribution(Kind::kUniform, 0.5 * (a + b), b - a, a, b);
}

MeanDistribution MeanDistribution::TruncatedNormal(double center, double spread,
                                                   double a, double b) {
  if (!(spread > 0.0) || !(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::kInvalidConfig,
                "truncated normal requires spread > 0 and finite a < b");
  }
  MeanDistribution dist(Kind::kTruncatedNormal, center, spread, a, b);
  if (!(dist.NormalizingMass() > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "truncation interval carries no probability mass");
  }
  return dist;
}

double MeanDistribution::NormalizingMass() const {
  return StdNormalCdf((b_ - center_) / spread_) -
         StdNormalCdf((a_ - center_) / spread_);
}

double MeanDistribution::density(double x) const {
  if (x < a_ || x > b_) return 0.0;
  if (kind_ == Kind::kUniform) return 1.0 / (b_ - a_);
  return StdNormalPdf((x - center_) / spread_) / (spread_ * NormalizingMass());
}

double MeanDistribution::density_bound() const {
  if (kind_ == Kind::kUniform) return 1.0 / (b_ - a_);
  return density(std::clamp(center_, a_, b_));
}

double MeanDistribution::Sample(Engine& engine) const {
  if (kind_ == Kind::kUniform) {
    return std::uniform_real_distribution<double>(a_, b_)(engine);
  }
  // Rejection from the untruncated normal when the interval holds most of the
  // mass; otherwise rejection from the uniform envelope under density_bound().
  if (NormalizingMass() > 0.25) {
    std::normal_distribution<double> normal(center_, spread_);
    for (;;) {
      const double x = normal(engine);
      if (x >= a_ && x <= b_) return x;
    }
  }
  std::uniform_real_distribution<double> uniform(a_, b_);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double bound = density_bound();
  for (;;) {
    const double x = uniform(engine);
    if (unit(engine) * bound <= density(x)) return x;
  }
}

std::size_t UserPopulation::GroupOf(Index u) const {
  for (std::size_t g = 0; g < partition.size(); ++g) {
    if (std::binary_search(partition[g].begin(), partition[g].end(), u)) {
      return g;
    }
  }
  throw Error(ErrorCode::kIndexOutOfRange,
              "user " + std::to_string(u) + " is in no group");
}

std::string_view TraceRoleName(TraceRole role) {
  switch (role) {
    case TraceRole::kLearning:
      return "learning";
    case TraceRole::kActual:
      return "actual";
    case TraceRole::kObserved:
      return "observed";
  }
  return "unknown";
}

Permutation::Permutation(std::vector<Index> forward)
    : forward_(std::move(forward)), inverse_(forward_.size(), -1) {
  const auto n = static_cast<Index>(forward_.size());
  for (Index u = 0; u < n; ++u) {
    const Index v = forward_[u];
    if (v < 0 || v >= n || inverse_[v] != -1) {
      throw Error(ErrorCode::kInvalidConfig, "forward map is not a bijection");
    }
    inverse_[v] = u;
  }
}

Permutation Permutation::Identity(Index n) {
  std::vector<Index> forward(static_cast<std::size_t>(n));
  std::iota(forward.begin(), forward.end(), Index{0});
  return Permutation(std::move(forward));
}

Permutation Permutation::Random(Index n, Engine& engine) {
  std::vector<Index> forward(static_cast<std::size_t>(n));
  std::iota(forward.begin(), forward.end(), Index{0});
  std::shuffle(forward.begin(), forward.end(), engine);
  return Permutation(std::move(forward));
}

Eigen::MatrixXd BlockCovariance(const Partition& partition, Index n,
                                double sigma, double rho) {
  const double variance = sigma * sigma;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
  for (const Group& group : partition) {
    for (Index u : group) {
      for (Index v : group) cov(u, v) = (u == v) ? variance : rho * variance;
    }
  }
  return cov;
}

UserPopulation SamplePopulation(Index n, Index s,
                                const MeanDistribution& mean_dist, double sigma,
                                double rho, std::uint64_t seed) {
  if (n < 1 || s < 1 || n % s != 0) {
    throw Error(ErrorCode::kInvalidConfig,
                "n must be a positive multiple of the group size s");
  }
  std::vector<Index> sizes(static_cast<std::size_t>(n / s), s);
  return SamplePopulationMixed(sizes, mean_dist, sigma, rho, seed);
}

UserPopulation SamplePopulationMixed(std::span<const Index> group_sizes,
                                     const MeanDistribution& mean_dist,
                                     double sigma, double rho,
                                     std::uint64_t seed) {
  CheckGenerationParams(sigma, rho);
  Partition partition;
  Index next = 0;
  for (Index size : group_sizes) {
    if (size < 1) {
      throw Error(ErrorCode::kInvalidConfig, "group sizes must be positive");
    }
    Group group(static_cast<std::size_t>(size));
    std::iota(group.begin(), group.end(), next);
    next += size;
    partition.push_back(std::move(group));
  }
  if (next == 0) {
    throw Error(ErrorCode::kInvalidConfig, "population must be nonempty");
  }
  return BuildPopulation(std::move(partition), next, mean_dist, sigma, rho,
                         seed);
}

TraceMatrix GenerateTraces(const UserPopulation& pop, Index length,
                           TraceRole role, std::uint64_t seed) {
  if (length < 1) {
    throw Error(ErrorCode::kInvalidConfig, "trace length must be at least 1");
  }
  Engine engine = MakeEngine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd z(pop.n(), length);
  for (Index k = 0; k < length; ++k) {
    for (Index u = 0; u < pop.n(); ++u) z(u, k) = normal(engine);
  }
  TraceMatrix traces;
  traces.role = role;
  traces.values = pop.factor.triangularView<Eigen::Lower>() * z;
  traces.values.colwise() += pop.means;
  return traces;
}

Anonymized Anonymize(const TraceMatrix& actual, std::uint64_t seed) {
  Engine engine = MakeEngine(seed);
  return Anonymize(actual, Permutation::Random(actual.rows(), engine));
}

Anonymized Anonymize(const TraceMatrix& actual, const Permutation& permutation) {
  if (actual.role != TraceRole::kActual) {
    throw Error(ErrorCode::kInvalidConfig, "anonymize expects the actual set");
  }
  if (permutation.size() != actual.rows()) {
    throw Error(ErrorCode::kLengthMismatch,
                "permutation size differs from the number of users");
  }
  Anonymized out;
  out.permutation = permutation;
  out.observed.role = TraceRole::kObserved;
  out.observed.values.resize(actual.rows(), actual.cols());
  for (Index u = 0; u < actual.rows(); ++u) {
    out.observed.values.row(permutation(u)) = actual.values.row(u);
  }
  return out;
}

}  // namespace deanon
