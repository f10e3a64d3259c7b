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
#ifndef DEANON_MATCHING_HPP_
#define DEANON_MATCHING_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "deanon/error.hpp"
#include "deanon/model.hpp"

namespace deanon {

enum class MeanSource { kLearning, kObserved, kTrue };

// Per-user averages of one group (or the true means of that group).
struct MeanVector {
  Eigen::VectorXd values;
  MeanSource source = MeanSource::kObserved;

  Index size() const { return values.size(); }
};

// perm[i] is the index of the V entry paired with U entry i.
struct MatchAssignment {
  double distance = 0.0;
  std::vector<Index> perm;
};

// Row means of the selected rows, in the order given.
MeanVector EmpiricalMeanVector(const TraceMatrix& traces,
                               std::span<const Index> user_indices);

// max_i |u_i - v_perm(i)|.
template <typename DerivedU, typename DerivedV>
double PairedInfDistance(const Eigen::DenseBase<DerivedU>& u,
                         const Eigen::DenseBase<DerivedV>& v,
                         std::span<const Index> perm) {
  double worst = 0.0;
  for (Index i = 0; i < u.size(); ++i) {
    worst = std::max(worst, std::abs(u(i) - v(perm[i])));
  }
  return worst;
}

namespace internal {

template <typename Derived>
std::vector<Index> StableOrder(const Eigen::DenseBase<Derived>& x) {
  std::vector<Index> order(static_cast<std::size_t>(x.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&x](Index a, Index b) { return x(a) < x(b); });
  return order;
}

template <typename DerivedU, typename DerivedV>
void CheckSameLength(const Eigen::DenseBase<DerivedU>& u,
                     const Eigen::DenseBase<DerivedV>& v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "mean vectors must have the same length");
  }
}

}  // namespace internal

// Minimum over all permutations of the L-infinity difference, solved by
// pairing both vectors in sorted order (exact min-max matching on the line).
// Ties in either vector are broken by original index.
template <typename DerivedU, typename DerivedV>
MatchAssignment PermInfDistance(const Eigen::DenseBase<DerivedU>& u,
                                const Eigen::DenseBase<DerivedV>& v) {
  internal::CheckSameLength(u, v);
  const std::vector<Index> order_u = internal::StableOrder(u);
  const std::vector<Index> order_v = internal::StableOrder(v);
  MatchAssignment result;
  result.perm.resize(order_u.size());
  for (std::size_t k = 0; k < order_u.size(); ++k) {
    result.perm[order_u[k]] = order_v[k];
  }
  result.distance = PairedInfDistance(u, v, result.perm);
  return result;
}

inline constexpr Index kMaxOracleSize = 7;

// Exhaustive search over all s! permutations; the first minimizer in
// lexicographic order wins. Test oracle for PermInfDistance.
template <typename DerivedU, typename DerivedV>
MatchAssignment BottleneckAssignmentOracle(const Eigen::DenseBase<DerivedU>& u,
                                           const Eigen::DenseBase<DerivedV>& v) {
  internal::CheckSameLength(u, v);
  if (u.size() > kMaxOracleSize) {
    throw Error(ErrorCode::kTooLarge, "oracle enumerates at most 7! orders");
  }
  std::vector<Index> perm(static_cast<std::size_t>(u.size()));
  std::iota(perm.begin(), perm.end(), Index{0});
  MatchAssignment best{PairedInfDistance(u, v, perm), perm};
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double d = PairedInfDistance(u, v, perm);
    if (d < best.distance) best = {d, perm};
  }
  return best;
}

inline MatchAssignment PermInfDistance(const MeanVector& u,
                                       const MeanVector& v) {
  return PermInfDistance(u.values, v.values);
}

inline MatchAssignment BottleneckAssignmentOracle(const MeanVector& u,
                                                  const MeanVector& v) {
  return BottleneckAssignmentOracle(u.values, v.values);
}

}  // namespace deanon

#endif  // DEANON_MATCHING_HPP_
