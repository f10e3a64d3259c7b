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
#include "deanon/matching.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "deanon/error.hpp"
#include "deanon/random.hpp"

namespace deanon {
namespace {

Eigen::VectorXd Vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

Eigen::VectorXd RandomVector(Engine& engine, Index s) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd v(s);
  for (Index i = 0; i < s; ++i) v(i) = unit(engine);
  return v;
}

TEST(EmpiricalMeanVectorTest, ArithmeticMean) {
  TraceMatrix t;
  t.values.resize(1, 3);
  t.values << 1, 2, 3;
  const Index row[] = {0};
  EXPECT_EQ(EmpiricalMeanVector(t, row).values(0), 2.0);
}

TEST(EmpiricalMeanVectorTest, ConstantRowIsExact) {
  for (double c : {0.1, -3.7, 1e-9, 12345.678}) {
    TraceMatrix t;
    t.values = Eigen::MatrixXd::Constant(1, 37, c);
    const Index row[] = {0};
    EXPECT_EQ(EmpiricalMeanVector(t, row).values(0), c);
  }
}

TEST(EmpiricalMeanVectorTest, PreservesIndexOrder) {
  TraceMatrix t;
  t.values.resize(2, 2);
  t.values << 0, 0, 1, 3;
  const Index rows[] = {1, 0};
  EXPECT_EQ(EmpiricalMeanVector(t, rows).values, Vec({2.0, 0.0}));
}

TEST(EmpiricalMeanVectorTest, SourceFollowsRole) {
  TraceMatrix t;
  t.values = Eigen::MatrixXd::Zero(1, 1);
  t.role = TraceRole::kLearning;
  const Index row[] = {0};
  EXPECT_EQ(EmpiricalMeanVector(t, row).source, MeanSource::kLearning);
  t.role = TraceRole::kObserved;
  EXPECT_EQ(EmpiricalMeanVector(t, row).source, MeanSource::kObserved);
}

TEST(EmpiricalMeanVectorTest, IndexOutOfRange) {
  TraceMatrix t;
  t.values = Eigen::MatrixXd::Zero(2, 2);
  const Index rows[] = {2};
  try {
    EmpiricalMeanVector(t, rows);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIndexOutOfRange);
  }
}

TEST(PermInfDistanceTest, SelfDistanceIsZeroWithIdentity) {
  const Eigen::VectorXd u = Vec({0.3, -1.0, 2.0});
  const MatchAssignment a = PermInfDistance(u, u);
  EXPECT_EQ(a.distance, 0.0);
  EXPECT_EQ(a.perm, (std::vector<Index>{0, 1, 2}));
}

TEST(PermInfDistanceTest, SameMultisetSwapped) {
  const MatchAssignment a = PermInfDistance(Vec({0, 1}), Vec({1, 0}));
  EXPECT_EQ(a.distance, 0.0);
  EXPECT_EQ(a.perm, (std::vector<Index>{1, 0}));
}

TEST(PermInfDistanceTest, IdentityBeatsSwap) {
  // Brute force: identity gives max(0.1, 0.4) = 0.4, swap gives 0.9.
  const MatchAssignment a = PermInfDistance(Vec({0.0, 0.5}), Vec({0.1, 0.9}));
  EXPECT_DOUBLE_EQ(a.distance, 0.4);
  EXPECT_EQ(a.perm, (std::vector<Index>{0, 1}));
}

TEST(PermInfDistanceTest, TiesBrokenByOriginalIndex) {
  const MatchAssignment a = PermInfDistance(Vec({1.0, 1.0}), Vec({1.0, 1.0}));
  EXPECT_EQ(a.perm, (std::vector<Index>{0, 1}));
}

TEST(PermInfDistanceTest, LengthMismatch) {
  try {
    PermInfDistance(Vec({1.0}), Vec({1.0, 2.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}

TEST(PermInfDistanceTest, AcceptsEigenExpressions) {
  const Eigen::VectorXd u = Vec({0.0, 2.0, 5.0, 9.0});
  const Eigen::VectorXd v = Vec({6.0, 1.0, 0.0});
  EXPECT_EQ(PermInfDistance(u.head(3), v).distance, 1.0);
  EXPECT_EQ(PermInfDistance(v.array() + 0.5, v).distance, 0.5);
}

TEST(OracleTest, SingleElement) {
  const MatchAssignment a = BottleneckAssignmentOracle(Vec({0.25}), Vec({-0.5}));
  EXPECT_EQ(a.distance, 0.75);
}

TEST(OracleTest, ThreeElements) {
  // Pairs (0,0), (2,1), (5,6) in sorted order.
  const MatchAssignment a = BottleneckAssignmentOracle(Vec({0, 2, 5}), Vec({6, 1, 0}));
  EXPECT_EQ(a.distance, 1.0);
  EXPECT_EQ(PermInfDistance(Vec({0, 2, 5}), Vec({6, 1, 0})).distance, 1.0);
}

TEST(OracleTest, TooLarge) {
  const Eigen::VectorXd v = Eigen::VectorXd::Zero(8);
  try {
    BottleneckAssignmentOracle(v, v);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

TEST(MatchingPropertyTest, SortedMatchingEqualsOracle) {
  Engine engine = MakeEngine(2024);
  std::uniform_int_distribution<Index> size(1, 7);
  for (int iter = 0; iter < 3000; ++iter) {
    const Index s = size(engine);
    const Eigen::VectorXd u = RandomVector(engine, s);
    const Eigen::VectorXd v = RandomVector(engine, s);
    const MatchAssignment fast = PermInfDistance(u, v);
    const MatchAssignment slow = BottleneckAssignmentOracle(u, v);
    ASSERT_EQ(fast.distance, slow.distance);
    EXPECT_NEAR(PairedInfDistance(u, v, fast.perm), fast.distance, 1e-12);
    std::vector<Index> sorted = fast.perm;
    std::sort(sorted.begin(), sorted.end());
    for (Index i = 0; i < s; ++i) ASSERT_EQ(sorted[i], i);
  }
}

TEST(MatchingPropertyTest, OracleEquivalenceWithTiedValues) {
  Engine engine = MakeEngine(5);
  std::uniform_int_distribution<int> small(0, 3);
  for (int iter = 0; iter < 2000; ++iter) {
    const Index s = 2 + iter % 6;
    Eigen::VectorXd u(s), v(s);
    for (Index i = 0; i < s; ++i) {
      u(i) = small(engine) * 0.5;
      v(i) = small(engine) * 0.5;
    }
    ASSERT_EQ(PermInfDistance(u, v).distance,
              BottleneckAssignmentOracle(u, v).distance);
  }
}

TEST(MatchingPropertyTest, Pseudometric) {
  Engine engine = MakeEngine(77);
  for (int iter = 0; iter < 2000; ++iter) {
    const Index s = 1 + iter % 7;
    const Eigen::VectorXd u = RandomVector(engine, s);
    const Eigen::VectorXd v = RandomVector(engine, s);
    const Eigen::VectorXd w = RandomVector(engine, s);
    const double uv = PermInfDistance(u, v).distance;
    EXPECT_EQ(uv, PermInfDistance(v, u).distance);
    EXPECT_LE(PermInfDistance(u, w).distance,
              uv + PermInfDistance(v, w).distance + 1e-12);

    // Zero exactly on equal multisets.
    std::vector<Index> order(static_cast<std::size_t>(s));
    std::iota(order.begin(), order.end(), Index{0});
    std::shuffle(order.begin(), order.end(), engine);
    Eigen::VectorXd shuffled(s);
    for (Index i = 0; i < s; ++i) shuffled(i) = u(order[i]);
    EXPECT_LE(PermInfDistance(u, shuffled).distance, 1e-12);
    // Permutation invariance in the second argument.
    Eigen::VectorXd v_shuffled(s);
    for (Index i = 0; i < s; ++i) v_shuffled(i) = v(order[i]);
    EXPECT_EQ(PermInfDistance(u, v_shuffled).distance, uv);
    if (s > 0 && !u.isApprox(v)) EXPECT_GT(uv, 1e-12);
  }
}

}  // namespace
}  // namespace deanon
