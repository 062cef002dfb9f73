// Copyright 2026 The locpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "locpriv/metrics.h"

#include <cmath>
#include <cstdlib>
#include <map>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace locpriv {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr int64_t kMin = std::numeric_limits<int64_t>::min();
constexpr int64_t kMax = std::numeric_limits<int64_t>::max();

DiscretePmf Build(MechanismKind kind, double rho, double alpha,
                  int64_t target) {
  return *BuildPmf(kind, {.rho = rho, .alpha = alpha}, {}, target);
}

oracle::Shape ShapeOf(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kQuery1:
      return oracle::Shape::kQuery1;
    case MechanismKind::kQuery2:
      return oracle::Shape::kQuery2;
    case MechanismKind::kGeometricBaseline:
      return oracle::Shape::kGeometric;
  }
  return oracle::Shape::kGeometric;
}

TEST(ExpectedDisplacementTest, WorkedExamples) {
  EXPECT_NEAR(ExpectedDisplacement(Build(MechanismKind::kQuery1, kLn2, 4, 10)),
              34.0 / 33.0, 1e-12);
  EXPECT_NEAR(ExpectedDisplacement(
                  Build(MechanismKind::kGeometricBaseline, kLn2, 0, 0)),
              4.0 / 3.0, 1e-12);
}

TEST(ExpectedDisplacementTest, StrongPrivacyParameterIsNearZero) {
  EXPECT_LT(ExpectedDisplacement(Build(MechanismKind::kQuery1, 50, 4, 3)),
            1e-20);
  EXPECT_LT(ExpectedDisplacement(
                Build(MechanismKind::kGeometricBaseline, 50, 0, 0)),
            1e-20);
}

TEST(ExpectedDisplacementTest, MatchesBruteForce) {
  for (MechanismKind kind :
       {MechanismKind::kQuery1, MechanismKind::kQuery2,
        MechanismKind::kGeometricBaseline}) {
    for (double rho : {0.2, kLn2, 1.5}) {
      for (int64_t target : {2, -7}) {
        const double oracle = oracle::Expectation(
            oracle::Pmf(ShapeOf(kind), rho, 3, target),
            [](int64_t x) { return std::fabs(static_cast<double>(x)); });
        EXPECT_NEAR(ExpectedDisplacement(Build(kind, rho, 3, target)), oracle,
                    1e-10 * std::max(1.0, oracle))
            << KindName(kind) << " rho=" << rho << " target=" << target;
      }
    }
  }
}

TEST(ExpectedDistanceErrorTest, MatchesBruteForce) {
  for (MechanismKind kind :
       {MechanismKind::kQuery1, MechanismKind::kQuery2,
        MechanismKind::kGeometricBaseline}) {
    for (double rho : {0.3, kLn2, 2.0}) {
      for (int64_t target : {1, 5, -12}) {
        const double d0 = std::fabs(static_cast<double>(target));
        const double oracle = oracle::Expectation(
            oracle::Pmf(ShapeOf(kind), rho, 2.5, target), [&](int64_t x) {
              return std::fabs(std::fabs(static_cast<double>(target - x)) -
                               d0);
            });
        EXPECT_NEAR(ExpectedDistanceError(Build(kind, rho, 2.5, target),
                                          target),
                    oracle, 1e-10 * std::max(1.0, oracle))
            << KindName(kind) << " rho=" << rho << " target=" << target;
      }
    }
  }
}

TEST(ExpectedDistanceErrorTest, TwinPeakBeatsBaseline) {
  for (double rho : {kLn2, 1.0}) {
    for (double alpha : {2.0, 4.0}) {
      for (int64_t length : {3, 10, 20}) {
        const double q2 = ExpectedDistanceError(
            Build(MechanismKind::kQuery2, rho, alpha, length), length);
        const double base = ExpectedDistanceError(
            Build(MechanismKind::kGeometricBaseline, rho, 0, 0), length);
        EXPECT_LT(q2, base) << "rho=" << rho << " alpha=" << alpha
                            << " L=" << length;
      }
    }
  }
}

TEST(DirectionalMassRatioTest, IsSideSuppression) {
  EXPECT_NEAR(*DirectionalMassRatio(Build(MechanismKind::kQuery1, kLn2, 4, 10)),
              16.0, 1e-9);
  EXPECT_NEAR(*DirectionalMassRatio(Build(MechanismKind::kQuery1, kLn2, 0, -3)),
              1.0, 1e-12);
  EXPECT_NEAR(*DirectionalMassRatio(Build(MechanismKind::kQuery1, kLn2, 8, -3)),
              256.0, 1e-7);
}

TEST(DirectionalMassRatioTest, RejectsOtherKinds) {
  EXPECT_EQ(DirectionalMassRatio(Build(MechanismKind::kQuery2, kLn2, 4, 10))
                .status()
                .code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(DirectionalMassRatio(
                   Build(MechanismKind::kGeometricBaseline, kLn2, 0, 0))
                   .ok());
}

TEST(ToleranceLimitsTest, WorkedExamples) {
  ToleranceRegion region =
      *ComputeToleranceLimits(*PoiPrior::Create({3, 10, -5}));
  EXPECT_DOUBLE_EQ(region.m_minus, -1.0);
  EXPECT_DOUBLE_EQ(region.m_plus, 2.5);
  EXPECT_TRUE(region.lower_open);
  EXPECT_TRUE(region.upper_open);
  EXPECT_TRUE(region.Contains(0));
  EXPECT_TRUE(region.Contains(2.4));
  EXPECT_FALSE(region.Contains(2.5));
  EXPECT_FALSE(region.Contains(-1));

  ToleranceRegion same_side = *ComputeToleranceLimits(*PoiPrior::Create({3, 5}));
  EXPECT_DOUBLE_EQ(same_side.m_plus, 4.0);
  EXPECT_TRUE(std::isinf(same_side.m_minus));

  ToleranceRegion single = *ComputeToleranceLimits(*PoiPrior::Single(4));
  EXPECT_TRUE(std::isinf(single.m_minus));
  EXPECT_TRUE(std::isinf(single.m_plus));
}

TEST(ToleranceLimitsTest, EquidistantPoisAreRejected) {
  EXPECT_EQ(ComputeToleranceLimits(*PoiPrior::Create({4, -4, 9}))
                .status()
                .code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(ToleranceLimitsTest, MatchesBruteScanOnRandomConfigs) {
  std::mt19937_64 engine(20261014);
  std::uniform_int_distribution<int64_t> count_dist(1, 5);
  std::uniform_int_distribution<int64_t> poi_dist(-20, 20);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int64_t> pois;
    std::set<int64_t> used_abs;
    const int64_t count = count_dist(engine);
    while (static_cast<int64_t>(pois.size()) < count) {
      const int64_t x = poi_dist(engine);
      if (x == 0 || used_abs.contains(std::llabs(x))) continue;
      used_abs.insert(std::llabs(x));
      pois.push_back(x);
    }
    int64_t reach_abs = 0;
    for (int64_t x : pois) reach_abs = std::max<int64_t>(reach_abs, std::llabs(x));
    const double reach = 10.0 * static_cast<double>(reach_abs);

    double upper = std::numeric_limits<double>::infinity();
    for (double z = 0.25; z <= reach; z += 0.25) {
      if (!oracle::RankingPreserved(z, pois)) {
        upper = z;
        break;
      }
    }
    double lower = -std::numeric_limits<double>::infinity();
    for (double z = -0.25; z >= -reach; z -= 0.25) {
      if (!oracle::RankingPreserved(z, pois)) {
        lower = z;
        break;
      }
    }
    absl::StatusOr<ToleranceRegion> region =
        ComputeToleranceLimits(*PoiPrior::Create(pois));
    ASSERT_TRUE(region.ok()) << region.status();
    EXPECT_EQ(region->m_plus, upper) << "trial " << trial;
    EXPECT_EQ(region->m_minus, lower) << "trial " << trial;
  }
}

TEST(RankingPreservationMassTest, WorkedExamples) {
  const PoiPrior prior = *PoiPrior::Create({3, 10, -5});
  EXPECT_NEAR(*RankingPreservationMass(
                  Build(MechanismKind::kQuery1, kLn2, 4, 3), prior),
              28.0 / 33.0, 1e-12);
  const double base = *RankingPreservationMass(
      Build(MechanismKind::kGeometricBaseline, kLn2, 0, 0), prior);
  EXPECT_NEAR(base, 7.0 / 12.0, 1e-12);
  EXPECT_LT(base, 28.0 / 33.0);
  EXPECT_NEAR(*RankingPreservationMass(
                  Build(MechanismKind::kQuery1, 50, 4, 3), prior),
              1.0, 1e-15);
}

TEST(RankingPreservationMassTest, MatchesBruteForceAndIsAProbability) {
  const std::vector<std::vector<int64_t>> configs = {
      {3, 10, -5}, {-2, 7}, {6}, {1, -3, 8, -11}, {-9, -4, 13}};
  for (const std::vector<int64_t>& pois : configs) {
    const PoiPrior prior = *PoiPrior::Create(pois);
    for (MechanismKind kind :
         {MechanismKind::kQuery1, MechanismKind::kQuery2,
          MechanismKind::kGeometricBaseline}) {
      for (double rho : {0.1, kLn2, 3.0}) {
        const double got =
            *RankingPreservationMass(Build(kind, rho, 2, prior.target()), prior);
        const double want = oracle::Expectation(
            oracle::Pmf(ShapeOf(kind), rho, 2, prior.target()),
            [&](int64_t x) {
              return oracle::RankingPreserved(static_cast<double>(x), pois)
                         ? 1.0
                         : 0.0;
            });
        EXPECT_NEAR(got, want, 1e-10) << KindName(kind) << " rho=" << rho;
        EXPECT_GE(got, 0.0);
        EXPECT_LE(got, 1.0);
      }
    }
  }
}

TEST(NearestPoiPreservationMassTest, WorkedExample) {
  const PoiPrior prior = *PoiPrior::Create({3, 10, -5});
  const DiscretePmf pmf = Build(MechanismKind::kQuery1, kLn2, 4, 3);
  const double got = *NearestPoiPreservationMass(pmf, prior);
  EXPECT_NEAR(got, MassOnRange(pmf, 0, 6), 1e-15);
  EXPECT_NEAR(got, 0.9621, 5e-5);
}

TEST(NearestPoiPreservationMassTest, MatchesBruteForce) {
  const std::vector<std::vector<int64_t>> configs = {
      {3, 10, -5}, {-2, 7}, {6}, {1, -4, 8}, {-9, -4, 13}};
  for (const std::vector<int64_t>& pois : configs) {
    const PoiPrior prior = *PoiPrior::Create(pois);
    std::vector<int64_t> sorted = prior.pois();
    auto nearest = [&](double z) {
      int64_t best = sorted.front();
      for (int64_t p : sorted) {
        if (std::fabs(z - p) < std::fabs(z - best)) best = p;
      }
      return best;
    };
    const int64_t truth = nearest(0.0);
    for (MechanismKind kind :
         {MechanismKind::kQuery1, MechanismKind::kQuery2,
          MechanismKind::kGeometricBaseline}) {
      const double got = *NearestPoiPreservationMass(
          Build(kind, 0.5, 3, prior.target()), prior);
      const double want = oracle::Expectation(
          oracle::Pmf(ShapeOf(kind), 0.5, 3, prior.target()), [&](int64_t x) {
            return nearest(static_cast<double>(x)) == truth ? 1.0 : 0.0;
          });
      EXPECT_NEAR(got, want, 1e-10) << KindName(kind);
    }
  }
}

TEST(ExpectedNearestDistanceErrorTest, MatchesBruteForce) {
  const std::vector<std::vector<int64_t>> configs = {
      {3, 10, -5}, {-2, 7}, {6}, {1, -4, 8}};
  for (const std::vector<int64_t>& pois : configs) {
    const PoiPrior prior = *PoiPrior::Create(pois);
    auto nearest_distance = [&](double z) {
      double best = std::numeric_limits<double>::infinity();
      for (int64_t p : pois) best = std::min(best, std::fabs(z - p));
      return best;
    };
    const double d0 = nearest_distance(0.0);
    for (MechanismKind kind :
         {MechanismKind::kQuery1, MechanismKind::kQuery2,
          MechanismKind::kGeometricBaseline}) {
      const double got = ExpectedNearestDistanceError(
          Build(kind, 0.4, 2, prior.target()), prior);
      const double want = oracle::Expectation(
          oracle::Pmf(ShapeOf(kind), 0.4, 2, prior.target()), [&](int64_t x) {
            return std::fabs(nearest_distance(static_cast<double>(x)) - d0);
          });
      EXPECT_NEAR(got, want, 1e-10 * std::max(1.0, want)) << KindName(kind);
    }
  }
  const DiscretePmf single = Build(MechanismKind::kQuery2, kLn2, 4, 10);
  EXPECT_NEAR(ExpectedNearestDistanceError(single, *PoiPrior::Single(10)),
              ExpectedDistanceError(single, 10), 1e-14);
}

TEST(MassOnRangeTest, CoversSupportAndTails) {
  const DiscretePmf pmf = Build(MechanismKind::kGeometricBaseline, kLn2, 0, 0);
  EXPECT_NEAR(MassOnRange(pmf, 0, 0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(MassOnRange(pmf, kMin, kMax), 1.0, 1e-12);
  EXPECT_NEAR(MassOnRange(pmf, 1, kMax), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(MassOnRange(pmf, kMin, -1), 1.0 / 3.0, 1e-12);
  EXPECT_EQ(MassOnRange(pmf, 5, 4), 0.0);
  // Entirely beyond the stored support.
  const int64_t far = pmf.hi() + 3;
  const double want = static_cast<double>(
      oracle::Weight(oracle::Shape::kGeometric, kLn2, 0, 0, far) / 3.0L * 2.0L);
  EXPECT_NEAR(MassOnRange(pmf, far, kMax) / want, 1.0, 1e-9);
}

TEST(MassOnRangeTest, MatchesBruteForceOnWindows) {
  const DiscretePmf pmf = Build(MechanismKind::kQuery2, 0.7, 1.5, -4);
  const std::map<int64_t, double> brute =
      oracle::Pmf(oracle::Shape::kQuery2, 0.7, 1.5, -4);
  for (auto [from, to] : std::vector<std::pair<int64_t, int64_t>>{
           {-8, 0}, {-3, 3}, {-20, -9}, {1, 30}}) {
    double want = 0.0;
    for (int64_t x = from; x <= to; ++x) want += brute.at(x);
    EXPECT_NEAR(MassOnRange(pmf, from, to), want, 1e-12)
        << "[" << from << ", " << to << "]";
  }
}

}  // namespace
}  // namespace locpriv
