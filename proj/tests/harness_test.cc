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

#include "locpriv/harness.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "locpriv/metrics.h"
#include "locpriv/pmf.h"

namespace locpriv {
namespace {

using ::testing::HasSubstr;

constexpr double kLn2 = std::numbers::ln2;

Scenario ThreePoiScenario(int64_t n, uint64_t seed) {
  return {.id = "three",
          .user_coord = 0.0,
          .pois_abs = {3, 10, -5},
          .query = MechanismKind::kQuery1,
          .params = {.rho = kLn2, .alpha = 4},
          .grid = {},
          .n_samples = n,
          .seed = seed};
}

TEST(LbsOracleTest, Examples) {
  const std::vector<double> pois = {3, 10, -5};
  NearestPoi nearest = *LbsOracle(0.0, pois);
  EXPECT_EQ(nearest.poi, 3);
  EXPECT_EQ(nearest.distance, 3);
  nearest = *LbsOracle(7.0, pois);
  EXPECT_EQ(nearest.poi, 10);
  EXPECT_EQ(nearest.distance, 3);
  // Equidistant: the smaller coordinate wins.
  nearest = *LbsOracle(-1.0, pois);
  EXPECT_EQ(nearest.poi, -5);
  EXPECT_EQ(nearest.distance, 4);
}

TEST(LbsOracleTest, EmptyIsError) {
  EXPECT_EQ(LbsOracle(0.0, {}).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(RunScenarioTest, ThreePoiRatesMatchExpectations) {
  constexpr int64_t kSamples = 1'000'000;
  absl::StatusOr<SimulationReport> report =
      RunScenario(ThreePoiScenario(kSamples, 7));
  ASSERT_TRUE(report.ok()) << report.status();
  ASSERT_TRUE(report->ranking_preservation_rate.has_value());
  EXPECT_NEAR(*report->ranking_preservation_rate, 28.0 / 33.0, 0.002);
  EXPECT_NEAR(*report->expected_ranking_preservation, 28.0 / 33.0, 1e-12);

  const double nearest = report->expected_nearest_poi_preservation;
  const double sigma = std::sqrt(nearest * (1 - nearest) / kSamples);
  EXPECT_NEAR(report->nearest_poi_preservation_rate, nearest, 3 * sigma);

  const DiscretePmf pmf =
      *BuildPmf(MechanismKind::kQuery1, {.rho = kLn2, .alpha = 4}, {}, 3);
  double second = 0.0;
  for (int64_t x = pmf.lo(); x <= pmf.hi(); ++x) {
    second += pmf.Mass(x) * static_cast<double>(x * x);
  }
  const double mean = report->expected_displacement;
  EXPECT_NEAR(mean, 34.0 / 33.0, 1e-12);
  const double sd = std::sqrt((second - mean * mean) / kSamples);
  EXPECT_NEAR(report->mean_displacement, mean, 3 * sd);
  EXPECT_NEAR(report->empirical_epsilon, 5 * kLn2, 1e-9);
  EXPECT_EQ(report->target_offset, 3);
  EXPECT_EQ(report->sample_count, kSamples);
}

TEST(RunScenarioTest, StrongPrivacyParameterKeepsEverything) {
  Scenario s = ThreePoiScenario(10'000, 1);
  s.params.rho = 50;
  absl::StatusOr<SimulationReport> report = RunScenario(s);
  ASSERT_TRUE(report.ok());
  EXPECT_EQ(report->nearest_poi_preservation_rate, 1.0);
  EXPECT_EQ(*report->ranking_preservation_rate, 1.0);
  EXPECT_EQ(report->mean_abs_distance_error, 0.0);
  EXPECT_EQ(report->mean_displacement, 0.0);
}

TEST(RunScenarioTest, SameSeedSameReport) {
  const Scenario s = ThreePoiScenario(20'000, 99);
  EXPECT_EQ(RunScenario(s)->ToJson().dump(), RunScenario(s)->ToJson().dump());
  Scenario other = s;
  other.seed = 100;
  EXPECT_NE(RunScenario(s)->mean_displacement,
            RunScenario(other)->mean_displacement);
}

TEST(RunScenarioTest, MetersScaleWithDelta) {
  Scenario s = ThreePoiScenario(1000, 5);
  s.user_coord = 100.0;
  s.pois_abs = {130, 200, 50};
  s.grid.delta = 10.0;
  absl::StatusOr<SimulationReport> report = RunScenario(s);
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_EQ(report->target_offset, 3);
  EXPECT_NEAR(report->expected_displacement, 10 * 34.0 / 33.0, 1e-10);
  EXPECT_EQ(report->poi_snap_error, 0.0);
}

TEST(CompareMechanismsTest, TwinPeakWinsDistanceErrorBaselineWinsEpsilon) {
  const Scenario s{.id = "q2",
                   .user_coord = 0.0,
                   .pois_abs = {10},
                   .query = MechanismKind::kQuery2,
                   .params = {.rho = kLn2, .alpha = 4},
                   .grid = {},
                   .n_samples = 200'000,
                   .seed = 3};
  absl::StatusOr<Comparison> comparison = CompareMechanisms(s);
  ASSERT_TRUE(comparison.ok()) << comparison.status();
  EXPECT_EQ(comparison->mechanism.mechanism, MechanismKind::kQuery2);
  EXPECT_EQ(comparison->baseline.mechanism,
            MechanismKind::kGeometricBaseline);
  const nlohmann::json json = comparison->ToJson();
  EXPECT_EQ(json["winners"]["mean_abs_distance_error"], "mechanism");
  EXPECT_EQ(json["winners"]["empirical_epsilon"], "baseline");
  EXPECT_LT(comparison->mechanism.expected_distance_error,
            comparison->baseline.expected_distance_error);
  EXPECT_NEAR(comparison->baseline.empirical_epsilon, kLn2, 1e-9);
}

TEST(CompareMechanismsTest, ZeroAlphaQuery1MatchesBaseline) {
  Scenario s = ThreePoiScenario(50'000, 11);
  s.params.alpha = 0;
  absl::StatusOr<Comparison> comparison = CompareMechanisms(s);
  ASSERT_TRUE(comparison.ok());
  const nlohmann::json deltas = comparison->ToJson()["deltas"];
  for (const auto& [name, value] : deltas.items()) {
    EXPECT_NEAR(value.get<double>(), 0.0, 1e-12) << name;
  }
}

TEST(CompareMechanismsTest, Query1DisplacementDelta) {
  absl::StatusOr<Comparison> comparison =
      CompareMechanisms(ThreePoiScenario(10, 1));
  ASSERT_TRUE(comparison.ok());
  EXPECT_NEAR(comparison->mechanism.expected_displacement -
                  comparison->baseline.expected_displacement,
              34.0 / 33.0 - 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(34.0 / 33.0 - 4.0 / 3.0, -0.303, 5e-4);
}

TEST(ScenarioFromJsonTest, ParsesRhoAndEpsilon) {
  nlohmann::json json = {{"id", "a"},
                         {"user_coord", 0.0},
                         {"pois_abs", {3, 10, -5}},
                         {"query", "q1"},
                         {"params", {{"rho", kLn2}, {"alpha", 4}}},
                         {"n_samples", 100},
                         {"seed", 1}};
  absl::StatusOr<Scenario> s = ScenarioFromJson(json);
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_EQ(s->query, MechanismKind::kQuery1);
  EXPECT_EQ(s->params.rho, kLn2);
  EXPECT_EQ(s->grid.delta, 1.0);

  json["params"] = {{"epsilon", 2.0}, {"r", 4.0}, {"alpha", 1}};
  s = ScenarioFromJson(json);
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_NEAR(s->params.rho, 8.0, 1e-15);

  json["params"] = {{"epsilon", 2.0}, {"r", 4.0}, {"rho", 0.7}};
  EXPECT_FALSE(ScenarioFromJson(json).ok());
}

TEST(ScenarioFromJsonTest, RejectsBadInput) {
  const nlohmann::json good = {{"user_coord", 0.0},
                               {"pois_abs", {3}},
                               {"query", "q2"},
                               {"params", {{"rho", 1.0}}},
                               {"n_samples", 10},
                               {"seed", 1}};
  ASSERT_TRUE(ScenarioFromJson(good).ok());

  nlohmann::json extra = good;
  extra["colour"] = "red";
  EXPECT_THAT(ScenarioFromJson(extra).status().message(),
              HasSubstr("colour"));

  nlohmann::json missing = good;
  missing.erase("seed");
  EXPECT_FALSE(ScenarioFromJson(missing).ok());

  nlohmann::json wrong_type = good;
  wrong_type["pois_abs"] = "3";
  EXPECT_FALSE(ScenarioFromJson(wrong_type).ok());

  nlohmann::json baseline_query = good;
  baseline_query["query"] = "baseline";
  EXPECT_FALSE(ScenarioFromJson(baseline_query).ok());

  nlohmann::json no_pois = good;
  no_pois["pois_abs"] = nlohmann::json::array();
  EXPECT_FALSE(ScenarioFromJson(no_pois).ok());

  nlohmann::json bad_rho = good;
  bad_rho["params"] = {{"rho", -1.0}};
  EXPECT_FALSE(ScenarioFromJson(bad_rho).ok());

  EXPECT_FALSE(ScenarioFromJson(nlohmann::json::array()).ok());
}

TEST(RunScenarioTest, SnapsPoisAndReportsShift) {
  Scenario s = ThreePoiScenario(100, 1);
  s.pois_abs = {3.3, 10, -5};
  absl::StatusOr<SimulationReport> report = RunScenario(s);
  ASSERT_TRUE(report.ok());
  EXPECT_NEAR(report->poi_snap_error, 0.3, 1e-12);
  EXPECT_FALSE(report->notes.empty());
}

TEST(RunScenarioTest, CollisionsAndZeroTargetAreErrors) {
  Scenario s = ThreePoiScenario(100, 1);
  s.pois_abs = {3.1, 2.9, -5};
  EXPECT_THAT(RunScenario(s).status().message(), HasSubstr("collide"));
  s.pois_abs = {0.2, 10};
  EXPECT_EQ(RunScenario(s).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(RunScenariosTest, KeepsInputOrder) {
  std::vector<Scenario> scenarios;
  for (int k = 0; k < 6; ++k) {
    Scenario s = ThreePoiScenario(2000, k);
    s.id = "s" + std::to_string(k);
    if (k == 4) s.pois_abs = {};
    scenarios.push_back(s);
  }
  const std::vector<absl::StatusOr<SimulationReport>> results =
      RunScenarios(scenarios);
  ASSERT_EQ(results.size(), scenarios.size());
  for (int k = 0; k < 6; ++k) {
    if (k == 4) {
      EXPECT_FALSE(results[k].ok());
      continue;
    }
    ASSERT_TRUE(results[k].ok());
    EXPECT_EQ(results[k]->id, scenarios[k].id);
    EXPECT_EQ(results[k]->ToJson().dump(),
              RunScenario(scenarios[k])->ToJson().dump());
  }
}

TEST(SimulationReportTest, JsonLayout) {
  const nlohmann::json json = RunScenario(ThreePoiScenario(100, 1))->ToJson();
  EXPECT_EQ(json["mechanism"], "query1");
  EXPECT_TRUE(json["expected"].contains("distance_error"));
  EXPECT_TRUE(json["expected"].contains("ranking_preservation"));
  EXPECT_EQ(json["sample_count"], 100);
}

}  // namespace
}  // namespace locpriv
