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

#ifndef LOCPRIV_HARNESS_H_
#define LOCPRIV_HARNESS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "locpriv/params.h"

namespace locpriv {

struct NearestPoi {
  double poi = 0.0;
  double distance = 0.0;
};

// Model location-based service: exact nearest neighbour over `pois`, ties
// resolved towards the smaller coordinate.
absl::StatusOr<NearestPoi> LbsOracle(double point, std::span<const double> pois);

struct Scenario {
  std::string id;
  double user_coord = 0.0;
  std::vector<double> pois_abs;
  // kQuery1 or kQuery2.
  MechanismKind query = MechanismKind::kQuery1;
  PrivacyParams params;
  GridSpec grid;
  int64_t n_samples = 1;
  uint64_t seed = 0;
};

absl::StatusOr<Scenario> ScenarioFromJson(const nlohmann::json& json);

struct SimulationReport {
  std::string id;
  MechanismKind mechanism = MechanismKind::kQuery1;
  double nearest_poi_preservation_rate = 0.0;
  // Absent when two PoIs are equidistant from the user.
  std::optional<double> ranking_preservation_rate;
  // Meters.
  double mean_abs_distance_error = 0.0;
  double mean_displacement = 0.0;
  double empirical_epsilon = 0.0;
  int64_t sample_count = 0;
  uint64_t seed = 0;
  // Largest distance a PoI moved when snapped to the grid, meters.
  double poi_snap_error = 0.0;
  int64_t target_offset = 0;

  // Exact expectations of the simulated quantities, same units.
  double expected_nearest_poi_preservation = 0.0;
  std::optional<double> expected_ranking_preservation;
  double expected_distance_error = 0.0;
  double expected_displacement = 0.0;

  std::vector<std::string> notes;

  nlohmann::json ToJson() const;
};

// Simulates `s` with the mechanism named by `s.query`.
absl::StatusOr<SimulationReport> RunScenario(const Scenario& s);

// Same draws pipeline with an explicit mechanism, used for comparisons.
absl::StatusOr<SimulationReport> RunMechanism(const Scenario& s,
                                              MechanismKind kind);

struct Comparison {
  SimulationReport mechanism;
  SimulationReport baseline;

  nlohmann::json ToJson() const;
};

// Runs the scenario's mechanism and the geometric baseline with the same seed.
absl::StatusOr<Comparison> CompareMechanisms(const Scenario& s);

// Independent scenarios evaluated concurrently; results keep input order.
std::vector<absl::StatusOr<SimulationReport>> RunScenarios(
    std::span<const Scenario> scenarios);

}  // namespace locpriv

#endif  // LOCPRIV_HARNESS_H_
