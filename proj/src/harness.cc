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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "locpriv/metrics.h"
#include "locpriv/pmf.h"
#include "locpriv/sampler.h"
#include "locpriv/verifier.h"

namespace locpriv {
namespace {

constexpr double kTieThreshold = 1e-12;

nlohmann::json OptionalJson(const std::optional<double>& v) {
  return v.has_value() ? nlohmann::json(*v) : nlohmann::json();
}

absl::Status ValidateScenario(const Scenario& s) {
  if (s.n_samples < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("n_samples must be >= 1, got ", s.n_samples));
  }
  if (s.pois_abs.empty()) {
    return absl::InvalidArgumentError("scenario needs at least one PoI");
  }
  if (!std::isfinite(s.user_coord) ||
      !std::all_of(s.pois_abs.begin(), s.pois_abs.end(),
                   [](double x) { return std::isfinite(x); })) {
    return absl::InvalidArgumentError("scenario coordinates must be finite");
  }
  if (s.query == MechanismKind::kGeometricBaseline) {
    return absl::InvalidArgumentError("scenario query must be q1 or q2");
  }
  if (absl::Status status = s.params.Validate(); !status.ok()) return status;
  return s.grid.Validate();
}

// True when the distance ranking of `ranked` (nearest first) is unchanged,
// all comparisons strict.
bool RankingHolds(int64_t z, const std::vector<int64_t>& ranked) {
  for (size_t k = 0; k + 1 < ranked.size(); ++k) {
    if (!(std::llabs(z - ranked[k]) < std::llabs(z - ranked[k + 1]))) {
      return false;
    }
  }
  return true;
}

}  // namespace

absl::StatusOr<NearestPoi> LbsOracle(double point,
                                     std::span<const double> pois) {
  if (pois.empty()) {
    return absl::InvalidArgumentError("LBS needs at least one PoI");
  }
  NearestPoi best{.poi = pois.front(),
                  .distance = std::abs(pois.front() - point)};
  for (double poi : pois.subspan(1)) {
    const double d = std::abs(poi - point);
    if (d < best.distance || (d == best.distance && poi < best.poi)) {
      best = {.poi = poi, .distance = d};
    }
  }
  return best;
}

absl::StatusOr<Scenario> ScenarioFromJson(const nlohmann::json& json) {
  static const std::set<std::string> kKeys = {
      "id", "user_coord", "pois_abs", "query", "params",
      "grid", "n_samples", "seed"};
  static const std::set<std::string> kParamKeys = {"rho",   "epsilon", "r",
                                                   "alpha", "rho0"};
  static const std::set<std::string> kGridKeys = {"delta", "tail_mass"};
  if (!json.is_object()) {
    return absl::InvalidArgumentError("scenario must be a JSON object");
  }
  auto reject_unknown = [](const nlohmann::json& obj,
                           const std::set<std::string>& allowed,
                           const char* where) -> absl::Status {
    for (const auto& [key, value] : obj.items()) {
      if (!allowed.contains(key)) {
        return absl::InvalidArgumentError(
            absl::StrCat("unknown key '", key, "' in ", where));
      }
    }
    return absl::OkStatus();
  };
  if (absl::Status st = reject_unknown(json, kKeys, "scenario"); !st.ok()) {
    return st;
  }
  Scenario s;
  try {
    s.id = json.value("id", std::string());
    s.user_coord = json.at("user_coord").get<double>();
    s.pois_abs = json.at("pois_abs").get<std::vector<double>>();
    absl::StatusOr<MechanismKind> kind =
        ParseKind(json.at("query").get<std::string>());
    if (!kind.ok()) return kind.status();
    s.query = *kind;

    const nlohmann::json& params = json.at("params");
    if (absl::Status st = reject_unknown(params, kParamKeys, "params");
        !st.ok()) {
      return st;
    }
    s.params.alpha = params.value("alpha", 0.0);
    s.params.r = params.value("r", 1.0);
    s.params.rho0 = params.value("rho0", 0.0);
    const bool has_rho = params.contains("rho");
    const bool has_eps = params.contains("epsilon");
    if (!has_rho && !has_eps) {
      return absl::InvalidArgumentError("params needs rho or epsilon");
    }
    if (has_eps) {
      absl::StatusOr<PrivacyParams> from_eps = PrivacyParams::FromEpsilon(
          params.at("epsilon").get<double>(), s.params.r, s.params.alpha,
          s.params.rho0);
      if (!from_eps.ok()) return from_eps.status();
      if (has_rho && std::abs(from_eps->rho - params.at("rho").get<double>()) >
                         1e-12 * from_eps->rho) {
        return absl::InvalidArgumentError(
            "params rho disagrees with epsilon * r");
      }
      s.params = *from_eps;
    } else {
      s.params.rho = params.at("rho").get<double>();
    }

    if (json.contains("grid")) {
      const nlohmann::json& grid = json.at("grid");
      if (absl::Status st = reject_unknown(grid, kGridKeys, "grid"); !st.ok()) {
        return st;
      }
      s.grid.delta = grid.value("delta", 1.0);
      s.grid.tail_mass = grid.value("tail_mass", kDefaultTailMass);
    }
    s.n_samples = json.at("n_samples").get<int64_t>();
    s.seed = json.at("seed").get<uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed scenario: ", e.what()));
  }
  if (absl::Status status = ValidateScenario(s); !status.ok()) return status;
  return s;
}

absl::StatusOr<SimulationReport> RunMechanism(const Scenario& s,
                                              MechanismKind kind) {
  if (absl::Status status = ValidateScenario(s); !status.ok()) return status;
  const double delta = s.grid.delta;

  SimulationReport report;
  report.id = s.id;
  report.mechanism = kind;
  report.sample_count = s.n_samples;
  report.seed = s.seed;

  std::vector<int64_t> offsets;
  for (double poi : s.pois_abs) {
    const Snapped snapped = SnapToGrid((poi - s.user_coord) / delta);
    offsets.push_back(snapped.offset);
    report.poi_snap_error =
        std::max(report.poi_snap_error, snapped.error * delta);
  }
  absl::StatusOr<PoiPrior> prior = PoiPrior::Create(offsets);
  if (!prior.ok()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "PoIs collide after snapping to the grid: ", prior.status().message()));
  }
  const int64_t target = prior->target();
  if (target == 0) {
    return absl::InvalidArgumentError(
        "target PoI snaps onto the user position");
  }
  report.target_offset = target;

  absl::StatusOr<DiscretePmf> pmf = BuildPmf(kind, s.params, s.grid, target);
  if (!pmf.ok()) return pmf.status();
  absl::StatusOr<Sampler> sampler = Sampler::Create(*pmf);
  if (!sampler.ok()) return sampler.status();

  std::vector<double> pois;
  for (int64_t off : prior->pois()) {
    pois.push_back(s.user_coord + static_cast<double>(off) * delta);
  }
  absl::StatusOr<NearestPoi> truth = LbsOracle(s.user_coord, pois);
  if (!truth.ok()) return truth.status();

  std::vector<int64_t> ranked = prior->pois();
  std::stable_sort(ranked.begin(), ranked.end(), [](int64_t a, int64_t b) {
    return std::llabs(a) < std::llabs(b);
  });
  const bool ranking_defined = RankingHolds(0, ranked);

  Engine engine(s.seed);
  int64_t nearest_kept = 0;
  int64_t ranking_kept = 0;
  double distance_error = 0.0;
  double displacement = 0.0;
  for (int64_t n = 0; n < s.n_samples; ++n) {
    const int64_t z = sampler->Draw(engine);
    const double coord = s.user_coord + static_cast<double>(z) * delta;
    absl::StatusOr<NearestPoi> seen = LbsOracle(coord, pois);
    if (!seen.ok()) return seen.status();
    if (seen->poi == truth->poi) ++nearest_kept;
    if (ranking_defined && RankingHolds(z, ranked)) ++ranking_kept;
    distance_error += std::abs(seen->distance - truth->distance);
    displacement += std::abs(static_cast<double>(z)) * delta;
  }
  const double count = static_cast<double>(s.n_samples);
  report.nearest_poi_preservation_rate = nearest_kept / count;
  if (ranking_defined) report.ranking_preservation_rate = ranking_kept / count;
  report.mean_abs_distance_error = distance_error / count;
  report.mean_displacement = displacement / count;

  const InputRange inputs =
      target > 0 ? InputRange{-1, 0} : InputRange{0, 1};
  absl::StatusOr<double> epsilon =
      MeasureEmpiricalEpsilon(kind, s.params, s.grid, target, inputs);
  if (!epsilon.ok()) return epsilon.status();
  report.empirical_epsilon = *epsilon;

  absl::StatusOr<double> nearest_mass =
      NearestPoiPreservationMass(*pmf, *prior);
  if (!nearest_mass.ok()) return nearest_mass.status();
  report.expected_nearest_poi_preservation = *nearest_mass;
  if (ranking_defined) {
    absl::StatusOr<double> ranking_mass = RankingPreservationMass(*pmf, *prior);
    if (!ranking_mass.ok()) return ranking_mass.status();
    report.expected_ranking_preservation = *ranking_mass;
  }
  report.expected_distance_error =
      ExpectedNearestDistanceError(*pmf, *prior) * delta;
  report.expected_displacement = ExpectedDisplacement(*pmf) * delta;

  if (s.params.rho0 != 0.0) {
    report.notes.push_back("rho0 is recorded but not used by the mechanism");
  }
  if (report.poi_snap_error > 0.0) {
    report.notes.push_back(
        absl::StrCat("PoIs snapped to the grid; largest shift ",
                     report.poi_snap_error, " m"));
  }
  if (!ranking_defined) {
    report.notes.push_back(
        "PoIs equidistant from the user; ranking preservation undefined");
  }
  return report;
}

absl::StatusOr<SimulationReport> RunScenario(const Scenario& s) {
  return RunMechanism(s, s.query);
}

absl::StatusOr<Comparison> CompareMechanisms(const Scenario& s) {
  absl::StatusOr<SimulationReport> mechanism = RunMechanism(s, s.query);
  if (!mechanism.ok()) return mechanism.status();
  absl::StatusOr<SimulationReport> baseline =
      RunMechanism(s, MechanismKind::kGeometricBaseline);
  if (!baseline.ok()) return baseline.status();
  return Comparison{.mechanism = *std::move(mechanism),
                    .baseline = *std::move(baseline)};
}

std::vector<absl::StatusOr<SimulationReport>> RunScenarios(
    std::span<const Scenario> scenarios) {
  std::vector<std::future<absl::StatusOr<SimulationReport>>> pending;
  pending.reserve(scenarios.size());
  for (const Scenario& s : scenarios) {
    pending.push_back(
        std::async(std::launch::async, [&s] { return RunScenario(s); }));
  }
  std::vector<absl::StatusOr<SimulationReport>> results;
  results.reserve(pending.size());
  for (auto& f : pending) results.push_back(f.get());
  return results;
}

nlohmann::json SimulationReport::ToJson() const {
  nlohmann::json out;
  out["id"] = id;
  out["mechanism"] = KindName(mechanism);
  out["nearest_poi_preservation_rate"] = nearest_poi_preservation_rate;
  out["ranking_preservation_rate"] = OptionalJson(ranking_preservation_rate);
  out["mean_abs_distance_error"] = mean_abs_distance_error;
  out["mean_displacement"] = mean_displacement;
  out["empirical_epsilon"] = empirical_epsilon;
  out["sample_count"] = sample_count;
  out["seed"] = seed;
  out["poi_snap_error"] = poi_snap_error;
  out["target_offset"] = target_offset;
  out["expected"] = {
      {"nearest_poi_preservation", expected_nearest_poi_preservation},
      {"ranking_preservation", OptionalJson(expected_ranking_preservation)},
      {"distance_error", expected_distance_error},
      {"displacement", expected_displacement},
  };
  out["notes"] = notes;
  return out;
}

nlohmann::json Comparison::ToJson() const {
  struct Metric {
    const char* name;
    double mech;
    double base;
    bool lower_is_better;
  };
  std::vector<Metric> metrics = {
      {"nearest_poi_preservation_rate", mechanism.nearest_poi_preservation_rate,
       baseline.nearest_poi_preservation_rate, false},
      {"mean_abs_distance_error", mechanism.mean_abs_distance_error,
       baseline.mean_abs_distance_error, true},
      {"mean_displacement", mechanism.mean_displacement,
       baseline.mean_displacement, true},
      {"empirical_epsilon", mechanism.empirical_epsilon,
       baseline.empirical_epsilon, true},
  };
  if (mechanism.ranking_preservation_rate && baseline.ranking_preservation_rate) {
    metrics.push_back({"ranking_preservation_rate",
                       *mechanism.ranking_preservation_rate,
                       *baseline.ranking_preservation_rate, false});
  }
  nlohmann::json deltas;
  nlohmann::json winners;
  for (const Metric& m : metrics) {
    const double d = m.mech - m.base;
    deltas[m.name] = d;
    if (std::abs(d) <= kTieThreshold) {
      winners[m.name] = "tie";
    } else {
      winners[m.name] = (d < 0) == m.lower_is_better ? "mechanism" : "baseline";
    }
  }
  return {{"mechanism", mechanism.ToJson()},
          {"baseline", baseline.ToJson()},
          {"deltas", deltas},
          {"winners", winners}};
}

}  // namespace locpriv
