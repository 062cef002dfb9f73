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

#ifndef LOCPRIV_PARAMS_H_
#define LOCPRIV_PARAMS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace locpriv {

// Privacy configuration of a perturbation mechanism. `rho` is measured in
// nats per grid step; the calibrated differential-privacy parameter is
// epsilon = rho / r with r the protected radius in grid steps.
struct PrivacyParams {
  double rho = 0.0;
  // Suppression of outputs pointing away from the PoI, in units of rho.
  double alpha = 0.0;
  // Protected radius, in grid steps.
  double r = 1.0;
  // Privacy level requested outside the radius. Accepted for completeness;
  // none of the constructions depend on it.
  double rho0 = 0.0;

  double epsilon() const { return rho / r; }

  absl::Status Validate() const;

  // rho = epsilon * radius.
  static absl::StatusOr<PrivacyParams> FromEpsilon(double epsilon,
                                                   double radius,
                                                   double alpha,
                                                   double rho0 = 0.0);
};

inline constexpr double kDefaultTailMass = 1e-12;

struct GridSpec {
  // Meters per grid step.
  double delta = 1.0;
  // Upper bound on the analytic mass left outside the stored support.
  double tail_mass = kDefaultTailMass;

  absl::Status Validate() const;
};

// Result of placing a real-valued offset (in grid steps) on the grid.
struct Snapped {
  int64_t offset = 0;
  // |offset - original|, in grid steps.
  double error = 0.0;
};

Snapped SnapToGrid(double steps);

// The PoI prior: PoI positions as integer grid offsets relative to the true
// location, which sits at offset 0.
class PoiPrior {
 public:
  // Sorts `pois`. Rejects an empty list or duplicates. When `target` is
  // absent the PoI closest to 0 is chosen, ties going to the positive side.
  static absl::StatusOr<PoiPrior> Create(
      std::vector<int64_t> pois, std::optional<int64_t> target = std::nullopt);

  // Single-PoI prior {target}.
  static absl::StatusOr<PoiPrior> Single(int64_t target);

  const std::vector<int64_t>& pois() const { return pois_; }
  int64_t target() const { return target_; }

 private:
  PoiPrior(std::vector<int64_t> pois, int64_t target)
      : pois_(std::move(pois)), target_(target) {}

  std::vector<int64_t> pois_;
  int64_t target_;
};

enum class MechanismKind { kQuery1, kQuery2, kGeometricBaseline };

std::string KindName(MechanismKind kind);
absl::StatusOr<MechanismKind> ParseKind(const std::string& name);

}  // namespace locpriv

#endif  // LOCPRIV_PARAMS_H_
