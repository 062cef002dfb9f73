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

#include "locpriv/params.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "absl/strings/str_cat.h"

namespace locpriv {

absl::Status PrivacyParams::Validate() const {
  if (!std::isfinite(rho) || rho <= 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("rho must be finite and > 0, got ", rho));
  }
  if (!std::isfinite(alpha) || alpha < 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must be finite and >= 0, got ", alpha));
  }
  if (!std::isfinite(r) || r <= 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("r must be finite and > 0, got ", r));
  }
  if (!std::isfinite(rho0) || rho0 < 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("rho0 must be finite and >= 0, got ", rho0));
  }
  return absl::OkStatus();
}

absl::StatusOr<PrivacyParams> PrivacyParams::FromEpsilon(double epsilon,
                                                         double radius,
                                                         double alpha,
                                                         double rho0) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be finite and > 0, got ", epsilon));
  }
  PrivacyParams params{
      .rho = epsilon * radius, .alpha = alpha, .r = radius, .rho0 = rho0};
  if (absl::Status status = params.Validate(); !status.ok()) return status;
  return params;
}

absl::Status GridSpec::Validate() const {
  if (!std::isfinite(delta) || delta <= 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must be finite and > 0, got ", delta));
  }
  if (!(tail_mass > 0.0 && tail_mass <= 1e-6)) {
    return absl::InvalidArgumentError(
        absl::StrCat("tail_mass must lie in (0, 1e-6], got ", tail_mass));
  }
  return absl::OkStatus();
}

Snapped SnapToGrid(double steps) {
  const double rounded = std::round(steps);
  return {.offset = static_cast<int64_t>(rounded),
          .error = std::abs(rounded - steps)};
}

absl::StatusOr<PoiPrior> PoiPrior::Create(std::vector<int64_t> pois,
                                          std::optional<int64_t> target) {
  if (pois.empty()) {
    return absl::InvalidArgumentError("PoI prior must contain at least one PoI");
  }
  std::sort(pois.begin(), pois.end());
  if (auto dup = std::adjacent_find(pois.begin(), pois.end());
      dup != pois.end()) {
    return absl::InvalidArgumentError(
        absl::StrCat("duplicate PoI offset ", *dup));
  }
  if (target.has_value()) {
    if (!std::binary_search(pois.begin(), pois.end(), *target)) {
      return absl::InvalidArgumentError(
          absl::StrCat("target ", *target, " is not one of the PoIs"));
    }
  } else {
    int64_t best = pois.front();
    for (int64_t poi : pois) {
      const uint64_t d = std::llabs(poi);
      const uint64_t best_d = std::llabs(best);
      if (d < best_d || (d == best_d && poi > best)) best = poi;
    }
    target = best;
  }
  return PoiPrior(std::move(pois), *target);
}

absl::StatusOr<PoiPrior> PoiPrior::Single(int64_t target) {
  return Create({target}, target);
}

std::string KindName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kQuery1:
      return "query1";
    case MechanismKind::kQuery2:
      return "query2";
    case MechanismKind::kGeometricBaseline:
      return "geometric_baseline";
  }
  return "unknown";
}

absl::StatusOr<MechanismKind> ParseKind(const std::string& name) {
  if (name == "query1" || name == "q1") return MechanismKind::kQuery1;
  if (name == "query2" || name == "q2") return MechanismKind::kQuery2;
  if (name == "geometric_baseline" || name == "baseline" ||
      name == "geometric") {
    return MechanismKind::kGeometricBaseline;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown mechanism '", name,
                                                 "' (expected q1, q2 or "
                                                 "baseline)"));
}

}  // namespace locpriv
