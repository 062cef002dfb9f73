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

#ifndef LOCPRIV_VERIFIER_H_
#define LOCPRIV_VERIFIER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "locpriv/params.h"
#include "locpriv/pmf.h"

namespace locpriv {

struct Check {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  // Human-readable reason for a failure; empty on success.
  std::string detail;
  // First offending offset, when the failure is local.
  std::optional<int64_t> offset;
};

struct VerificationReport {
  std::vector<Check> checks;
  std::optional<double> empirical_epsilon;
  double nominal_rho = 0.0;

  bool AllPassed() const;
  nlohmann::json ToJson() const;
};

// Nonnegative masses, peak equal to p, stored mass in [1 - tail_mass, 1 + tol].
Check CheckPmfValidity(const DiscretePmf& pmf, double tol);

// Per-region monotonicity, e^rho per-step decay, the anti-prior suppression
// and (for the mirrored distribution) symmetry about the target, all to
// 1e-12 relative.
absl::StatusOr<Check> CheckShape(const DiscretePmf& pmf);

inline constexpr double kShapeTolerance = 1e-12;

// Closed interval of true-location inputs, in grid steps.
struct InputRange {
  int64_t first = 0;
  int64_t last = 1;
};

// Worst log-likelihood ratio sup_z |ln P_i(z) - ln P_{i+1}(z)| over adjacent
// inputs in `inputs`, all sharing the PoI at `absolute_target`. For the
// prior-aware kinds every input must lie strictly on one side of the PoI.
absl::StatusOr<double> MeasureEmpiricalEpsilon(MechanismKind kind,
                                               const PrivacyParams& params,
                                               const GridSpec& grid,
                                               int64_t absolute_target,
                                               InputRange inputs);

// Peak value p found by bisection on "total mass = 1", with the total summed
// term by term in long double. Shares no code with the closed forms.
absl::StatusOr<double> OracleNormalizer(MechanismKind kind,
                                        const PrivacyParams& params,
                                        int64_t target);

// Validity and shape checks of `pmf` in one report.
absl::StatusOr<VerificationReport> VerifyPmf(const DiscretePmf& pmf,
                                             double tol = 1e-12);

}  // namespace locpriv

#endif  // LOCPRIV_VERIFIER_H_
