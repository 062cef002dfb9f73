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

// Analytic normalizers of the perturbation distributions. Every pmf here has
// the form mass(x) = p * exp(-w(x) * rho) for an integer "weight" w(x) >= 0
// with w(0) = 0, so the peak p is the reciprocal of sum_x exp(-w(x) * rho).
//
// The functions are templated on the scalar so they can be evaluated in
// double for construction and in long double or an autodiff type elsewhere.

#ifndef LOCPRIV_CLOSED_FORM_H_
#define LOCPRIV_CLOSED_FORM_H_

#include <cmath>
#include <cstdint>

#include "absl/status/statusor.h"
#include "locpriv/params.h"

namespace locpriv {

// 1 - exp(-rho) without cancellation for small rho.
template <typename Scalar>
Scalar OneMinusDecay(Scalar rho) {
  using std::expm1;
  return -expm1(-rho);
}

// Peak of the prior-aware single-direction distribution:
//   p = (1 - e^-rho) / (1 + e^-(alpha+1) rho).
template <typename Scalar>
Scalar Query1Peak(Scalar rho, Scalar alpha) {
  using std::exp;
  return OneMinusDecay(rho) / (Scalar(1) + exp(-(alpha + Scalar(1)) * rho));
}

// Large-distance approximation of the mirrored distribution's peak; exactly
// half of Query1Peak.
template <typename Scalar>
Scalar Query2PeakApprox(Scalar rho, Scalar alpha) {
  return Query1Peak(rho, alpha) / Scalar(2);
}

// Symmetric two-sided geometric peak, (1 - e^-rho) / (1 + e^-rho).
template <typename Scalar>
Scalar GeometricPeak(Scalar rho) {
  using std::tanh;
  return tanh(rho / Scalar(2));
}

// Sum of the unnormalized masses of the mirrored distribution with the PoI at
// distance `distance` >= 1:
//   2 (peaks)  +  2 sum_{x=1}^{L-1} q^x  +  q^L (midpoint, counted once)
//              +  2 q^(alpha+1) / (1 - q)  (both exterior tails),  q = e^-rho.
template <typename Scalar>
Scalar Query2Normalizer(Scalar rho, Scalar alpha, int64_t distance) {
  using std::exp;
  const Scalar q = exp(-rho);
  const Scalar one_minus_q = OneMinusDecay(rho);
  const Scalar length = static_cast<Scalar>(distance);
  // sum_{x=1}^{L-1} q^x = q (1 - q^(L-1)) / (1 - q).
  const Scalar interior =
      q * OneMinusDecay(rho * (length - Scalar(1))) / one_minus_q;
  const Scalar midpoint = exp(-rho * length);
  const Scalar exterior = exp(-(alpha + Scalar(1)) * rho) / one_minus_q;
  return Scalar(2) + Scalar(2) * interior + midpoint + Scalar(2) * exterior;
}

template <typename Scalar>
Scalar Query2Peak(Scalar rho, Scalar alpha, int64_t distance) {
  return Scalar(1) / Query2Normalizer(rho, alpha, distance);
}

absl::StatusOr<double> ClosedFormPeakQuery1(const PrivacyParams& params);
absl::StatusOr<double> ClosedFormPeakQuery2Approx(const PrivacyParams& params);

}  // namespace locpriv

#endif  // LOCPRIV_CLOSED_FORM_H_
