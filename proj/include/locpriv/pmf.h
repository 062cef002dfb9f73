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

#ifndef LOCPRIV_PMF_H_
#define LOCPRIV_PMF_H_

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "absl/status/statusor.h"
#include "locpriv/params.h"

namespace locpriv {

enum class TailSide { kLeft, kRight };

// A probability mass function over integer grid offsets relative to the true
// location. The analytic pmf is strictly positive on every integer; only the
// contiguous range [lo, hi] is stored. Immutable once built.
class DiscretePmf {
 public:
  // Wraps already-computed masses without checking them. Used by readers and
  // by tests that inject faults; `CheckPmfValidity` is the gate for these.
  static DiscretePmf FromStored(MechanismKind kind, const PrivacyParams& params,
                                const GridSpec& grid,
                                std::optional<int64_t> target, int64_t lo,
                                Eigen::ArrayXd masses, double p);

  MechanismKind kind() const { return kind_; }
  const PrivacyParams& params() const { return params_; }
  const GridSpec& grid() const { return grid_; }
  std::optional<int64_t> target() const { return target_; }
  int64_t lo() const { return lo_; }
  int64_t hi() const { return lo_ + masses_.size() - 1; }
  int64_t size() const { return masses_.size(); }
  const Eigen::ArrayXd& masses() const { return masses_; }
  double p() const { return p_; }
  double stored_mass() const { return stored_mass_; }

  bool Contains(int64_t offset) const {
    return offset >= lo() && offset <= hi();
  }
  // Stored mass; 0 outside [lo, hi].
  double Mass(int64_t offset) const {
    return Contains(offset) ? masses_[offset - lo_] : 0.0;
  }
  // Offsets of the stored support as doubles, aligned with masses().
  Eigen::ArrayXd Offsets() const;

  // Exact mass of the analytic pmf, valid at any offset. The log form does
  // not underflow.
  double AnalyticLogMass(int64_t offset) const;
  double AnalyticMass(int64_t offset) const;

  // Analytic mass strictly beyond the stored support on one side.
  double TailMass(TailSide side) const;

  // 1 - exp(-rho): every tail past the stored support decays by e^-rho per
  // step, so tail sums are geometric with this denominator.
  double TailDenominator() const;

 private:
  DiscretePmf(MechanismKind kind, const PrivacyParams& params,
              const GridSpec& grid, std::optional<int64_t> target, int64_t lo,
              Eigen::ArrayXd masses, double p);

  MechanismKind kind_;
  PrivacyParams params_;
  GridSpec grid_;
  std::optional<int64_t> target_;
  int64_t lo_;
  Eigen::ArrayXd masses_;
  double p_;
  double stored_mass_;
};

// Decay exponent w(x), in units of rho, of the unnormalized mass at `offset`:
// mass(offset) = p * exp(-w * rho). `target` is ignored for the baseline.
double DecayExponent(MechanismKind kind, double alpha, int64_t target,
                     int64_t offset);

// Peak value p from the exact analytic normalization of each structure.
absl::StatusOr<double> AnalyticPeak(MechanismKind kind,
                                    const PrivacyParams& params,
                                    int64_t target);

// Peak at the true location, mass decaying by e^-rho per step towards the
// target and by an extra e^-alpha rho on the opposite side.
absl::StatusOr<DiscretePmf> BuildQuery1Pmf(const PrivacyParams& params,
                                           const GridSpec& grid,
                                           const PoiPrior& prior);

// Twin peaks at 0 and 2L, mirror-symmetric about the target L. A target of 0
// degenerates to the geometric baseline.
absl::StatusOr<DiscretePmf> BuildQuery2Pmf(const PrivacyParams& params,
                                           const GridSpec& grid,
                                           const PoiPrior& prior);

// Symmetric two-sided geometric distribution, the discrete Laplace analogue.
absl::StatusOr<DiscretePmf> BuildGeometricPmf(const PrivacyParams& params,
                                              const GridSpec& grid);

// Dispatches on `kind`; `target` is ignored for the baseline.
absl::StatusOr<DiscretePmf> BuildPmf(MechanismKind kind,
                                     const PrivacyParams& params,
                                     const GridSpec& grid, int64_t target);

// The pmf placed in physical coordinates: offset x lands on
// origin + x * delta.
class AbsolutePmfView {
 public:
  AbsolutePmfView(const DiscretePmf& pmf, double origin)
      : pmf_(&pmf), origin_(origin) {}

  double origin() const { return origin_; }
  double Coordinate(int64_t offset) const {
    return origin_ + static_cast<double>(offset) * pmf_->grid().delta;
  }
  double MassAtOffset(int64_t offset) const { return pmf_->Mass(offset); }
  // Physical coordinates of the stored support, aligned with pmf.masses().
  Eigen::ArrayXd Coordinates() const;
  const DiscretePmf& pmf() const { return *pmf_; }

 private:
  const DiscretePmf* pmf_;
  double origin_;
};

inline AbsolutePmfView ShiftToAbsolute(const DiscretePmf& pmf,
                                       double input_coord) {
  return AbsolutePmfView(pmf, input_coord);
}

}  // namespace locpriv

#endif  // LOCPRIV_PMF_H_
