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

#include "locpriv/pmf.h"

#include <cmath>
#include <cstdlib>
#include <utility>

#include "absl/strings/str_cat.h"
#include "locpriv/closed_form.h"

namespace locpriv {
namespace {

// Hard cap on stored support; reached only for extremely small rho.
constexpr int64_t kMaxSupport = int64_t{1} << 26;

int64_t Sign(int64_t x) { return x < 0 ? -1 : 1; }

// Innermost offset on each side that the stored support must reach: the
// peaks of every structure lie inside [lo, hi].
std::pair<int64_t, int64_t> CoreSupport(MechanismKind kind, int64_t target) {
  if (kind == MechanismKind::kQuery2) {
    return target > 0 ? std::pair<int64_t, int64_t>{0, 2 * target}
                      : std::pair<int64_t, int64_t>{2 * target, 0};
  }
  return {0, 0};
}

// Grows the core support outward until the analytic tail on each side is
// below half the budget.
absl::StatusOr<DiscretePmf> Materialize(MechanismKind kind,
                                        const PrivacyParams& params,
                                        const GridSpec& grid,
                                        std::optional<int64_t> target,
                                        double p) {
  const int64_t t = target.value_or(0);
  const double rho = params.rho;
  const double log_denominator = std::log(OneMinusDecay(rho));
  const double log_budget = std::log(grid.tail_mass / 2.0);
  auto log_tail_beyond = [&](int64_t edge, int64_t step) {
    return std::log(p) -
           DecayExponent(kind, params.alpha, t, edge + step) * rho -
           log_denominator;
  };
  auto extend = [&](int64_t edge, int64_t step) {
    const double excess = log_tail_beyond(edge, step) - log_budget;
    int64_t k = excess > 0.0 ? static_cast<int64_t>(std::ceil(excess / rho))
                             : 0;
    if (k > kMaxSupport) k = kMaxSupport;
    int64_t end = edge + step * k;
    while (log_tail_beyond(end, step) >= log_budget &&
           std::llabs(end - edge) < kMaxSupport) {
      end += step;
    }
    while (end != edge && log_tail_beyond(end - step, step) < log_budget) {
      end -= step;
    }
    return end;
  };

  auto [core_lo, core_hi] = CoreSupport(kind, t);
  const int64_t lo = extend(core_lo, -1);
  const int64_t hi = extend(core_hi, +1);
  if (hi - lo + 1 > kMaxSupport) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "stored support of ", hi - lo + 1, " offsets exceeds the limit of ",
        kMaxSupport, "; increase rho or tail_mass"));
  }

  Eigen::ArrayXd masses(hi - lo + 1);
  for (int64_t x = lo; x <= hi; ++x) {
    masses[x - lo] =
        p * std::exp(-DecayExponent(kind, params.alpha, t, x) * rho);
  }
  return DiscretePmf::FromStored(kind, params, grid, target, lo,
                                 std::move(masses), p);
}

absl::Status ValidateInputs(const PrivacyParams& params, const GridSpec& grid) {
  if (absl::Status status = params.Validate(); !status.ok()) return status;
  return grid.Validate();
}

}  // namespace

absl::StatusOr<double> ClosedFormPeakQuery1(const PrivacyParams& params) {
  if (absl::Status status = params.Validate(); !status.ok()) return status;
  return Query1Peak(params.rho, params.alpha);
}

absl::StatusOr<double> ClosedFormPeakQuery2Approx(const PrivacyParams& params) {
  if (absl::Status status = params.Validate(); !status.ok()) return status;
  return Query2PeakApprox(params.rho, params.alpha);
}

double DecayExponent(MechanismKind kind, double alpha, int64_t target,
                     int64_t offset) {
  switch (kind) {
    case MechanismKind::kGeometricBaseline:
      return static_cast<double>(std::llabs(offset));
    case MechanismKind::kQuery1: {
      const int64_t y = Sign(target) * offset;
      return y >= 0 ? static_cast<double>(y) : static_cast<double>(-y) + alpha;
    }
    case MechanismKind::kQuery2: {
      const int64_t length = std::llabs(target);
      const int64_t y = Sign(target) * offset;
      if (y < 0) return static_cast<double>(-y) + alpha;
      if (y > 2 * length) return static_cast<double>(y - 2 * length) + alpha;
      return static_cast<double>(std::min(y, 2 * length - y));
    }
  }
  return 0.0;
}

absl::StatusOr<double> AnalyticPeak(MechanismKind kind,
                                    const PrivacyParams& params,
                                    int64_t target) {
  if (absl::Status status = params.Validate(); !status.ok()) return status;
  switch (kind) {
    case MechanismKind::kGeometricBaseline:
      return GeometricPeak(params.rho);
    case MechanismKind::kQuery1:
      if (target == 0) {
        return absl::InvalidArgumentError(
            "degenerate prior: query-1 target must be nonzero");
      }
      return Query1Peak(params.rho, params.alpha);
    case MechanismKind::kQuery2:
      if (target == 0) {
        return absl::InvalidArgumentError(
            "degenerate prior: query-2 target must be nonzero");
      }
      return Query2Peak(params.rho, params.alpha, std::llabs(target));
  }
  return absl::InvalidArgumentError("unknown mechanism kind");
}

absl::StatusOr<DiscretePmf> BuildQuery1Pmf(const PrivacyParams& params,
                                           const GridSpec& grid,
                                           const PoiPrior& prior) {
  if (absl::Status status = ValidateInputs(params, grid); !status.ok()) {
    return status;
  }
  absl::StatusOr<double> p =
      AnalyticPeak(MechanismKind::kQuery1, params, prior.target());
  if (!p.ok()) return p.status();
  return Materialize(MechanismKind::kQuery1, params, grid, prior.target(), *p);
}

absl::StatusOr<DiscretePmf> BuildQuery2Pmf(const PrivacyParams& params,
                                           const GridSpec& grid,
                                           const PoiPrior& prior) {
  if (prior.target() == 0) return BuildGeometricPmf(params, grid);
  if (absl::Status status = ValidateInputs(params, grid); !status.ok()) {
    return status;
  }
  absl::StatusOr<double> p =
      AnalyticPeak(MechanismKind::kQuery2, params, prior.target());
  if (!p.ok()) return p.status();
  return Materialize(MechanismKind::kQuery2, params, grid, prior.target(), *p);
}

absl::StatusOr<DiscretePmf> BuildGeometricPmf(const PrivacyParams& params,
                                              const GridSpec& grid) {
  if (absl::Status status = ValidateInputs(params, grid); !status.ok()) {
    return status;
  }
  return Materialize(MechanismKind::kGeometricBaseline, params, grid,
                     std::nullopt, GeometricPeak(params.rho));
}

absl::StatusOr<DiscretePmf> BuildPmf(MechanismKind kind,
                                     const PrivacyParams& params,
                                     const GridSpec& grid, int64_t target) {
  if (kind == MechanismKind::kGeometricBaseline) {
    return BuildGeometricPmf(params, grid);
  }
  if (target == 0 && kind == MechanismKind::kQuery1) {
    return absl::InvalidArgumentError(
        "degenerate prior: query-1 target must be nonzero");
  }
  absl::StatusOr<PoiPrior> prior = PoiPrior::Single(target);
  if (!prior.ok()) return prior.status();
  return kind == MechanismKind::kQuery1 ? BuildQuery1Pmf(params, grid, *prior)
                                        : BuildQuery2Pmf(params, grid, *prior);
}

DiscretePmf::DiscretePmf(MechanismKind kind, const PrivacyParams& params,
                         const GridSpec& grid, std::optional<int64_t> target,
                         int64_t lo, Eigen::ArrayXd masses, double p)
    : kind_(kind),
      params_(params),
      grid_(grid),
      target_(target),
      lo_(lo),
      masses_(std::move(masses)),
      p_(p),
      stored_mass_(masses_.sum()) {}

DiscretePmf DiscretePmf::FromStored(MechanismKind kind,
                                    const PrivacyParams& params,
                                    const GridSpec& grid,
                                    std::optional<int64_t> target, int64_t lo,
                                    Eigen::ArrayXd masses, double p) {
  if (kind == MechanismKind::kGeometricBaseline) target.reset();
  return DiscretePmf(kind, params, grid, target, lo, std::move(masses), p);
}

Eigen::ArrayXd DiscretePmf::Offsets() const {
  return Eigen::ArrayXd::LinSpaced(size(), static_cast<double>(lo()),
                                   static_cast<double>(hi()));
}

double DiscretePmf::AnalyticLogMass(int64_t offset) const {
  return std::log(p_) -
         DecayExponent(kind_, params_.alpha, target_.value_or(0), offset) *
             params_.rho;
}

double DiscretePmf::AnalyticMass(int64_t offset) const {
  return std::exp(AnalyticLogMass(offset));
}

double DiscretePmf::TailDenominator() const {
  return OneMinusDecay(params_.rho);
}

double DiscretePmf::TailMass(TailSide side) const {
  const int64_t first = side == TailSide::kLeft ? lo() - 1 : hi() + 1;
  return AnalyticMass(first) / TailDenominator();
}

Eigen::ArrayXd AbsolutePmfView::Coordinates() const {
  return origin_ + pmf_->Offsets() * pmf_->grid().delta;
}

}  // namespace locpriv
