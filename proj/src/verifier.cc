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

#include "locpriv/verifier.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "absl/strings/str_cat.h"

namespace locpriv {
namespace {

// Masses this small have lost relative precision to underflow; ratio checks
// skip them.
constexpr double kRatioFloor = 1e-280;

// Accumulates shape failures, keeping the first offending offset.
class ShapeAudit {
 public:
  explicit ShapeAudit(const DiscretePmf& pmf) : pmf_(pmf) {}

  bool Stored(int64_t x) const { return pmf_.Contains(x); }
  double At(int64_t x) const { return pmf_.Mass(x); }

  // mass(near) / mass(far) == expected, to kShapeTolerance relative.
  void ExpectRatio(int64_t near, int64_t far, double expected,
                   const char* what) {
    if (!Stored(near) || !Stored(far)) return;
    const double a = At(near);
    const double b = At(far);
    if (a < kRatioFloor || b < kRatioFloor) return;
    const double ratio = a / b;
    const double err = std::abs(ratio - expected) / expected;
    worst_ratio_error_ = std::max(worst_ratio_error_, err);
    if (!(err <= kShapeTolerance)) {
      Fail(near, absl::StrCat(what, ": mass(", near, ")/mass(", far,
                              ") = ", ratio, ", expected ", expected));
    }
  }

  // mass(near) > mass(far), or >= when `strict` is false.
  void ExpectGreater(int64_t near, int64_t far, bool strict,
                     const char* what) {
    if (!Stored(near) || !Stored(far)) return;
    const bool ok = strict ? At(near) > At(far) : At(near) >= At(far);
    if (!ok) {
      Fail(far, absl::StrCat(what, ": mass(", near, ") = ", At(near),
                             " vs mass(", far, ") = ", At(far)));
    }
  }

  // Relative mismatch |a - b| / max(a, b).
  double Residual(int64_t x, int64_t y) {
    const double a = At(x);
    const double b = At(y);
    const double scale = std::max(a, b);
    if (scale == 0.0) return 0.0;
    return std::abs(a - b) / scale;
  }

  void Fail(int64_t offset, std::string detail) {
    if (!offset_.has_value()) {
      offset_ = offset;
      detail_ = std::move(detail);
    }
  }

  Check Finish(double measured) const {
    return Check{.name = "shape",
                 .passed = !offset_.has_value(),
                 .measured = measured,
                 .tolerance = kShapeTolerance,
                 .detail = detail_,
                 .offset = offset_};
  }

 private:
  const DiscretePmf& pmf_;
  double worst_ratio_error_ = 0.0;
  std::optional<int64_t> offset_;
  std::string detail_;
};

Check CheckQuery1Shape(const DiscretePmf& pmf) {
  ShapeAudit audit(pmf);
  const int64_t s = *pmf.target() < 0 ? -1 : 1;
  const double step = std::exp(pmf.params().rho);
  const double side = std::exp(-pmf.params().alpha * pmf.params().rho);
  const bool strict_sides = pmf.params().alpha > 0.0;
  if (audit.At(0) != pmf.p()) {
    audit.Fail(0, absl::StrCat("peak mass(0) = ", audit.At(0),
                               " differs from p = ", pmf.p()));
  }
  const int64_t reach = std::max(std::llabs(pmf.lo()), std::llabs(pmf.hi()));
  for (int64_t x = 0; x < reach; ++x) {
    audit.ExpectGreater(s * x, s * (x + 1), true, "prior side not decreasing");
    audit.ExpectRatio(s * x, s * (x + 1), step, "prior-side decay");
    audit.ExpectGreater(-s * x, -s * (x + 1), true,
                        "anti-prior side not decreasing");
    if (x >= 1) {
      audit.ExpectRatio(-s * x, -s * (x + 1), step, "anti-prior decay");
      audit.ExpectGreater(s * x, -s * x, strict_sides,
                          "prior side not favoured");
      if (audit.Stored(s * x) && audit.Stored(-s * x) &&
          audit.At(-s * x) >= kRatioFloor) {
        audit.ExpectRatio(s * x, -s * x, 1.0 / side, "anti-prior suppression");
      }
    }
  }
  const double measured =
      audit.Stored(2 * s) ? audit.At(s) / audit.At(2 * s)
                          : std::numeric_limits<double>::quiet_NaN();
  return audit.Finish(measured);
}

Check CheckQuery2Shape(const DiscretePmf& pmf) {
  ShapeAudit audit(pmf);
  const int64_t t = *pmf.target();
  const int64_t s = t < 0 ? -1 : 1;
  const int64_t length = std::llabs(t);
  const double step = std::exp(pmf.params().rho);
  const double edge =
      std::exp((pmf.params().alpha + 1.0) * pmf.params().rho);
  auto at = [&](int64_t y) { return s * y; };

  if (audit.At(0) != pmf.p()) {
    audit.Fail(0, absl::StrCat("peak mass(0) = ", audit.At(0),
                               " differs from p = ", pmf.p()));
  }
  double symmetry = 0.0;
  const int64_t reach = std::max(std::llabs(pmf.lo() - t),
                                 std::llabs(pmf.hi() - t));
  for (int64_t k = 0; k <= reach; ++k) {
    const int64_t left = t - s * k;
    const int64_t right = t + s * k;
    if (audit.Stored(left) && audit.Stored(right)) {
      const double residual = audit.Residual(left, right);
      symmetry = std::max(symmetry, residual);
      if (!(residual <= kShapeTolerance)) {
        audit.Fail(right, absl::StrCat("asymmetry about ", t, " at distance ",
                                       k, ": residual ", residual));
      }
    }
  }
  // Region between the true location and the PoI, and its mirror.
  for (int64_t y = 0; y < length; ++y) {
    audit.ExpectGreater(at(y), at(y + 1), true, "not decreasing towards PoI");
    audit.ExpectRatio(at(y), at(y + 1), step, "decay towards PoI");
    audit.ExpectGreater(at(2 * length - y), at(2 * length - y - 1), true,
                        "not increasing past PoI");
    audit.ExpectRatio(at(2 * length - y), at(2 * length - y - 1), step,
                      "growth past PoI");
  }
  // Exterior tails on both sides.
  audit.ExpectRatio(at(0), at(-1), edge, "exterior suppression");
  audit.ExpectRatio(at(2 * length), at(2 * length + 1), edge,
                    "exterior suppression");
  for (int64_t x = 0; x <= reach; ++x) {
    audit.ExpectGreater(at(-x), at(-x - 1), true,
                        "exterior not decreasing outward");
    audit.ExpectGreater(at(2 * length + x), at(2 * length + x + 1), true,
                        "exterior not decreasing outward");
    if (x >= 1) {
      audit.ExpectRatio(at(-x), at(-x - 1), step, "exterior decay");
      audit.ExpectRatio(at(2 * length + x), at(2 * length + x + 1), step,
                        "exterior decay");
    }
  }
  return audit.Finish(symmetry);
}

Check CheckGeometricShape(const DiscretePmf& pmf) {
  ShapeAudit audit(pmf);
  const double step = std::exp(pmf.params().rho);
  if (audit.At(0) != pmf.p()) {
    audit.Fail(0, absl::StrCat("peak mass(0) = ", audit.At(0),
                               " differs from p = ", pmf.p()));
  }
  const int64_t reach = std::max(std::llabs(pmf.lo()), std::llabs(pmf.hi()));
  for (int64_t x = 0; x < reach; ++x) {
    for (int64_t s : {-1, 1}) {
      audit.ExpectGreater(s * x, s * (x + 1), true, "not decreasing outward");
      audit.ExpectRatio(s * x, s * (x + 1), step, "geometric decay");
    }
    if (audit.Stored(x) && audit.Stored(-x) &&
        !(audit.Residual(x, -x) <= kShapeTolerance)) {
      audit.Fail(x, absl::StrCat("asymmetry at offset ", x));
    }
  }
  const double measured = audit.Stored(1)
                              ? audit.At(0) / audit.At(1)
                              : std::numeric_limits<double>::quiet_NaN();
  return audit.Finish(measured);
}

// Stored log mass where available, analytic elsewhere; never -inf for a
// constructed pmf.
double LogMassAt(const DiscretePmf& pmf, int64_t offset) {
  if (pmf.Contains(offset) && pmf.Mass(offset) > 0.0) {
    return std::log(pmf.Mass(offset));
  }
  return pmf.AnalyticLogMass(offset);
}

// Unnormalized weight sums by direct addition, independent of the closed
// forms. Geometric tails run until the increment drops below 1e-16.
constexpr long double kIncrementFloor = 1e-16L;
constexpr int64_t kMaxTerms = int64_t{1} << 30;

absl::StatusOr<long double> TailSum(long double rho, long double shift) {
  long double sum = 0.0L;
  for (int64_t x = 1; x < kMaxTerms; ++x) {
    const long double term = std::exp(-(static_cast<long double>(x) + shift) * rho);
    sum += term;
    if (term < kIncrementFloor) return sum;
  }
  return absl::InternalError("tail summation did not converge");
}

absl::StatusOr<long double> TotalMass(MechanismKind kind, long double p,
                                      long double rho, long double alpha,
                                      int64_t target) {
  switch (kind) {
    case MechanismKind::kGeometricBaseline: {
      absl::StatusOr<long double> tail = TailSum(rho, 0.0L);
      if (!tail.ok()) return tail.status();
      return p * (1.0L + 2.0L * *tail);
    }
    case MechanismKind::kQuery1: {
      absl::StatusOr<long double> near = TailSum(rho, 0.0L);
      if (!near.ok()) return near.status();
      absl::StatusOr<long double> far = TailSum(rho, alpha);
      if (!far.ok()) return far.status();
      return p * (1.0L + *near + *far);
    }
    case MechanismKind::kQuery2: {
      const int64_t length = std::llabs(target);
      long double interior = 0.0L;
      for (int64_t x = 1; x < length; ++x) {
        interior += std::exp(-static_cast<long double>(x) * rho);
      }
      const long double midpoint =
          std::exp(-static_cast<long double>(length) * rho);
      absl::StatusOr<long double> exterior = TailSum(rho, alpha);
      if (!exterior.ok()) return exterior.status();
      return p * (2.0L + 2.0L * interior + midpoint + 2.0L * *exterior);
    }
  }
  return absl::InvalidArgumentError("unknown mechanism kind");
}

}  // namespace

bool VerificationReport::AllPassed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.passed; });
}

nlohmann::json VerificationReport::ToJson() const {
  nlohmann::json out;
  nlohmann::json list = nlohmann::json::array();
  for (const Check& c : checks) {
    nlohmann::json entry;
    entry["name"] = c.name;
    entry["passed"] = c.passed;
    entry["measured"] = c.measured;
    entry["tolerance"] = c.tolerance;
    entry["detail"] = c.detail;
    entry["offset"] =
        c.offset.has_value() ? nlohmann::json(*c.offset) : nlohmann::json();
    list.push_back(std::move(entry));
  }
  out["checks"] = std::move(list);
  out["empirical_epsilon"] = empirical_epsilon.has_value()
                                 ? nlohmann::json(*empirical_epsilon)
                                 : nlohmann::json();
  out["nominal_rho"] = nominal_rho;
  out["passed"] = AllPassed();
  return out;
}

Check CheckPmfValidity(const DiscretePmf& pmf, double tol) {
  Check check{.name = "validity",
              .passed = true,
              .measured = pmf.stored_mass(),
              .tolerance = tol,
              .detail = {},
              .offset = std::nullopt};
  for (int64_t x = pmf.lo(); x <= pmf.hi(); ++x) {
    const double m = pmf.Mass(x);
    if (!std::isfinite(m) || m < 0.0) {
      check.passed = false;
      check.offset = x;
      check.detail = absl::StrCat("negative or non-finite mass ", m,
                                  " at offset ", x);
      return check;
    }
  }
  if (pmf.size() == 0 || pmf.masses().maxCoeff() != pmf.p()) {
    check.passed = false;
    check.detail = absl::StrCat("largest stored mass ",
                                pmf.size() ? pmf.masses().maxCoeff() : 0.0,
                                " differs from peak p = ", pmf.p());
    return check;
  }
  const double lower = 1.0 - pmf.grid().tail_mass;
  if (!(pmf.stored_mass() >= lower && pmf.stored_mass() <= 1.0 + tol)) {
    check.passed = false;
    check.detail = absl::StrCat("stored mass ", pmf.stored_mass(),
                                " outside [", lower, ", ", 1.0 + tol, "]");
  }
  return check;
}

absl::StatusOr<Check> CheckShape(const DiscretePmf& pmf) {
  switch (pmf.kind()) {
    case MechanismKind::kQuery1:
      if (!pmf.target().has_value() || *pmf.target() == 0) break;
      return CheckQuery1Shape(pmf);
    case MechanismKind::kQuery2:
      if (!pmf.target().has_value() || *pmf.target() == 0) break;
      return CheckQuery2Shape(pmf);
    case MechanismKind::kGeometricBaseline:
      return CheckGeometricShape(pmf);
  }
  return absl::InvalidArgumentError(
      absl::StrCat("no shape contract for ", KindName(pmf.kind()),
                   " without a nonzero target"));
}

absl::StatusOr<VerificationReport> VerifyPmf(const DiscretePmf& pmf,
                                             double tol) {
  VerificationReport report;
  report.nominal_rho = pmf.params().rho;
  report.checks.push_back(CheckPmfValidity(pmf, tol));
  absl::StatusOr<Check> shape = CheckShape(pmf);
  if (!shape.ok()) return shape.status();
  report.checks.push_back(*std::move(shape));
  return report;
}

absl::StatusOr<double> MeasureEmpiricalEpsilon(MechanismKind kind,
                                               const PrivacyParams& params,
                                               const GridSpec& grid,
                                               int64_t absolute_target,
                                               InputRange inputs) {
  if (inputs.last <= inputs.first) {
    return absl::InvalidArgumentError(
        "input range must contain at least two adjacent inputs");
  }
  if (kind != MechanismKind::kGeometricBaseline &&
      inputs.first <= absolute_target && absolute_target <= inputs.last) {
    return absl::FailedPreconditionError(absl::StrCat(
        "input range [", inputs.first, ", ", inputs.last,
        "] reaches the PoI at ", absolute_target,
        "; the mechanism flips direction there and is not measured"));
  }

  std::vector<DiscretePmf> pmfs;
  for (int64_t i = inputs.first; i <= inputs.last; ++i) {
    absl::StatusOr<DiscretePmf> pmf =
        BuildPmf(kind, params, grid, absolute_target - i);
    if (!pmf.ok()) return pmf.status();
    pmfs.push_back(*std::move(pmf));
  }

  double worst = 0.0;
  for (size_t k = 0; k + 1 < pmfs.size(); ++k) {
    const int64_t i = inputs.first + static_cast<int64_t>(k);
    const int64_t j = i + 1;
    const DiscretePmf& a = pmfs[k];
    const DiscretePmf& b = pmfs[k + 1];
    // Past both supports the two log-masses fall at the same rate, so a
    // two-step margin covers every distinct ratio.
    const int64_t from = std::min(i + a.lo(), j + b.lo()) - 2;
    const int64_t to = std::max(i + a.hi(), j + b.hi()) + 2;
    for (int64_t z = from; z <= to; ++z) {
      const double gap = std::abs(LogMassAt(a, z - i) - LogMassAt(b, z - j));
      worst = std::max(worst, gap);
    }
  }
  return worst;
}

absl::StatusOr<double> OracleNormalizer(MechanismKind kind,
                                        const PrivacyParams& params,
                                        int64_t target) {
  if (absl::Status status = params.Validate(); !status.ok()) return status;
  if (kind != MechanismKind::kGeometricBaseline && target == 0) {
    return absl::InvalidArgumentError("oracle needs a nonzero target");
  }
  const long double rho = params.rho;
  const long double alpha = params.alpha;
  long double low = 0.0L;
  long double high = 1.0L;
  for (int iter = 0; iter < 200; ++iter) {
    const long double mid = 0.5L * (low + high);
    absl::StatusOr<long double> total =
        TotalMass(kind, mid, rho, alpha, target);
    if (!total.ok()) return total.status();
    if (*total > 1.0L) {
      high = mid;
    } else {
      low = mid;
    }
    if (high - low < 1e-18L) return static_cast<double>(0.5L * (low + high));
  }
  return absl::InternalError("normalizer bisection did not converge");
}

}  // namespace locpriv
