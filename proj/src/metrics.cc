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

#include "locpriv/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "absl/strings/str_cat.h"

namespace locpriv {
namespace {

constexpr int64_t kNoLowerBound = std::numeric_limits<int64_t>::min();
constexpr int64_t kNoUpperBound = std::numeric_limits<int64_t>::max();

// Sum of m0 * q^k for k in [a, b], with b possibly unbounded.
double GeometricRangeSum(const DiscretePmf& pmf, double m0, int64_t a,
                         int64_t b) {
  const double rho = pmf.params().rho;
  const double head = std::exp(-static_cast<double>(a) * rho);
  const double rest = b == kNoUpperBound
                          ? 0.0
                          : std::exp(-static_cast<double>(b + 1) * rho);
  return m0 * (head - rest) / pmf.TailDenominator();
}

// E[f(z)] over the omitted tail on one side. `f` must grow by exactly one per
// step outward from `breakpoint`; between the support edge and the
// breakpoint the terms are summed one by one.
template <typename F>
double TailExpectation(const DiscretePmf& pmf, TailSide side, F f,
                       int64_t breakpoint) {
  const int64_t step = side == TailSide::kRight ? 1 : -1;
  int64_t z = side == TailSide::kRight ? pmf.hi() + 1 : pmf.lo() - 1;
  double sum = 0.0;
  while ((z - breakpoint) * step < 0) {
    sum += pmf.AnalyticMass(z) * f(z);
    z += step;
  }
  const double denom = pmf.TailDenominator();
  const double q = std::exp(-pmf.params().rho);
  return sum + pmf.AnalyticMass(z) * (f(z) / denom + q / (denom * denom));
}

}  // namespace

double MassOnRange(const DiscretePmf& pmf, int64_t from, int64_t to) {
  if (from > to) return 0.0;
  double total = 0.0;
  const int64_t a = std::max(from, pmf.lo());
  const int64_t b = std::min(to, pmf.hi());
  if (a <= b) total += pmf.masses().segment(a - pmf.lo(), b - a + 1).sum();
  if (from < pmf.lo()) {
    const int64_t edge = pmf.lo() - 1;
    const int64_t near = edge - std::min(to, edge);
    const int64_t far = from == kNoLowerBound ? kNoUpperBound : edge - from;
    if (near <= far) {
      total += GeometricRangeSum(pmf, pmf.AnalyticMass(edge), near, far);
    }
  }
  if (to > pmf.hi()) {
    const int64_t edge = pmf.hi() + 1;
    const int64_t near = std::max(from, edge) - edge;
    const int64_t far = to == kNoUpperBound ? kNoUpperBound : to - edge;
    if (near <= far) {
      total += GeometricRangeSum(pmf, pmf.AnalyticMass(edge), near, far);
    }
  }
  return total;
}

double ExpectedDisplacement(const DiscretePmf& pmf) {
  auto f = [](int64_t z) { return static_cast<double>(std::llabs(z)); };
  return (pmf.Offsets().abs() * pmf.masses()).sum() +
         TailExpectation(pmf, TailSide::kLeft, f, 0) +
         TailExpectation(pmf, TailSide::kRight, f, 0);
}

double ExpectedDistanceError(const DiscretePmf& pmf, int64_t poi) {
  const double length = static_cast<double>(poi);
  const Eigen::ArrayXd z = pmf.Offsets();
  const double inside =
      ((std::abs(length) - (length - z).abs()).abs() * pmf.masses()).sum();
  auto f = [length](int64_t x) {
    return std::abs(std::abs(length) -
                    std::abs(length - static_cast<double>(x)));
  };
  return inside +
         TailExpectation(pmf, TailSide::kLeft, f, std::min<int64_t>(0, 2 * poi)) +
         TailExpectation(pmf, TailSide::kRight, f,
                         std::max<int64_t>(0, 2 * poi));
}

double ExpectedNearestDistanceError(const DiscretePmf& pmf,
                                    const PoiPrior& prior) {
  const std::vector<int64_t>& pois = prior.pois();
  auto nearest_distance = [&pois](int64_t z) {
    int64_t best = std::llabs(z - pois.front());
    for (int64_t poi : pois) best = std::min<int64_t>(best, std::llabs(z - poi));
    return best;
  };
  const int64_t truth = nearest_distance(0);
  auto f = [&](int64_t z) {
    return static_cast<double>(std::llabs(nearest_distance(z) - truth));
  };
  double inside = 0.0;
  for (int64_t z = pmf.lo(); z <= pmf.hi(); ++z) inside += pmf.Mass(z) * f(z);
  // Past the outermost PoI plus the true distance, f grows one per step.
  const int64_t right = std::max<int64_t>(0, pois.back() + truth);
  const int64_t left = std::min<int64_t>(0, pois.front() - truth);
  return inside + TailExpectation(pmf, TailSide::kLeft, f, left) +
         TailExpectation(pmf, TailSide::kRight, f, right);
}

absl::StatusOr<double> DirectionalMassRatio(const DiscretePmf& pmf) {
  if (pmf.kind() != MechanismKind::kQuery1 || !pmf.target().has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat("directional mass ratio needs a query1 pmf, got ",
                     KindName(pmf.kind())));
  }
  const double positive = MassOnRange(pmf, 1, kNoUpperBound);
  const double negative = MassOnRange(pmf, kNoLowerBound, -1);
  return *pmf.target() > 0 ? positive / negative : negative / positive;
}

absl::StatusOr<ToleranceRegion> ComputeToleranceLimits(const PoiPrior& prior) {
  std::vector<int64_t> ranked = prior.pois();
  std::stable_sort(ranked.begin(), ranked.end(), [](int64_t a, int64_t b) {
    return std::llabs(a) < std::llabs(b);
  });
  ToleranceRegion region;
  for (size_t k = 0; k + 1 < ranked.size(); ++k) {
    const int64_t nearer = ranked[k];
    const int64_t farther = ranked[k + 1];
    if (std::llabs(nearer) == std::llabs(farther)) {
      return absl::InvalidArgumentError(
          absl::StrCat("PoIs ", nearer, " and ", farther,
                       " are equidistant from the true location; ranking is "
                       "ambiguous"));
    }
    const double bisector =
        (static_cast<double>(nearer) + static_cast<double>(farther)) / 2.0;
    if (farther > nearer) {
      region.m_plus = std::min(region.m_plus, bisector);
    } else {
      region.m_minus = std::max(region.m_minus, bisector);
    }
  }
  return region;
}

absl::StatusOr<double> RankingPreservationMass(const DiscretePmf& pmf,
                                               const PoiPrior& prior) {
  absl::StatusOr<ToleranceRegion> region = ComputeToleranceLimits(prior);
  if (!region.ok()) return region.status();
  const int64_t from =
      std::isinf(region->m_minus)
          ? kNoLowerBound
          : static_cast<int64_t>(std::floor(region->m_minus)) + 1;
  const int64_t to =
      std::isinf(region->m_plus)
          ? kNoUpperBound
          : static_cast<int64_t>(std::ceil(region->m_plus)) - 1;
  return std::clamp(MassOnRange(pmf, from, to), 0.0, 1.0);
}

absl::StatusOr<double> NearestPoiPreservationMass(const DiscretePmf& pmf,
                                                  const PoiPrior& prior) {
  const std::vector<int64_t>& pois = prior.pois();
  // Sorted ascending, so the first minimum wins ties.
  int64_t nearest = pois.front();
  for (int64_t poi : pois) {
    if (std::llabs(poi) < std::llabs(nearest)) nearest = poi;
  }
  int64_t from = kNoLowerBound;
  int64_t to = kNoUpperBound;
  for (int64_t other : pois) {
    if (other == nearest) continue;
    // Integer floor of the midpoint; sums of two offsets may be odd.
    const int64_t sum = nearest + other;
    const int64_t half = sum >= 0 ? sum / 2 : -((-sum + 1) / 2);
    if (other > nearest) {
      to = std::min(to, half);
    } else {
      from = std::max(from, half + 1);
    }
  }
  return std::clamp(MassOnRange(pmf, from, to), 0.0, 1.0);
}

}  // namespace locpriv
