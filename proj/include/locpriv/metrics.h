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

#ifndef LOCPRIV_METRICS_H_
#define LOCPRIV_METRICS_H_

#include <cstdint>
#include <limits>

#include "absl/status/statusor.h"
#include "locpriv/params.h"
#include "locpriv/pmf.h"

namespace locpriv {

// Open interval (m_minus, m_plus) of outputs, in grid steps, that keep the
// distance ranking of every PoI unchanged. Bounds may be infinite.
struct ToleranceRegion {
  double m_minus = -std::numeric_limits<double>::infinity();
  double m_plus = std::numeric_limits<double>::infinity();
  bool lower_open = true;
  bool upper_open = true;

  bool Contains(double z) const {
    const bool above = lower_open ? z > m_minus : z >= m_minus;
    const bool below = upper_open ? z < m_plus : z <= m_plus;
    return above && below;
  }
};

// E|z|, in grid steps.
double ExpectedDisplacement(const DiscretePmf& pmf);

// E| |L| - |L - z| |, in grid steps: how far the distance to the PoI at L
// reported from the output z is from the true distance.
double ExpectedDistanceError(const DiscretePmf& pmf, int64_t poi);

// Mass on the target's side over mass on the opposite side, offset 0
// excluded. Only defined for the query-1 distribution.
absl::StatusOr<double> DirectionalMassRatio(const DiscretePmf& pmf);

// Fails with InvalidArgument when two PoIs are equidistant from 0.
absl::StatusOr<ToleranceRegion> ComputeToleranceLimits(const PoiPrior& prior);

// Mass on grid offsets strictly inside the tolerance region.
absl::StatusOr<double> RankingPreservationMass(const DiscretePmf& pmf,
                                               const PoiPrior& prior);

// E| d(z) - d(0) |, in grid steps, where d(z) is the distance from z to its
// nearest PoI.
double ExpectedNearestDistanceError(const DiscretePmf& pmf,
                                    const PoiPrior& prior);

// Mass on the offsets whose nearest PoI (ties to the smaller coordinate) is
// the same as the nearest PoI of offset 0.
absl::StatusOr<double> NearestPoiPreservationMass(const DiscretePmf& pmf,
                                                  const PoiPrior& prior);

// Analytic mass on the integer offsets of [from, to]; either bound may lie
// outside the stored support.
double MassOnRange(const DiscretePmf& pmf, int64_t from, int64_t to);

}  // namespace locpriv

#endif  // LOCPRIV_METRICS_H_
