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

#include "locpriv/sampler.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace locpriv {

absl::StatusOr<Sampler> Sampler::Create(const DiscretePmf& pmf) {
  if (pmf.size() == 0) {
    return absl::InvalidArgumentError("pmf has empty support");
  }
  std::vector<double> cdf(pmf.size());
  double running = 0.0;
  for (int64_t i = 0; i < pmf.size(); ++i) {
    const double m = pmf.masses()[i];
    if (!(m >= 0.0) || !std::isfinite(m)) {
      return absl::InvalidArgumentError(
          absl::StrCat("invalid mass ", m, " at offset ", pmf.lo() + i));
    }
    running += m;
    cdf[i] = running;
  }
  if (!(running > 0.0) || running > 1.0 + 1e-9) {
    return absl::InvalidArgumentError(
        absl::StrCat("stored mass ", running, " is not a probability"));
  }
  return Sampler(pmf.lo(), pmf.TailMass(TailSide::kLeft), std::move(cdf));
}

int64_t Sampler::Draw(Engine& engine) const {
  const double u = UniformUnit(engine);
  if (u < left_tail_) return lo_;
  const double v = u - left_tail_;
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), v);
  if (it == cdf_.end()) return hi();
  return lo_ + (it - cdf_.begin());
}

absl::StatusOr<std::vector<int64_t>> Sample(const DiscretePmf& pmf,
                                            uint64_t seed, int64_t n) {
  if (n < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("sample count must be >= 1, got ", n));
  }
  absl::StatusOr<Sampler> sampler = Sampler::Create(pmf);
  if (!sampler.ok()) return sampler.status();
  Engine engine(seed);
  std::vector<int64_t> draws(n);
  for (int64_t& d : draws) d = sampler->Draw(engine);
  return draws;
}

}  // namespace locpriv
