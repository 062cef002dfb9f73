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

#ifndef LOCPRIV_SAMPLER_H_
#define LOCPRIV_SAMPLER_H_

#include <cstdint>
#include <random>
#include <vector>

#include "absl/status/statusor.h"
#include "locpriv/pmf.h"

namespace locpriv {

using Engine = std::mt19937_64;

// Uniform double in [0, 1) from the top 53 bits of one engine output, so
// streams are reproducible across standard library implementations.
inline double UniformUnit(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

// Inverse-CDF sampler over a pmf's stored support. The residual analytic
// tail on each side is folded onto the farthest stored offset of that side.
class Sampler {
 public:
  static absl::StatusOr<Sampler> Create(const DiscretePmf& pmf);

  int64_t Draw(Engine& engine) const;

  int64_t lo() const { return lo_; }
  int64_t hi() const { return lo_ + static_cast<int64_t>(cdf_.size()) - 1; }

 private:
  Sampler(int64_t lo, double left_tail, std::vector<double> cdf)
      : lo_(lo), left_tail_(left_tail), cdf_(std::move(cdf)) {}

  int64_t lo_;
  double left_tail_;
  // Inclusive running sums of the stored masses.
  std::vector<double> cdf_;
};

// `n` independent draws from `pmf` using a fresh engine seeded with `seed`.
absl::StatusOr<std::vector<int64_t>> Sample(const DiscretePmf& pmf,
                                            uint64_t seed, int64_t n);

}  // namespace locpriv

#endif  // LOCPRIV_SAMPLER_H_
