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

// Distribution files: `<prefix>.csv` holds the stored masses under the header
// `offset,probability`; `<prefix>.json` holds the metadata needed to rebuild
// the analytic tails.

#ifndef LOCPRIV_PMF_IO_H_
#define LOCPRIV_PMF_IO_H_

#include <string>
#include "absl/strings/string_view.h"

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "locpriv/pmf.h"

namespace locpriv {

// 17 significant digits in scientific notation; round-trips every double.
std::string FormatProbability(double value);

std::string PmfToCsv(const DiscretePmf& pmf);

// {kind, rho, alpha, delta, target, p, tail_mass, lo, hi}; target is null for
// the baseline.
nlohmann::json PmfMetadata(const DiscretePmf& pmf);

absl::StatusOr<DiscretePmf> ParsePmf(absl::string_view csv,
                                     const nlohmann::json& metadata);

absl::Status WritePmf(const DiscretePmf& pmf, const std::string& prefix);
absl::StatusOr<DiscretePmf> ReadPmf(const std::string& prefix);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, absl::string_view contents);

}  // namespace locpriv

#endif  // LOCPRIV_PMF_IO_H_
