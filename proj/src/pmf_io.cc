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

#include "locpriv/pmf_io.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace locpriv {
namespace {

constexpr absl::string_view kCsvHeader = "offset,probability";

}  // namespace

std::string FormatProbability(double value) {
  return absl::StrFormat("%.16e", value);
}

std::string PmfToCsv(const DiscretePmf& pmf) {
  std::string out = absl::StrCat(kCsvHeader, "\n");
  for (int64_t x = pmf.lo(); x <= pmf.hi(); ++x) {
    absl::StrAppend(&out, x, ",", FormatProbability(pmf.Mass(x)), "\n");
  }
  return out;
}

nlohmann::json PmfMetadata(const DiscretePmf& pmf) {
  nlohmann::json meta;
  meta["kind"] = KindName(pmf.kind());
  meta["rho"] = pmf.params().rho;
  meta["alpha"] = pmf.params().alpha;
  meta["delta"] = pmf.grid().delta;
  meta["target"] = pmf.target().has_value() ? nlohmann::json(*pmf.target())
                                            : nlohmann::json(nullptr);
  meta["p"] = pmf.p();
  meta["tail_mass"] = pmf.grid().tail_mass;
  meta["lo"] = pmf.lo();
  meta["hi"] = pmf.hi();
  return meta;
}

absl::StatusOr<DiscretePmf> ParsePmf(absl::string_view csv,
                                     const nlohmann::json& metadata) {
  MechanismKind kind;
  PrivacyParams params;
  GridSpec grid;
  std::optional<int64_t> target;
  int64_t lo = 0;
  int64_t hi = 0;
  double p = 0.0;
  try {
    absl::StatusOr<MechanismKind> parsed =
        ParseKind(metadata.at("kind").get<std::string>());
    if (!parsed.ok()) return parsed.status();
    kind = *parsed;
    params.rho = metadata.at("rho").get<double>();
    params.alpha = metadata.at("alpha").get<double>();
    grid.delta = metadata.at("delta").get<double>();
    grid.tail_mass = metadata.at("tail_mass").get<double>();
    if (!metadata.at("target").is_null()) {
      target = metadata.at("target").get<int64_t>();
    }
    p = metadata.at("p").get<double>();
    lo = metadata.at("lo").get<int64_t>();
    hi = metadata.at("hi").get<int64_t>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed pmf metadata: ", e.what()));
  }
  if (absl::Status status = params.Validate(); !status.ok()) return status;
  if (absl::Status status = grid.Validate(); !status.ok()) return status;
  if (kind != MechanismKind::kGeometricBaseline && !target.has_value()) {
    return absl::InvalidArgumentError("metadata lacks a target");
  }
  if (hi < lo) return absl::InvalidArgumentError("metadata has hi < lo");

  std::vector<absl::string_view> lines =
      absl::StrSplit(csv, '\n', absl::SkipEmpty());
  if (lines.empty() || absl::StripSuffix(lines.front(), "\r") != kCsvHeader) {
    return absl::InvalidArgumentError(
        absl::StrCat("csv must start with header '", kCsvHeader, "'"));
  }
  if (static_cast<int64_t>(lines.size()) - 1 != hi - lo + 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "csv has ", lines.size() - 1, " rows, metadata expects ", hi - lo + 1));
  }
  Eigen::ArrayXd masses(hi - lo + 1);
  for (size_t i = 1; i < lines.size(); ++i) {
    std::vector<absl::string_view> fields =
        absl::StrSplit(absl::StripSuffix(lines[i], "\r"), ',');
    int64_t offset;
    double mass;
    if (fields.size() != 2 || !absl::SimpleAtoi(fields[0], &offset) ||
        !absl::SimpleAtod(fields[1], &mass)) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed csv row ", i, ": '", lines[i], "'"));
    }
    const int64_t expected = lo + static_cast<int64_t>(i) - 1;
    if (offset != expected) {
      return absl::InvalidArgumentError(absl::StrCat(
          "csv row ", i, " has offset ", offset, ", expected ", expected));
    }
    masses[offset - lo] = mass;
  }
  return DiscretePmf::FromStored(kind, params, grid, target, lo,
                                 std::move(masses), p);
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, absl::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot open ", path, " for writing"));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) return absl::DataLossError(absl::StrCat("failed writing ", path));
  return absl::OkStatus();
}

absl::Status WritePmf(const DiscretePmf& pmf, const std::string& prefix) {
  if (absl::Status status = WriteFile(prefix + ".csv", PmfToCsv(pmf));
      !status.ok()) {
    return status;
  }
  return WriteFile(prefix + ".json", PmfMetadata(pmf).dump(2) + "\n");
}

absl::StatusOr<DiscretePmf> ReadPmf(const std::string& prefix) {
  absl::StatusOr<std::string> csv = ReadFile(prefix + ".csv");
  if (!csv.ok()) return csv.status();
  absl::StatusOr<std::string> meta_text = ReadFile(prefix + ".json");
  if (!meta_text.ok()) return meta_text.status();
  nlohmann::json meta = nlohmann::json::parse(*meta_text, nullptr,
                                              /*allow_exceptions=*/false);
  if (meta.is_discarded()) {
    return absl::InvalidArgumentError(
        absl::StrCat(prefix, ".json is not valid JSON"));
  }
  return ParsePmf(*csv, meta);
}

}  // namespace locpriv
