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

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "locpriv/harness.h"
#include "locpriv/metrics.h"
#include "locpriv/params.h"
#include "locpriv/pmf.h"
#include "locpriv/pmf_io.h"
#include "locpriv/sampler.h"
#include "locpriv/verifier.h"

namespace locpriv::cli {
namespace {

// PoI offset used when a subcommand is given none.
constexpr int64_t kDefaultTarget = 10;
constexpr double kFigureAlpha = 4.0;

// Flags shared by every subcommand that builds a distribution.
struct MechanismFlags {
  std::string query = "q1";
  double rho = 0.0;
  double epsilon = 0.0;
  double radius = 1.0;
  double alpha = 0.0;
  double rho0 = 0.0;
  double target = 0.0;
  double delta = 1.0;
  double tail_mass = kDefaultTailMass;

  CLI::Option* rho_opt = nullptr;
  CLI::Option* epsilon_opt = nullptr;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* target_opt = nullptr;

  // Set after parsing; subcommands with baked-in defaults may raise them.
  bool has_rho = false;
  bool has_epsilon = false;
  bool has_alpha = false;
  bool has_target = false;

  void CaptureCounts() {
    has_rho = rho_opt->count() > 0;
    has_epsilon = epsilon_opt->count() > 0;
    has_alpha = alpha_opt->count() > 0;
    has_target = target_opt->count() > 0;
  }
};

struct Mechanism {
  MechanismKind kind;
  PrivacyParams params;
  GridSpec grid;
  std::optional<int64_t> target;
};

void AddMechanismFlags(CLI::App* cmd, MechanismFlags& f, bool with_query) {
  if (with_query) {
    cmd->add_option("--query", f.query, "q1, q2 or baseline")
        ->capture_default_str();
  }
  f.rho_opt = cmd->add_option("--rho", f.rho, "privacy level per grid step");
  f.epsilon_opt =
      cmd->add_option("--epsilon", f.epsilon, "epsilon; rho = epsilon * r");
  cmd->add_option("--radius", f.radius, "privacy radius r in grid steps");
  f.alpha_opt =
      cmd->add_option("--alpha", f.alpha, "anti-prior suppression parameter");
  cmd->add_option("--rho0", f.rho0, "outside-radius level (recorded only)");
  f.target_opt =
      cmd->add_option("--target", f.target, "PoI offset in grid steps");
  cmd->add_option("--delta", f.delta, "meters per grid step")
      ->capture_default_str();
  cmd->add_option("--tail-mass", f.tail_mass, "truncation budget")
      ->capture_default_str();
}

absl::Status FlagError(const char* flag, const std::string& why) {
  return absl::InvalidArgumentError(absl::StrCat(flag, " ", why));
}

absl::StatusOr<Mechanism> ResolveMechanism(const MechanismFlags& f,
                                           bool target_required) {
  absl::StatusOr<MechanismKind> kind = ParseKind(f.query);
  if (!kind.ok()) return FlagError("--query", std::string(kind.status().message()));
  const bool has_rho = f.has_rho;
  const bool has_eps = f.has_epsilon;
  if (!(f.radius > 0.0) || !std::isfinite(f.radius)) {
    return FlagError("--radius", absl::StrCat("must be > 0, got ", f.radius));
  }
  double rho = f.rho;
  if (has_eps) {
    if (!(f.epsilon > 0.0) || !std::isfinite(f.epsilon)) {
      return FlagError("--epsilon", absl::StrCat("must be > 0, got ", f.epsilon));
    }
    const double implied = f.epsilon * f.radius;
    if (has_rho && std::abs(implied - f.rho) > 1e-12 * std::abs(implied)) {
      return FlagError("--rho", absl::StrCat("= ", f.rho,
                                             " conflicts with --epsilon * "
                                             "--radius = ",
                                             implied));
    }
    rho = implied;
  } else if (!has_rho) {
    return FlagError("--rho", "is required (or give --epsilon and --radius)");
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    return FlagError("--rho", absl::StrCat("must be > 0, got ", rho));
  }
  if (!(f.alpha >= 0.0) || !std::isfinite(f.alpha)) {
    return FlagError("--alpha", absl::StrCat("must be >= 0, got ", f.alpha));
  }
  if (!(f.rho0 >= 0.0) || !std::isfinite(f.rho0)) {
    return FlagError("--rho0", absl::StrCat("must be >= 0, got ", f.rho0));
  }
  if (!(f.delta > 0.0) || !std::isfinite(f.delta)) {
    return FlagError("--delta", absl::StrCat("must be > 0, got ", f.delta));
  }
  if (!(f.tail_mass > 0.0 && f.tail_mass <= 1e-6)) {
    return FlagError("--tail-mass",
                     absl::StrCat("must lie in (0, 1e-6], got ", f.tail_mass));
  }
  Mechanism m{.kind = *kind,
              .params = {.rho = rho, .alpha = f.alpha, .r = f.radius,
                         .rho0 = f.rho0},
              .grid = {.delta = f.delta, .tail_mass = f.tail_mass},
              .target = std::nullopt};
  if (f.has_target) {
    if (!std::isfinite(f.target)) return FlagError("--target", "must be finite");
    const Snapped snapped = SnapToGrid(f.target);
    if (snapped.offset == 0 && *kind != MechanismKind::kGeometricBaseline) {
      return FlagError("--target",
                       absl::StrCat(f.target, " snaps to offset 0"));
    }
    m.target = snapped.offset;
  }
  if (target_required && !m.target.has_value() &&
      *kind != MechanismKind::kGeometricBaseline) {
    return FlagError("--target", "is required for q1 and q2");
  }
  return m;
}

absl::StatusOr<DiscretePmf> BuildFrom(const Mechanism& m) {
  return BuildPmf(m.kind, m.params, m.grid, m.target.value_or(0));
}

std::string ResolveOutputPath(const std::string& path) {
  std::filesystem::path p(path);
  const char* dir = std::getenv(kOutDirEnv);
  if (p.is_relative() && dir != nullptr && *dir != '\0') {
    return (std::filesystem::path(dir) / p).string();
  }
  return p.string();
}

absl::Status Emit(const std::string& out_path, const std::string& text,
                  std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return absl::OkStatus();
  }
  return WriteFile(ResolveOutputPath(out_path), text);
}

absl::StatusOr<nlohmann::json> ReadJsonFile(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  nlohmann::json json = nlohmann::json::parse(*text, nullptr, false);
  if (json.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat(path, " is not valid JSON"));
  }
  return json;
}

nlohmann::json RegionJson(const ToleranceRegion& region) {
  auto bound = [](double v) {
    return std::isinf(v) ? nlohmann::json() : nlohmann::json(v);
  };
  return {{"m_minus", bound(region.m_minus)},
          {"m_plus", bound(region.m_plus)},
          {"lower_open", region.lower_open},
          {"upper_open", region.upper_open}};
}

std::string Dump(const nlohmann::json& json) { return json.dump(2) + "\n"; }

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Prior-aware location perturbation mechanisms"};
  app.require_subcommand(1);

  MechanismFlags build_flags, sample_flags, verify_flags, epsilon_flags,
      metrics_flags, figure_flags;
  std::string out_path;
  std::string in_prefix;
  std::string scenario_path;
  int64_t n_samples = 1;
  uint64_t seed = 0;
  int which = 0;
  std::string pois_text;
  int64_t input_first = 0;
  int64_t input_last = 0;
  double tol = 1e-12;

  CLI::App* build = app.add_subcommand("build", "build and write a distribution");
  AddMechanismFlags(build, build_flags, true);
  build->add_option("--out", out_path, "output prefix (<prefix>.csv/.json)");

  CLI::App* sample = app.add_subcommand("sample", "draw perturbed offsets");
  AddMechanismFlags(sample, sample_flags, true);
  sample->add_option("--in", in_prefix, "read a written distribution");
  sample->add_option("--n", n_samples, "number of draws")->capture_default_str();
  sample->add_option("--seed", seed, "RNG seed")->capture_default_str();
  sample->add_option("--out", out_path, "output CSV path (default stdout)");

  CLI::App* verify = app.add_subcommand("verify", "check validity and shape");
  AddMechanismFlags(verify, verify_flags, true);
  verify->add_option("--in", in_prefix, "read a written distribution");
  verify->add_option("--tol", tol, "normalization tolerance")
      ->capture_default_str();
  verify->add_option("--out", out_path, "output JSON path (default stdout)");

  CLI::App* epsilon = app.add_subcommand("epsilon", "measure empirical epsilon");
  AddMechanismFlags(epsilon, epsilon_flags, true);
  CLI::Option* first_opt =
      epsilon->add_option("--from", input_first, "first input offset");
  CLI::Option* last_opt =
      epsilon->add_option("--to", input_last, "last input offset");
  epsilon->add_option("--out", out_path, "output JSON path (default stdout)");

  CLI::App* metrics = app.add_subcommand("metrics", "utility metrics");
  AddMechanismFlags(metrics, metrics_flags, true);
  metrics->add_option("--pois", pois_text,
                      "comma-separated PoI offsets in grid steps");
  metrics->add_option("--out", out_path, "output JSON path (default stdout)");

  CLI::App* simulate = app.add_subcommand("simulate", "run scenario file");
  simulate->add_option("--scenario", scenario_path, "scenario JSON")
      ->required();
  simulate->add_option("--out", out_path, "output JSON path (default stdout)");

  CLI::App* compare =
      app.add_subcommand("compare", "compare against the geometric baseline");
  compare->add_option("--scenario", scenario_path, "scenario JSON")->required();
  compare->add_option("--out", out_path, "output JSON path (default stdout)");

  CLI::App* figure = app.add_subcommand("figure", "emit figure data");
  AddMechanismFlags(figure, figure_flags, false);
  figure->add_option("--which", which, "2 (query 1) or 3 (query 2)")
      ->required();
  figure->add_option("--out", out_path, "output CSV path (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  for (MechanismFlags* f : {&build_flags, &sample_flags, &verify_flags,
                            &epsilon_flags, &metrics_flags, &figure_flags}) {
    f->CaptureCounts();
  }

  auto fail = [&err](const absl::Status& status) {
    err << "error: " << status.message() << "\n";
    return kExitUsage;
  };

  if (build->parsed()) {
    absl::StatusOr<Mechanism> m = ResolveMechanism(build_flags, true);
    if (!m.ok()) return fail(m.status());
    absl::StatusOr<DiscretePmf> pmf = BuildFrom(*m);
    if (!pmf.ok()) return fail(pmf.status());
    const std::string prefix =
        ResolveOutputPath(out_path.empty() ? std::string("pmf") : out_path);
    if (absl::Status st = WritePmf(*pmf, prefix); !st.ok()) return fail(st);
    out << prefix << ".csv\n" << prefix << ".json\n";
    return kExitOk;
  }

  if (sample->parsed() || verify->parsed()) {
    absl::StatusOr<DiscretePmf> pmf = absl::UnknownError("unset");
    if (!in_prefix.empty()) {
      pmf = ReadPmf(in_prefix);
    } else {
      const MechanismFlags& flags =
          sample->parsed() ? sample_flags : verify_flags;
      absl::StatusOr<Mechanism> m = ResolveMechanism(flags, true);
      if (!m.ok()) return fail(m.status());
      pmf = BuildFrom(*m);
    }
    if (!pmf.ok()) return fail(pmf.status());
    if (sample->parsed()) {
      absl::StatusOr<std::vector<int64_t>> draws = Sample(*pmf, seed, n_samples);
      if (!draws.ok()) return fail(draws.status());
      std::string text = "offset\n";
      for (int64_t d : *draws) absl::StrAppend(&text, d, "\n");
      if (absl::Status st = Emit(out_path, text, out); !st.ok()) return fail(st);
      return kExitOk;
    }
    absl::StatusOr<VerificationReport> report = VerifyPmf(*pmf, tol);
    if (!report.ok()) return fail(report.status());
    if (absl::Status st = Emit(out_path, Dump(report->ToJson()), out);
        !st.ok()) {
      return fail(st);
    }
    return report->AllPassed() ? kExitOk : kExitCheckFailed;
  }

  if (epsilon->parsed()) {
    if (!epsilon_flags.has_target) {
      epsilon_flags.target = kDefaultTarget;
      epsilon_flags.has_target = true;
    }
    absl::StatusOr<Mechanism> m = ResolveMechanism(epsilon_flags, true);
    if (!m.ok()) return fail(m.status());
    const int64_t target = m->target.value_or(kDefaultTarget);
    InputRange inputs = target > 0 ? InputRange{-1, 0} : InputRange{0, 1};
    if (first_opt->count() > 0) inputs.first = input_first;
    if (last_opt->count() > 0) inputs.last = input_last;
    absl::StatusOr<double> eps =
        MeasureEmpiricalEpsilon(m->kind, m->params, m->grid, target, inputs);
    if (!eps.ok()) return fail(eps.status());
    nlohmann::json report = {
        {"kind", KindName(m->kind)},
        {"nominal_rho", m->params.rho},
        {"alpha", m->params.alpha},
        {"absolute_target", target},
        {"inputs", {inputs.first, inputs.last}},
        {"empirical_epsilon", *eps},
        {"ratio_to_nominal", *eps / m->params.rho},
    };
    if (absl::Status st = Emit(out_path, Dump(report), out); !st.ok()) {
      return fail(st);
    }
    return kExitOk;
  }

  if (metrics->parsed()) {
    std::vector<int64_t> pois;
    if (!pois_text.empty()) {
      std::stringstream ss(pois_text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        double v;
        try {
          size_t used = 0;
          v = std::stod(item, &used);
          if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
          return fail(FlagError("--pois", absl::StrCat("bad entry '", item, "'")));
        }
        pois.push_back(SnapToGrid(v).offset);
      }
    }
    absl::StatusOr<Mechanism> m = ResolveMechanism(metrics_flags, pois.empty());
    if (!m.ok()) return fail(m.status());
    if (pois.empty()) {
      if (!m->target.has_value()) {
        return fail(FlagError("--pois", "or --target is required"));
      }
      pois.push_back(*m->target);
    }
    absl::StatusOr<PoiPrior> prior = PoiPrior::Create(pois, m->target);
    if (!prior.ok()) return fail(prior.status());
    m->target = prior->target();
    absl::StatusOr<DiscretePmf> pmf = BuildFrom(*m);
    if (!pmf.ok()) return fail(pmf.status());

    nlohmann::json report;
    report["kind"] = KindName(pmf->kind());
    report["target"] = prior->target();
    report["pois"] = prior->pois();
    report["expected_displacement"] = ExpectedDisplacement(*pmf);
    report["expected_distance_error"] =
        ExpectedDistanceError(*pmf, prior->target());
    report["expected_nearest_distance_error"] =
        ExpectedNearestDistanceError(*pmf, *prior);
    absl::StatusOr<double> ratio = DirectionalMassRatio(*pmf);
    report["directional_mass_ratio"] =
        ratio.ok() ? nlohmann::json(*ratio) : nlohmann::json();
    absl::StatusOr<ToleranceRegion> region = ComputeToleranceLimits(*prior);
    if (region.ok()) {
      report["tolerance_region"] = RegionJson(*region);
      report["ranking_preservation_mass"] =
          *RankingPreservationMass(*pmf, *prior);
    } else {
      report["tolerance_region"] = nlohmann::json();
      report["ranking_preservation_mass"] = nlohmann::json();
      report["tolerance_error"] = std::string(region.status().message());
    }
    absl::StatusOr<double> nearest = NearestPoiPreservationMass(*pmf, *prior);
    if (!nearest.ok()) return fail(nearest.status());
    report["nearest_poi_preservation_mass"] = *nearest;
    if (absl::Status st = Emit(out_path, Dump(report), out); !st.ok()) {
      return fail(st);
    }
    return kExitOk;
  }

  if (simulate->parsed() || compare->parsed()) {
    absl::StatusOr<nlohmann::json> json = ReadJsonFile(scenario_path);
    if (!json.ok()) return fail(json.status());
    const bool batch = json->is_array();
    std::vector<Scenario> scenarios;
    for (const nlohmann::json& item :
         batch ? *json : nlohmann::json::array({*json})) {
      absl::StatusOr<Scenario> s = ScenarioFromJson(item);
      if (!s.ok()) return fail(s.status());
      scenarios.push_back(*std::move(s));
    }
    nlohmann::json results = nlohmann::json::array();
    if (simulate->parsed()) {
      for (absl::StatusOr<SimulationReport>& r : RunScenarios(scenarios)) {
        if (!r.ok()) return fail(r.status());
        results.push_back(r->ToJson());
      }
    } else {
      for (const Scenario& s : scenarios) {
        absl::StatusOr<Comparison> c = CompareMechanisms(s);
        if (!c.ok()) return fail(c.status());
        results.push_back(c->ToJson());
      }
    }
    const nlohmann::json& payload = batch ? results : results.front();
    if (absl::Status st = Emit(out_path, Dump(payload), out); !st.ok()) {
      return fail(st);
    }
    return kExitOk;
  }

  if (figure->parsed()) {
    if (which != 2 && which != 3) {
      return fail(FlagError("--which", absl::StrCat("must be 2 or 3, got ", which)));
    }
    figure_flags.query = which == 2 ? "q1" : "q2";
    if (!figure_flags.has_rho && !figure_flags.has_epsilon) {
      figure_flags.rho = std::numbers::ln2;
      figure_flags.has_rho = true;
    }
    if (!figure_flags.has_alpha) figure_flags.alpha = kFigureAlpha;
    if (!figure_flags.has_target) {
      figure_flags.target = kDefaultTarget;
      figure_flags.has_target = true;
    }
    absl::StatusOr<Mechanism> m = ResolveMechanism(figure_flags, true);
    if (!m.ok()) return fail(m.status());
    absl::StatusOr<DiscretePmf> pmf = BuildFrom(*m);
    if (!pmf.ok()) return fail(pmf.status());
    if (absl::Status st = Emit(out_path, PmfToCsv(*pmf), out); !st.ok()) {
      return fail(st);
    }
    return kExitOk;
  }
  return kExitUsage;
}

}  // namespace locpriv::cli
