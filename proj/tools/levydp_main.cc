//
// Copyright 2026 The LevyDP Authors
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
//

// Command-line front end: account | simulate | verify | sweep.
//
// Exit codes: 0 success, 1 verification failure, 2 configuration error,
// 3 runtime or domain error. Precedence: schema defaults < --config file <
// --set key=value < dedicated flags.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "levydp/accountant.h"
#include "levydp/csv.h"
#include "levydp/privacy_core.h"
#include "levydp/run_config.h"
#include "levydp/simulator.h"
#include "levydp/verify.h"

namespace levydp {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

// Error with the exit code it maps to.
struct Failure {
  int code;
  std::string message;
};

Failure ConfigFailure(const absl::Status& s) {
  return {kExitConfig, std::string(s.message())};
}
Failure RuntimeFailure(const absl::Status& s) {
  return {kExitRuntime, std::string(s.message())};
}

std::string FlagName(const std::string& key) {
  return key.substr(key.find('.') + 1);
}

// Per-subcommand state: flag storage keyed by config key.
struct Command {
  CLI::App* app = nullptr;
  std::vector<std::string> sections;
  std::string config_path;
  std::vector<std::string> assignments;
  std::map<std::string, std::string> flags;
};

void AddFlags(Command& cmd) {
  cmd.app->add_option("--config", cmd.config_path, "INI configuration file");
  cmd.app->add_option("--set", cmd.assignments, "key=value override")
      ->take_all();
  for (const KeySpec& spec : ConfigSchema()) {
    const std::string section = spec.key.substr(0, spec.key.find('.'));
    bool wanted = false;
    for (const std::string& s : cmd.sections) wanted = wanted || s == section;
    if (!wanted) continue;
    std::string names = absl::StrCat("--", FlagName(spec.key));
    std::string dashed = FlagName(spec.key);
    for (char& c : dashed) c = c == '_' ? '-' : c;
    if (dashed != FlagName(spec.key)) absl::StrAppend(&names, ",--", dashed);
    cmd.app->add_option(names, cmd.flags[spec.key],
                        absl::StrCat(spec.help, " [", spec.key, "]"));
  }
}

std::optional<Failure> Resolve(const Command& cmd, RunConfig& config) {
  if (!cmd.config_path.empty()) {
    absl::StatusOr<RunConfig> loaded = RunConfig::Load(cmd.config_path);
    if (!loaded.ok()) return ConfigFailure(loaded.status());
    config = *loaded;
  }
  for (const std::string& a : cmd.assignments) {
    if (absl::Status s = config.SetAssignment(a); !s.ok()) {
      return ConfigFailure(s);
    }
  }
  for (const auto& [key, value] : cmd.flags) {
    CLI::Option* opt = cmd.app->get_option(absl::StrCat("--", FlagName(key)));
    if (opt->count() == 0) continue;
    if (absl::Status s = config.Set(key, value); !s.ok()) {
      return ConfigFailure(s);
    }
  }
  return std::nullopt;
}

// Typed getters that turn a missing key into a message naming the flag.
template <typename T>
T Get(const absl::StatusOr<T>& v, const std::string& key,
      std::optional<Failure>& failure) {
  if (!v.ok()) {
    if (!failure.has_value()) {
      failure = Failure{
          kExitConfig,
          absl::IsNotFound(v.status())
              ? absl::StrCat("missing required flag --", FlagName(key),
                             " (config key ", key, ")")
              : std::string(v.status().message())};
    }
    return T{};
  }
  return *v;
}

struct Reader {
  const RunConfig& config;
  std::optional<Failure> failure;

  double Double(const std::string& key) {
    return Get(config.GetDouble(key), key, failure);
  }
  int64_t Int(const std::string& key) {
    return Get(config.GetInt(key), key, failure);
  }
  std::string String(const std::string& key) {
    return Get(config.GetString(key), key, failure);
  }
  std::vector<double> List(const std::string& key) {
    return Get(config.GetDoubleList(key), key, failure);
  }
};

absl::Status WriteOutputs(const std::string& dir,
                          const std::map<std::string, std::string>& manifest,
                          const std::map<std::string, std::string>& files) {
  for (const auto& [name, content] : files) {
    if (absl::Status s = WriteTextFile(absl::StrCat(dir, "/", name), content);
        !s.ok()) {
      return s;
    }
  }
  return WriteTextFile(absl::StrCat(dir, "/manifest.txt"),
                       FormatManifest(manifest));
}

// Accounting inputs shared by account and sweep.
struct AccountSetup {
  AccountingParams params;
  Horizon horizon;
  NoiseMode mode = NoiseMode::kMultifractal;
  double delta = 1e-5;
  std::vector<double> beta_grid;
};

std::optional<Failure> ReadAccountSetup(const RunConfig& config,
                                        AccountSetup& out) {
  Reader r{config, std::nullopt};
  const std::string mode = r.String("accounting.mode");
  const std::string setting = r.String("accounting.setting");
  out.params.n = r.Int("problem.n");
  out.params.sensitivity = r.Double("problem.sg");
  out.params.d = static_cast<int>(r.Int("problem.d"));
  out.params.beta = r.Double("accounting.beta");
  out.params.gamma = r.Double("problem.gamma");
  out.params.radius = r.Double("problem.R");
  out.params.initial_divergence = r.Double("accounting.f0");
  out.params.noise.alpha = r.Double("noise.alpha");
  out.params.noise.sigma_alpha = r.Double("noise.sigma_alpha");
  out.params.noise.sigma_2 = r.Double("noise.sigma2");
  out.delta = r.Double("accounting.delta");
  out.beta_grid = r.List("accounting.beta_grid");
  if (r.failure.has_value()) return r.failure;
  if (setting == "continuous") {
    out.horizon = Horizon::Continuous(r.Double("accounting.t"));
  } else {
    const int64_t k = r.Int("accounting.k");
    out.horizon = Horizon::Discrete(k, r.Double("accounting.eta"));
  }
  if (r.failure.has_value()) return r.failure;
  if (mode == "multifractal") {
    out.mode = NoiseMode::kMultifractal;
    if (!(out.params.noise.sigma_2 > 0.0)) {
      return Failure{kExitConfig,
                     "multifractal mode requires --sigma2 > 0"};
    }
  } else {
    out.mode = NoiseMode::kPureJump;
    if (out.params.noise.sigma_2 != 0.0 ||
        !(out.params.noise.sigma_alpha > 0.0)) {
      return Failure{kExitConfig,
                     "pure-jump mode requires --sigma2 0 and --sigma_alpha > 0"};
    }
  }
  return std::nullopt;
}

absl::StatusOr<AccountingResult> Bound(const AccountSetup& s, double beta) {
  AccountingParams p = s.params;
  p.beta = beta;
  return s.mode == NoiseMode::kMultifractal ? MultifractalBound(p, s.horizon)
                                            : PureJumpBound(p, s.horizon);
}

int Report(const Failure& f) {
  std::cerr << "levydp: " << f.message << "\n";
  return f.code;
}

int RunAccount(const Command& cmd) {
  RunConfig config;
  if (auto f = Resolve(cmd, config)) return Report(*f);
  AccountSetup setup;
  if (auto f = ReadAccountSetup(config, setup)) return Report(*f);
  std::vector<double> betas = setup.beta_grid;
  if (betas.empty()) betas.push_back(setup.params.beta);

  std::ostringstream csv_text;
  CsvWriter csv(csv_text);
  csv.Row({"beta", "kappa", "regime", "epsilon_at_delta", "zero_delta"});
  std::map<std::string, std::string> manifest =
      config.Resolved({"noise", "problem", "accounting", "output"});
  for (double beta : betas) {
    absl::StatusOr<AccountingResult> r = Bound(setup, beta);
    if (!r.ok()) return Report(RuntimeFailure(r.status()));
    absl::StatusOr<double> eps = RdpToEpsilonDelta(r->guarantee, setup.delta);
    absl::StatusOr<double> zero = RdpToZeroDelta(r->guarantee);
    if (!eps.ok()) return Report(RuntimeFailure(eps.status()));
    if (!zero.ok()) return Report(RuntimeFailure(zero.status()));
    csv.Row({FormatDouble(beta), FormatDouble(r->guarantee.kappa),
             std::string(RegimeName(r->guarantee.regime)), FormatDouble(*eps),
             FormatDouble(*zero)});
    const std::string prefix = absl::StrCat("result.beta_", FormatDouble(beta));
    manifest[prefix + ".drive"] = FormatDouble(r->drive);
    manifest[prefix + ".contraction"] = FormatDouble(r->contraction);
    manifest[prefix + ".linear_value"] = FormatDouble(r->linear_value);
    if (r->uniform_value.has_value()) {
      manifest[prefix + ".uniform_value"] = FormatDouble(*r->uniform_value);
    }
    if (r->dimension_constant.has_value()) {
      manifest[prefix + ".dimension_constant"] =
          FormatDouble(*r->dimension_constant);
      // K scales as R^(alpha-2); the bound is conditional on R.
      manifest["result.radius_exponent"] =
          FormatDouble(setup.params.noise.alpha - 2.0);
    }
  }
  std::cout << csv_text.str();
  const std::string dir = config.GetString("output.dir").value();
  if (absl::Status s =
          WriteOutputs(dir, manifest, {{"account.csv", csv_text.str()}});
      !s.ok()) {
    return Report(RuntimeFailure(s));
  }
  return kExitOk;
}

// Key overwritten row by row along a sweep axis; empty if unknown.
std::string SweptKey(const RunConfig& config) {
  const absl::StatusOr<std::string> axis = config.GetString("sweep.axis");
  if (!axis.ok()) return "";
  if (*axis == "alpha") return "noise.alpha";
  if (*axis == "d") return "problem.d";
  if (*axis == "n") return "problem.n";
  if (*axis == "beta") return "accounting.beta";
  if (*axis == "sigma") {
    const absl::StatusOr<std::string> mode = config.GetString("accounting.mode");
    if (!mode.ok()) return "";
    return *mode == "pure-jump" ? "noise.sigma_alpha" : "noise.sigma2";
  }
  return "";
}

int RunSweep(const Command& cmd) {
  RunConfig config;
  if (auto f = Resolve(cmd, config)) return Report(*f);
  // The swept key need not be given; the first value stands in for it.
  const std::string swept = SweptKey(config);
  const absl::StatusOr<std::vector<double>> swept_values =
      config.GetDoubleList("sweep.values");
  if (!swept.empty() && !config.Has(swept) && swept_values.ok() &&
      !swept_values->empty()) {
    if (absl::Status s = config.Set(swept, FormatDouble(swept_values->front()));
        !s.ok()) {
      return Report(ConfigFailure(s));
    }
  }
  AccountSetup setup;
  if (auto f = ReadAccountSetup(config, setup)) return Report(*f);
  Reader r{config, std::nullopt};
  const std::string axis_name = r.String("sweep.axis");
  const std::vector<double> values = r.List("sweep.values");
  if (r.failure.has_value()) return Report(*r.failure);
  absl::StatusOr<SweepAxis> axis = ParseSweepAxis(axis_name);
  if (!axis.ok()) return Report(ConfigFailure(axis.status()));
  if (values.empty()) {
    return Report({kExitConfig, "sweep needs at least one --values entry"});
  }
  absl::StatusOr<std::vector<SweepRow>> rows = Sweep(
      setup.params, setup.horizon, *axis, values, setup.beta_grid, setup.delta);
  if (!rows.ok()) return Report(RuntimeFailure(rows.status()));

  std::ostringstream wide_text;
  std::ostringstream long_text;
  CsvWriter wide(wide_text);
  CsvWriter tall(long_text);
  wide.Row({"axis", "value", "valid", "beta", "kappa", "regime", "drive",
            "epsilon_at_delta", "zero_delta", "error"});
  tall.Row({"axis", "value", "metric", "metric_value"});
  for (const SweepRow& row : *rows) {
    const std::string value = FormatDouble(row.value);
    wide.Row({axis_name, value, row.valid ? "true" : "false",
              FormatDouble(row.beta), FormatDouble(row.kappa),
              row.valid ? std::string(RegimeName(row.regime)) : "",
              FormatDouble(row.drive), FormatDouble(row.epsilon),
              FormatDouble(row.zero_delta), row.error});
    if (!row.valid) continue;
    for (const auto& [metric, v] :
         std::vector<std::pair<std::string, double>>{
             {"beta", row.beta},
             {"kappa", row.kappa},
             {"drive", row.drive},
             {"epsilon_at_delta", row.epsilon},
             {"zero_delta", row.zero_delta}}) {
      tall.Row({axis_name, value, metric, FormatDouble(v)});
    }
  }
  std::cout << wide_text.str();
  const std::string dir = config.GetString("output.dir").value();
  if (absl::Status s = WriteOutputs(
          dir,
          config.Resolved({"noise", "problem", "accounting", "sweep", "output"}),
          {{"sweep.csv", wide_text.str()},
           {"sweep_long.csv", long_text.str()}});
      !s.ok()) {
    return Report(RuntimeFailure(s));
  }
  return kExitOk;
}

absl::StatusOr<Dataset> ReadDataFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path));
  Dataset data;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line) c = c == ',' ? ' ' : c;
    std::istringstream fields(line);
    Point p;
    double v = 0.0;
    while (fields >> v) p.push_back(v);
    if (!fields.eof()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": non-numeric field in '", line, "'"));
    }
    if (!p.empty()) data.points.push_back(std::move(p));
  }
  if (data.points.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": no data points"));
  }
  return data;
}

int RunSimulate(const Command& cmd) {
  RunConfig config;
  if (auto f = Resolve(cmd, config)) return Report(*f);
  Reader r{config, std::nullopt};
  SimulationConfig sim;
  sim.seed = static_cast<uint64_t>(r.Int("simulate.seed"));
  const int64_t n = r.Int("problem.n");
  const int d = static_cast<int>(r.Int("problem.d"));
  const std::string loss_name = r.String("problem.loss");
  const std::string inner_name = r.String("problem.inner_loss");
  sim.loss.clip_radius = r.Double("problem.clip");
  sim.loss.ridge = r.Double("problem.ridge");
  const double data_radius = r.Double("problem.data_radius");
  sim.noise.alpha = r.Double("noise.alpha");
  sim.noise.sigma_alpha = r.Double("noise.sigma_alpha");
  sim.noise.sigma_2 = r.Double("noise.sigma2");
  sim.steps = r.Int("simulate.steps");
  sim.eta = r.Double("simulate.eta");
  const int64_t batch = r.Int("simulate.batch");
  const int64_t trajectories = r.Int("simulate.trajectories");
  std::vector<double> checkpoint_values = r.List("simulate.checkpoints");
  const double projection = r.Double("simulate.projection_radius");
  const std::string init = r.String("simulate.init");
  sim.init.scale = r.Double("simulate.init_scale");
  sim.init.center = r.List("simulate.init_center");
  const uint64_t data_seed = static_cast<uint64_t>(r.Int("simulate.data_seed"));
  const std::string data_file = r.String("simulate.data_file");
  const int64_t neighbor_index = r.Int("simulate.neighbor_index");
  Point replacement = r.List("simulate.neighbor_point");
  if (r.failure.has_value()) return Report(*r.failure);

  sim.loss.family = ParseLossFamily(loss_name).value();
  sim.loss.inner = ParseLossFamily(inner_name).value();
  sim.batch = batch == 0 ? n : batch;
  if (std::isfinite(projection)) sim.projection_radius = projection;
  sim.init.kind = init == "gaussian" ? InitialDistribution::Kind::kGaussian
                                     : InitialDistribution::Kind::kPointMass;
  const bool logistic = PointDimension(sim.loss, 1) == 2;

  Dataset data;
  if (!data_file.empty()) {
    absl::StatusOr<Dataset> loaded = ReadDataFile(data_file);
    if (!loaded.ok()) return Report(ConfigFailure(loaded.status()));
    data = *loaded;
    if (static_cast<int64_t>(data.points.size()) != n) {
      return Report({kExitConfig,
                     absl::StrCat(data_file, " has ", data.points.size(),
                                  " points but --n is ", n)});
    }
  } else {
    data = SyntheticBallDataset(n, d, data_radius, data_seed);
    if (logistic) {
      for (std::size_t i = 0; i < data.points.size(); ++i) {
        data.points[i].push_back(i % 2 == 0 ? 1.0 : -1.0);
      }
    }
  }
  if (neighbor_index >= n) {
    return Report({kExitConfig,
                   absl::StrCat("--neighbor_index ", neighbor_index,
                                " must be below --n ", n)});
  }
  if (replacement.empty()) {
    replacement = data.points[neighbor_index];
    for (double& x : replacement) x = -x;  // labels flip too
  }
  absl::StatusOr<NeighborPair> pair =
      MakeNeighborPair(data, static_cast<std::size_t>(neighbor_index),
                       replacement);
  if (!pair.ok()) return Report(ConfigFailure(pair.status()));

  std::vector<int64_t> checkpoints;
  for (double v : checkpoint_values) {
    checkpoints.push_back(static_cast<int64_t>(std::llround(v)));
  }
  if (checkpoints.empty()) {
    if (trajectories == 1) {
      for (int64_t k = 0; k <= sim.steps; ++k) checkpoints.push_back(k);
    } else {
      checkpoints.push_back(sim.steps);
    }
  }

  std::map<std::string, std::string> manifest =
      config.Resolved({"noise", "problem", "simulate", "output"});
  absl::StatusOr<double> sg =
      GradientSensitivity(sim.loss, sim.projection_radius.value_or(
                                        std::numeric_limits<double>::infinity()),
                          data.bound);
  if (sg.ok()) manifest["derived.sensitivity"] = FormatDouble(*sg);
  const std::string dir = config.GetString("output.dir").value();

  Ensemble ensemble;
  if (trajectories == 1) {
    absl::StatusOr<TrajectoryPair> run = RunPair(*pair, sim);
    if (!run.ok()) return Report(ConfigFailure(run.status()));
    if (run->truncation.has_value()) {
      manifest["status"] = "truncated";
      manifest["truncation.step"] = absl::StrCat(run->truncation->step);
      manifest["truncation.jump_magnitude"] =
          FormatDouble(run->truncation->jump_magnitude);
      (void)WriteOutputs(dir, manifest, {});
      return Report({kExitRuntime, run->truncation->message});
    }
    ensemble.d = static_cast<int>(run->w.front().size());
    ensemble.trajectories = 1;
    for (int64_t k : checkpoints) {
      if (k < 0 || k > sim.steps) {
        return Report({kExitConfig, "checkpoints must lie in [0, steps]"});
      }
    }
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()),
                      checkpoints.end());
    ensemble.checkpoints = checkpoints;
    for (int64_t k : checkpoints) {
      ensemble.s.push_back(run->w[k]);
      ensemble.s_prime.push_back(run->w_prime[k]);
    }
  } else {
    absl::StatusOr<Ensemble> run =
        RunEnsemble(*pair, sim, checkpoints, trajectories);
    if (!run.ok()) {
      const bool truncated =
          run.status().message().find("truncated") != std::string::npos;
      if (!truncated) return Report(ConfigFailure(run.status()));
      manifest["status"] = "truncated";
      manifest["truncation.message"] = std::string(run.status().message());
      (void)WriteOutputs(dir, manifest, {});
      return Report(RuntimeFailure(run.status()));
    }
    ensemble = *std::move(run);
  }
  manifest["status"] = "ok";
  std::ostringstream csv_text;
  WriteEnsembleCsv(ensemble, csv_text);
  if (absl::Status s = WriteOutputs(
          dir, manifest,
          {{trajectories == 1 ? "trajectory.csv" : "ensemble.csv",
            csv_text.str()}});
      !s.ok()) {
    return Report(RuntimeFailure(s));
  }
  std::cout << "wrote " << dir << "\n";
  return kExitOk;
}

int RunVerify(const Command& cmd) {
  RunConfig config;
  if (auto f = Resolve(cmd, config)) return Report(*f);
  Reader r{config, std::nullopt};
  const std::string suite = r.String("verify.suite");
  VerifyOptions options;
  options.seed = static_cast<uint64_t>(r.Int("verify.seed"));
  options.scale = r.Double("verify.scale");
  options.min_margin = r.Double("verify.min_margin");
  if (r.failure.has_value()) return Report(*r.failure);
  absl::StatusOr<std::vector<VerifyRow>> rows = RunSuite(suite, options);
  if (!rows.ok()) return Report(RuntimeFailure(rows.status()));
  std::ostringstream csv_text;
  WriteVerifyCsv(*rows, csv_text);
  std::cout << csv_text.str();
  std::map<std::string, std::string> manifest =
      config.Resolved({"verify", "output"});
  int failed = 0;
  for (const VerifyRow& row : *rows) failed += row.pass ? 0 : 1;
  manifest["result.rows"] = absl::StrCat(rows->size());
  manifest["result.failed"] = absl::StrCat(failed);
  const std::string dir = config.GetString("output.dir").value();
  if (absl::Status s =
          WriteOutputs(dir, manifest, {{"verify.csv", csv_text.str()}});
      !s.ok()) {
    return Report(RuntimeFailure(s));
  }
  if (failed > 0) {
    std::cerr << "levydp: " << failed << " of " << rows->size()
              << " checks failed\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

}  // namespace
}  // namespace levydp

int main(int argc, char** argv) {
  using levydp::Command;
  CLI::App app{"Renyi-DP accounting and numerical checks for heavy-tailed "
               "noisy gradient dynamics"};
  app.require_subcommand(1);

  Command account;
  account.app = app.add_subcommand("account", "privacy bound for one setting");
  account.sections = {"noise", "problem", "accounting", "output"};
  Command simulate;
  simulate.app = app.add_subcommand("simulate", "coupled trajectories");
  simulate.sections = {"noise", "problem", "simulate", "output"};
  Command verify;
  verify.app = app.add_subcommand("verify", "numerical verification suites");
  verify.sections = {"verify", "output"};
  Command sweep;
  sweep.app = app.add_subcommand("sweep", "bound along one parameter axis");
  sweep.sections = {"noise", "problem", "accounting", "sweep", "output"};
  for (Command* cmd : {&account, &simulate, &verify, &sweep}) {
    levydp::AddFlags(*cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return levydp::kExitConfig;
  }

  if (account.app->parsed()) return levydp::RunAccount(account);
  if (simulate.app->parsed()) return levydp::RunSimulate(simulate);
  if (verify.app->parsed()) return levydp::RunVerify(verify);
  if (sweep.app->parsed()) return levydp::RunSweep(sweep);
  return levydp::kExitConfig;
}
