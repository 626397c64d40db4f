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

#include "levydp/run_config.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace levydp {
namespace {

using Type = KeySpec::Type;

// The installed Abseil has its own string_view type.
absl::string_view Abseil(std::string_view s) { return {s.data(), s.size()}; }
std::string_view Std(absl::string_view s) { return {s.data(), s.size()}; }
constexpr double kInf = std::numeric_limits<double>::infinity();

KeySpec Real(std::string key, double min, double max, bool min_inclusive,
             bool max_inclusive, std::optional<std::string> def,
             std::string help) {
  return {std::move(key), Type::kDouble, min,  max, min_inclusive,
          max_inclusive,  {},            def, std::move(help)};
}

KeySpec Integer(std::string key, double min, double max,
                std::optional<std::string> def, std::string help) {
  return {std::move(key), Type::kInt, min, max, true, true, {}, def,
          std::move(help)};
}

KeySpec Choice(std::string key, std::vector<std::string> choices,
               std::optional<std::string> def, std::string help) {
  return {std::move(key), Type::kString, 0, 0, true, true, std::move(choices),
          def, std::move(help)};
}

KeySpec Text(std::string key, std::optional<std::string> def,
             std::string help) {
  return {std::move(key), Type::kString, 0, 0, true, true, {}, def,
          std::move(help)};
}

KeySpec List(std::string key, double min, double max,
             std::optional<std::string> def, std::string help) {
  return {std::move(key), Type::kDoubleList, min, max, true, true, {}, def,
          std::move(help)};
}

std::vector<KeySpec> BuildSchema() {
  constexpr double kMaxInt = 9.0e15;
  return {
      Real("noise.alpha", 0.0, 2.0, false, false, "1.5", "tail index alpha"),
      Real("noise.sigma_alpha", 0.0, kInf, true, false, "0",
           "stable noise scale"),
      Real("noise.sigma2", 0.0, kInf, true, false, "0",
           "Brownian noise scale"),
      Integer("problem.n", 1, kMaxInt, std::nullopt, "dataset size"),
      Integer("problem.d", 1, 1e6, "1", "parameter dimension"),
      Real("problem.sg", 0.0, kInf, true, false, std::nullopt,
           "gradient sensitivity S_g"),
      Real("problem.gamma", 0.0, kInf, false, false, "1",
           "Poincare ratio gamma"),
      Real("problem.R", 0.0, kInf, false, false, "1",
           "pure-jump comparison radius"),
      Choice("problem.loss", {"quadratic", "logistic", "clipped"},
             "quadratic", "per-sample loss"),
      Choice("problem.inner_loss", {"quadratic", "logistic"}, "quadratic",
             "loss whose gradient is clipped"),
      Real("problem.clip", 0.0, kInf, false, false, "1", "clip radius C"),
      Real("problem.ridge", 0.0, kInf, true, false, "0",
           "logistic ridge coefficient"),
      Real("problem.data_radius", 0.0, kInf, false, false, "1",
           "radius of the synthetic data ball"),
      Choice("accounting.mode", {"multifractal", "pure-jump"}, std::nullopt,
             "which bound to apply"),
      Choice("accounting.setting", {"continuous", "discrete"}, std::nullopt,
             "continuous time t or k discrete steps"),
      Real("accounting.beta", 2.0, 1e6, true, true, "2", "Renyi order"),
      Real("accounting.t", 0.0, kInf, true, false, std::nullopt,
           "continuous horizon"),
      Integer("accounting.k", 0, kMaxInt, std::nullopt, "number of steps"),
      Real("accounting.eta", 0.0, kInf, false, false, std::nullopt,
           "step size of the discrete setting"),
      Real("accounting.delta", 0.0, 1.0, false, true, "1e-5",
           "target delta"),
      Real("accounting.f0", 0.0, kInf, true, false, "0",
           "initial divergence (expert override)"),
      List("accounting.beta_grid", 2.0, 1e6, "", "orders to report"),
      Choice("sweep.axis", {"alpha", "d", "n", "beta", "sigma"}, std::nullopt,
             "swept parameter"),
      List("sweep.values", -1e308, 1e308, std::nullopt, "swept values"),
      Text("output.dir", "levydp_out", "output directory"),
      Integer("simulate.seed", 0, kMaxInt, std::nullopt, "base seed"),
      Integer("simulate.steps", 0, 1e9, "100", "number of steps"),
      Real("simulate.eta", 0.0, kInf, false, false, "0.1", "step size"),
      Integer("simulate.batch", 0, kMaxInt, "0",
              "mini-batch size (0 = full batch)"),
      Integer("simulate.trajectories", 1, 1e8, "1", "trajectory pairs"),
      List("simulate.checkpoints", 0, 1e9, "",
           "recorded steps (empty = every step for one trajectory, final "
           "step otherwise)"),
      Real("simulate.projection_radius", 0.0, kInf, false, true, "inf",
           "projection ball radius"),
      Choice("simulate.init", {"point", "gaussian"}, "point",
             "initial distribution"),
      Real("simulate.init_scale", 0.0, kInf, true, false, "1",
           "standard deviation of a Gaussian start"),
      List("simulate.init_center", -1e308, 1e308, "",
           "initial point (empty = origin)"),
      Integer("simulate.data_seed", 0, kMaxInt, "0",
              "seed of the synthetic dataset"),
      Text("simulate.data_file", "",
           "CSV of data points (overrides the synthetic ball)"),
      Integer("simulate.neighbor_index", 0, kMaxInt, "0",
              "index replaced in S'"),
      List("simulate.neighbor_point", -1e308, 1e308, "",
           "replacement point (empty = negated original)"),
      Choice("verify.suite",
             {"bregman", "bbm", "sampler", "poincare", "renyi", "flow", "all"},
             "all", "verification suite"),
      Integer("verify.seed", 0, kMaxInt, "1", "base seed"),
      Real("verify.scale", 0.0, 1.0, false, true, "1",
           "fraction of the default sample sizes"),
      Real("verify.min_margin", -1e308, 1e308, true, true, "0",
           "extra margin required of every check"),
  };
}

absl::Status CheckRange(const KeySpec& spec, double v) {
  const bool low_ok = spec.min_inclusive ? v >= spec.min : v > spec.min;
  const bool high_ok = spec.max_inclusive ? v <= spec.max : v < spec.max;
  if (std::isnan(v) || !low_ok || !high_ok) {
    return absl::OutOfRangeError(absl::StrCat(
        spec.key, " = ", v, " outside ", spec.min_inclusive ? "[" : "(",
        spec.min, ", ", spec.max, spec.max_inclusive ? "]" : ")"));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> ParseReal(const KeySpec& spec, std::string_view text) {
  double v = 0.0;
  const std::string t(absl::StripAsciiWhitespace(Abseil(text)));
  if (t == "inf") {
    v = kInf;
  } else if (!absl::SimpleAtod(t, &v)) {
    return absl::InvalidArgumentError(
        absl::StrCat(spec.key, ": '", t, "' is not a number"));
  }
  if (absl::Status s = CheckRange(spec, v); !s.ok()) return s;
  return v;
}

absl::StatusOr<std::vector<double>> ParseList(const KeySpec& spec,
                                              std::string_view text) {
  std::vector<double> out;
  for (absl::string_view part : absl::StrSplit(
           Abseil(text), absl::ByAnyChar(", "), absl::SkipWhitespace())) {
    absl::StatusOr<double> v = ParseReal(spec, Std(part));
    if (!v.ok()) return v.status();
    out.push_back(*v);
  }
  return out;
}

absl::Status Validate(const KeySpec& spec, std::string_view value) {
  switch (spec.type) {
    case Type::kDouble:
      return ParseReal(spec, value).status();
    case Type::kInt: {
      int64_t v = 0;
      if (!absl::SimpleAtoi(Abseil(value), &v)) {
        return absl::InvalidArgumentError(absl::StrCat(
            spec.key, ": '", std::string(value), "' is not an integer"));
      }
      return CheckRange(spec, static_cast<double>(v));
    }
    case Type::kString:
      if (spec.choices.empty()) return absl::OkStatus();
      for (const std::string& c : spec.choices) {
        if (c == value) return absl::OkStatus();
      }
      return absl::InvalidArgumentError(absl::StrCat(
          spec.key, ": '", std::string(value), "' is not one of ",
          absl::StrJoin(spec.choices, ", ")));
    case Type::kDoubleList:
      return ParseList(spec, value).status();
  }
  return absl::OkStatus();
}

}  // namespace

const std::vector<KeySpec>& ConfigSchema() {
  static const auto* schema = new std::vector<KeySpec>(BuildSchema());
  return *schema;
}

const KeySpec* FindKey(std::string_view key) {
  for (const KeySpec& spec : ConfigSchema()) {
    if (spec.key == key) return &spec;
  }
  return nullptr;
}

namespace {

// Drops a '#' or ';' comment that follows whitespace.
std::string_view StripInlineComment(std::string_view line) {
  for (std::size_t i = 1; i < line.size(); ++i) {
    if ((line[i] == '#' || line[i] == ';') &&
        (line[i - 1] == ' ' || line[i - 1] == '\t')) {
      return line.substr(0, i);
    }
  }
  return line;
}

}  // namespace

absl::StatusOr<RunConfig> RunConfig::Parse(std::string_view text) {
  RunConfig config;
  std::string section;
  int line_number = 0;
  for (absl::string_view raw : absl::StrSplit(Abseil(text), '\n')) {
    ++line_number;
    std::string_view line = Std(absl::StripAsciiWhitespace(raw));
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    line = Std(absl::StripAsciiWhitespace(Abseil(StripInlineComment(line))));
    if (line.front() == '[') {
      if (line.back() != ']') {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", line_number, ": malformed section header"));
      }
      section = std::string(
          absl::StripAsciiWhitespace(Abseil(line.substr(1, line.size() - 2))));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": expected key = value"));
    }
    std::string key(absl::StripAsciiWhitespace(Abseil(line.substr(0, eq))));
    const std::string_view value =
        Std(absl::StripAsciiWhitespace(Abseil(line.substr(eq + 1))));
    if (!section.empty()) key = absl::StrCat(section, ".", key);
    if (absl::Status s = config.Set(key, value); !s.ok()) {
      return absl::Status(s.code(), absl::StrCat("line ", line_number, ": ",
                                                 s.message()));
    }
  }
  return config;
}

absl::StatusOr<RunConfig> RunConfig::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  absl::StatusOr<RunConfig> config = Parse(buffer.str());
  if (!config.ok()) {
    return absl::Status(config.status().code(),
                        absl::StrCat(path, ": ", config.status().message()));
  }
  return config;
}

absl::Status RunConfig::Set(std::string_view key, std::string_view value) {
  const KeySpec* spec = FindKey(key);
  if (spec == nullptr) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown key '", std::string(key), "'"));
  }
  if (absl::Status s = Validate(*spec, value); !s.ok()) return s;
  values_[std::string(key)] = std::string(value);
  return absl::OkStatus();
}

absl::Status RunConfig::SetAssignment(std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    return absl::InvalidArgumentError(absl::StrCat(
        "expected key=value, got '", std::string(assignment), "'"));
  }
  return Set(Std(absl::StripAsciiWhitespace(Abseil(assignment.substr(0, eq)))),
             Std(absl::StripAsciiWhitespace(Abseil(assignment.substr(eq + 1)))));
}

bool RunConfig::Has(std::string_view key) const {
  return values_.find(key) != values_.end();
}

absl::StatusOr<std::string> RunConfig::GetString(std::string_view key) const {
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  const KeySpec* spec = FindKey(key);
  if (spec == nullptr) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown key '", std::string(key), "'"));
  }
  if (!spec->default_value.has_value()) {
    return absl::NotFoundError(
        absl::StrCat("missing required key '", std::string(key), "'"));
  }
  return *spec->default_value;
}

absl::StatusOr<double> RunConfig::GetDouble(std::string_view key) const {
  absl::StatusOr<std::string> text = GetString(key);
  if (!text.ok()) return text.status();
  return ParseReal(*FindKey(key), *text);
}

absl::StatusOr<int64_t> RunConfig::GetInt(std::string_view key) const {
  absl::StatusOr<std::string> text = GetString(key);
  if (!text.ok()) return text.status();
  int64_t v = 0;
  if (!absl::SimpleAtoi(*text, &v)) {
    return absl::InvalidArgumentError(
        absl::StrCat(std::string(key), " is not an integer"));
  }
  return v;
}

absl::StatusOr<std::vector<double>> RunConfig::GetDoubleList(
    std::string_view key) const {
  absl::StatusOr<std::string> text = GetString(key);
  if (!text.ok()) return text.status();
  return ParseList(*FindKey(key), *text);
}

std::map<std::string, std::string> RunConfig::Resolved(
    const std::vector<std::string>& sections) const {
  std::map<std::string, std::string> out;
  for (const KeySpec& spec : ConfigSchema()) {
    const std::string section = spec.key.substr(0, spec.key.find('.'));
    bool wanted = false;
    for (const std::string& s : sections) wanted = wanted || s == section;
    if (!wanted) continue;
    absl::StatusOr<std::string> v = GetString(spec.key);
    if (v.ok()) out[spec.key] = *v;
  }
  return out;
}

}  // namespace levydp
