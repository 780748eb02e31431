// Copyright 2026 The oligo Authors
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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "oligo/benchmark_io.hpp"
#include "oligo/errors.hpp"
#include "oligo/policy.hpp"
#include "oligo/report.hpp"

namespace oligo {

enum class OutputFormat { PaperTable, Delimited, StructuredRecords };

inline std::optional<OutputFormat> parse_output_format(std::string_view s) {
  if (s == "paper-table") return OutputFormat::PaperTable;
  if (s == "delimited") return OutputFormat::Delimited;
  if (s == "structured-records") return OutputFormat::StructuredRecords;
  return std::nullopt;
}

/// One emitted table: a layout plus the scenarios forming its columns.
struct RunItem {
  std::string name;
  TableSpec layout;
  std::vector<ScenarioSpec> specs;
};

struct RunConfig {
  std::string benchmark_path;  // empty means the shipped default
  std::vector<RunItem> items;
  OutputFormat format = OutputFormat::PaperTable;
  std::string out_path;  // empty means standard output
  Precision precision;
};

/// Resolves "case-1.0", "1.0", or "table-2" to a run item.
inline std::optional<RunItem> builtin_item(std::string_view name) {
  if (auto t = builtin_table(name)) {
    RunItem item{t->name, *t, {}};
    for (const auto& c : t->cases) item.specs.push_back(*builtin_scenario(c));
    return item;
  }
  if (auto s = builtin_scenario(name)) {
    TableSpec layout{"case-" + s->label, true, true, true, true, {s->label}};
    return RunItem{layout.name, layout, {*s}};
  }
  return std::nullopt;
}

namespace detail {

class ConfigReader {
 public:
  ConfigReader(std::string text, std::string source) : text_(std::move(text)), source_(std::move(source)) {}

  [[noreturn]] void error(const std::string& field, const std::string& what) const {
    std::string where = source_;
    const std::string leaf = field.substr(field.find_last_of(".]") == std::string::npos ? 0 : field.find_last_of(".]") + 1);
    if (!leaf.empty()) {
      const auto pos = text_.find("\"" + leaf + "\"");
      if (pos != std::string::npos) where += ": " + text_position(text_, pos + 1);
    }
    fail(ErrorKind::ConfigError, where + ": field '" + field + "': " + what);
  }

  void only_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> keys) const {
    for (const auto& [k, v] : obj.items()) {
      bool ok = false;
      for (auto kk : keys) ok = ok || k == kk;
      if (!ok) error(path.empty() ? k : path + "." + k, "unknown key");
    }
  }

  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) error(path, "expected a number");
    return v.get<double>();
  }

  std::string string(const json& v, const std::string& path) const {
    if (!v.is_string()) error(path, "expected a string");
    return v.get<std::string>();
  }

  PolicyShock shock_percent(const json& v, const std::string& path) const {
    if (!v.is_object()) error(path, "expected an object of instrument -> percent");
    PolicyShock s;
    for (const auto& [k, x] : v.items()) {
      auto in = parse_instrument(k);
      if (!in) error(path + "." + k, "unknown instrument");
      component(s, *in) = number(x, path + "." + k) / 100.0;
    }
    return s;
  }

  ScenarioSpec spec(const json& v, const std::string& path) const {
    if (!v.is_object()) error(path, "expected a scenario object");
    only_keys(v, path, {"label", "fixed", "free", "constraints", "overrides", "resolve_on_base"});
    ScenarioSpec s;
    if (!v.contains("label")) error(path + ".label", "missing");
    s.label = string(v.at("label"), path + ".label");
    if (v.contains("fixed")) s.fixed = shock_percent(v.at("fixed"), path + ".fixed");
    if (v.contains("free")) {
      const auto& f = v.at("free");
      if (!f.is_array()) error(path + ".free", "expected an array of instruments");
      for (std::size_t i = 0; i < f.size(); ++i) {
        const std::string p = path + ".free[" + std::to_string(i) + "]";
        auto in = parse_instrument(string(f[i], p));
        if (!in) error(p, "unknown instrument");
        s.free.push_back(*in);
      }
    }
    if (v.contains("constraints")) {
      const auto& c = v.at("constraints");
      if (!c.is_array()) error(path + ".constraints", "expected an array");
      for (std::size_t i = 0; i < c.size(); ++i) {
        const std::string p = path + ".constraints[" + std::to_string(i) + "]";
        if (!c[i].is_object() || c[i].size() != 1) error(p, "expected one of T_hat, Z_hat, Z_hat_of");
        only_keys(c[i], p, {"T_hat", "Z_hat", "Z_hat_of"});
        if (c[i].contains("T_hat")) {
          if (number(c[i].at("T_hat"), p + ".T_hat") != 0.0) error(p + ".T_hat", "only T_hat = 0 is supported");
          s.constraints.push_back(Constraint::transfer_neutral());
        } else if (c[i].contains("Z_hat")) {
          s.constraints.push_back(Constraint::emissions(number(c[i].at("Z_hat"), p + ".Z_hat") / 100.0));
        } else {
          s.constraints.push_back(Constraint::emissions_of(shock_percent(c[i].at("Z_hat_of"), p + ".Z_hat_of")));
        }
      }
    }
    if (s.free.size() != s.constraints.size())
      error(path + ".free", "needs exactly one free instrument per constraint");
    if (v.contains("overrides")) {
      const auto& o = v.at("overrides");
      const std::string p = path + ".overrides";
      if (!o.is_object()) error(p, "expected an object");
      only_keys(o, p, {"gamma", "gamma_rule", "sigma_E", "eps_ER", "mode"});
      if (o.contains("gamma")) s.overrides.gamma = number(o.at("gamma"), p + ".gamma");
      if (o.contains("gamma_rule")) s.overrides.gamma_rule = number(o.at("gamma_rule"), p + ".gamma_rule");
      if (o.contains("sigma_E")) s.overrides.sigma_E = number(o.at("sigma_E"), p + ".sigma_E");
      if (o.contains("eps_ER")) s.overrides.eps_ER = number(o.at("eps_ER"), p + ".eps_ER");
      if (o.contains("mode")) {
        const std::string m = string(o.at("mode"), p + ".mode");
        if (m == "force_monopoly") s.overrides.mode = MarketMode::ForceMonopoly;
        else if (m == "force_perfect_competition") s.overrides.mode = MarketMode::ForcePerfectCompetition;
        else if (m == "infer_n_and_epsEX") s.overrides.mode = MarketMode::InferFromPrices;
        else error(p + ".mode", "expected force_monopoly, force_perfect_competition or infer_n_and_epsEX");
      }
    }
    if (v.contains("resolve_on_base")) {
      if (!v.at("resolve_on_base").is_boolean()) error(path + ".resolve_on_base", "expected true or false");
      s.resolve_on_base = v.at("resolve_on_base").get<bool>();
    }
    return s;
  }

 private:
  std::string text_;
  std::string source_;
};

}  // namespace detail

/// Parses a run configuration. Relative benchmark and output paths resolve
/// against `base_dir`.
inline RunConfig parse_run_config(const std::string& text, const std::string& source = "config",
                                  const std::string& base_dir = "") {
  const json doc = detail::parse_json_text(text, source);
  detail::ConfigReader rd(text, source);
  if (!doc.is_object()) rd.error("", "expected an object");
  rd.only_keys(doc, "", {"benchmark", "scenarios", "format", "out", "precision"});

  auto resolve = [&](const std::string& p) {
    if (p.empty() || base_dir.empty() || std::filesystem::path(p).is_absolute()) return p;
    return (std::filesystem::path(base_dir) / p).string();
  };

  RunConfig cfg;
  if (doc.contains("benchmark")) cfg.benchmark_path = resolve(rd.string(doc.at("benchmark"), "benchmark"));
  if (doc.contains("out")) cfg.out_path = resolve(rd.string(doc.at("out"), "out"));
  if (doc.contains("format")) {
    auto f = parse_output_format(rd.string(doc.at("format"), "format"));
    if (!f) rd.error("format", "expected paper-table, delimited or structured-records");
    cfg.format = *f;
  }
  if (doc.contains("precision")) {
    const auto& p = doc.at("precision");
    if (!p.is_object()) rd.error("precision", "expected an object");
    rd.only_keys(p, "precision", {"percent", "money", "parameter"});
    auto digits = [&](const char* k, int& dst) {
      if (!p.contains(k)) return;
      const std::string path = std::string("precision.") + k;
      if (!p.at(k).is_number_integer() || p.at(k).get<int>() < 0) rd.error(path, "expected a non-negative integer");
      dst = p.at(k).get<int>();
    };
    digits("percent", cfg.precision.percent);
    digits("money", cfg.precision.money);
    digits("parameter", cfg.precision.parameter);
  }
  if (!doc.contains("scenarios")) rd.error("scenarios", "missing");
  const auto& sc = doc.at("scenarios");
  if (!sc.is_array()) rd.error("scenarios", "expected an array");
  if (sc.empty()) rd.error("scenarios", "at least one scenario is required");
  for (std::size_t i = 0; i < sc.size(); ++i) {
    const std::string path = "scenarios[" + std::to_string(i) + "]";
    if (sc[i].is_string()) {
      auto item = builtin_item(sc[i].get<std::string>());
      if (!item) rd.error(path, "unknown built-in '" + sc[i].get<std::string>() + "'");
      cfg.items.push_back(std::move(*item));
    } else {
      ScenarioSpec s = rd.spec(sc[i], path);
      TableSpec layout{s.label, true, true, true, true, {s.label}};
      cfg.items.push_back({s.label, layout, {s}});
    }
  }
  return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
  return parse_run_config(detail::read_file(path), path,
                          std::filesystem::path(path).parent_path().string());
}

}  // namespace oligo
