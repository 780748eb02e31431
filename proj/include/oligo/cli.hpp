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
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oligo/benchmark_io.hpp"
#include "oligo/calibration.hpp"
#include "oligo/config.hpp"
#include "oligo/golden.hpp"
#include "oligo/nonlinear_oracle.hpp"
#include "oligo/policy.hpp"
#include "oligo/report.hpp"

namespace oligo {

enum ExitCode : int { kExitOk = 0, kExitTolerance = 1, kExitConfig = 2, kExitSolver = 3 };

namespace cli {

inline Baseline load_baseline(const std::string& path) {
  std::string p = path;
#ifdef OLIGO_DATA_DIR
  if (p.empty()) p = default_benchmark_path();
#endif
  if (p.empty()) fail(ErrorKind::ConfigError, "no benchmark file given");
  return Baseline::from(load_benchmark(p));
}

inline void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) fail(ErrorKind::ConfigError, out_path + ": cannot write");
  f << text;
}

inline std::string render_items(const Baseline& base, const std::vector<RunItem>& items, OutputFormat fmt,
                                const Precision& prec) {
  std::ostringstream os;
  nlohmann::json records = {{"tables", nlohmann::json::array()}, {"results", nlohmann::json::array()}};
  bool first = true;
  for (const auto& item : items) {
    std::vector<ScenarioResult> results;
    try {
      results = run_sensitivity(base, item.specs);
    } catch (const Error& e) {
      throw Error(e.kind(), item.name + ": " + e.what());
    }
    const TableModel t = build_table(item.name, results, item.layout);
    switch (fmt) {
      case OutputFormat::PaperTable:
        if (!first) os << "\n";
        os << render_paper_table(t, prec);
        break;
      case OutputFormat::Delimited:
        // a single table stays plain CSV; several are separated by name lines
        if (!first) os << "\n";
        if (items.size() > 1) os << "# " << t.name << "\n";
        os << render_delimited(t);
        break;
      case OutputFormat::StructuredRecords:
        records["tables"].push_back(table_to_json(t));
        for (const auto& r : results) records["results"].push_back(result_to_json(r));
        break;
    }
    first = false;
  }
  if (fmt == OutputFormat::StructuredRecords) os << records.dump(2) << "\n";
  return os.str();
}

inline std::string render_calibration(const DerivedParameters& p, OutputFormat fmt) {
  const auto& e = p.economy;
  struct Item {
    const char* key;
    const char* label;
    double value;
    int decimals;
  };
  const double bn = 1.0 / kMillionPerBillion;
  const std::vector<Item> items = {
      {"gamma", "Marginal cost of energy ($/mmBtu)", p.gamma, 2},
      {"delta", "Residential distribution adder ($/mmBtu)", e.delta, 2},
      {"n", "Competition index n", p.n.is_infinite() ? INFINITY : p.n.value(), 2},
      {"eps_ER", "Residential demand elasticity", p.eps_ER, 2},
      {"eps_EX", "Industrial demand elasticity", p.eps_EX, 2},
      {"sigma_U", "Substitution elasticity, utility", p.sigma_U, 2},
      {"sigma_X", "Substitution elasticity, industry", p.sigma_X, 2},
      {"sigma_E", "Substitution elasticity, energy", p.sigma_E, 2},
      {"phi_R", "Residential share of energy (%)", 100 * p.phi_R, 2},
      {"omega_E", "Energy share of capital (%)", 100 * p.omega_E, 2},
      {"rho_Z", "Emission tax share of energy cost", p.rho_Z, 4},
      {"theta_ER", "Energy share of income", p.theta_ER, 4},
      {"theta_EX", "Energy share of industrial revenue", p.theta_EX, 4},
      {"K_E", "Capital in energy (billion $)", p.K_E * bn, 1},
      {"K_X", "Capital in industry (billion $)", p.K_X * bn, 1},
      {"Pi_E", "Energy profit (billion $)", p.Pi_E * bn, 1},
      {"T", "Transfer (billion $)", p.T * bn, 1},
  };
  std::ostringstream os;
  if (fmt == OutputFormat::StructuredRecords) {
    nlohmann::json j;
    j["mode"] = std::string(to_string(p.mode));
    for (const auto& it : items) j[it.key] = std::isinf(it.value) ? nlohmann::json("inf") : nlohmann::json(it.value);
    os << j.dump(2) << "\n";
  } else if (fmt == OutputFormat::Delimited) {
    os << "parameter,value\n";
    for (const auto& it : items) os << it.key << "," << (std::isinf(it.value) ? "inf" : format_full(it.value)) << "\n";
  } else {
    os << "Derived parameters (" << to_string(p.mode) << ")\n";
    for (const auto& it : items) {
      std::string label = it.label;
      label.resize(44, ' ');
      os << label << (std::isinf(it.value) ? std::string("inf") : format_fixed(it.value, it.decimals)) << "\n";
    }
  }
  return os.str();
}

inline std::string render_accuracy(const std::vector<std::pair<std::string, AccuracyReport>>& reps, int& failures) {
  std::ostringstream os;
  os << "case,component,hat,d_h,d_h2,ratio,verdict\n";
  failures = 0;
  for (const auto& [label, rep] : reps) {
    for (const auto& r : rep.rows) {
      os << label << "," << to_string(r.component) << "," << format_full(r.hat) << "," << format_full(r.d_h) << ","
         << format_full(r.d_h2) << "," << format_full(r.ratio) << "," << (r.pass ? "PASS" : "FAIL") << "\n";
      failures += r.pass ? 0 : 1;
    }
  }
  return os.str();
}

inline PolicyShock parse_shock_assignments(const std::vector<std::string>& items) {
  PolicyShock s;
  for (const auto& it : items) {
    const auto eq = it.find('=');
    if (eq == std::string::npos) fail(ErrorKind::ConfigError, "shock '" + it + "' is not name=percent");
    auto in = parse_instrument(it.substr(0, eq));
    if (!in) fail(ErrorKind::ConfigError, "unknown instrument in '" + it + "'");
    const auto v = parse_number(it.substr(eq + 1));
    if (!v) fail(ErrorKind::ConfigError, "bad number in '" + it + "'");
    component(s, *in) = *v / 100.0;
  }
  return s;
}

}  // namespace cli

/// Entry point shared by the executable and the tests.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Oligopoly energy-tax displacement engine"};
  app.require_subcommand(1);

  std::string benchmark, config_path, out_path, format_name = "paper-table";
  std::vector<std::string> cases;
  int precision = -1;
  auto common = [&](CLI::App* sub, bool with_case) {
    sub->add_option("--benchmark", benchmark, "Benchmark document (default: shipped data)");
    sub->add_option("--config", config_path, "Run configuration");
    sub->add_option("--format", format_name, "paper-table | delimited | structured-records");
    sub->add_option("--out", out_path, "Output file (default: stdout)");
    sub->add_option("--precision", precision, "Decimals for percent rows (money uses one fewer)")
        ->check(CLI::NonNegativeNumber);
    if (with_case) sub->add_option("--case", cases, "Built-in case or table, e.g. case-1.0, table-2");
  };

  auto* cal = app.add_subcommand("calibrate", "Print the derived-parameter block");
  common(cal, false);
  std::string mode_name = "infer_n_and_epsEX";
  double gamma_rule = 0.80;
  cal->add_option("--mode", mode_name, "infer_n_and_epsEX | force_monopoly | force_perfect_competition");
  cal->add_option("--gamma-rule", gamma_rule, "gamma as a fraction of p_EX when gamma is absent");

  auto* solve = app.add_subcommand("solve", "Solve one shock vector");
  common(solve, false);
  std::vector<std::string> shock_items;
  solve->add_option("--shock", shock_items, "instrument=percent, e.g. t_Z=10")->required();

  auto* scen = app.add_subcommand("scenario", "Run built-in or configured scenarios");
  common(scen, true);

  auto* sweep = app.add_subcommand("sweep", "Recalibrate and solve across parameter values");
  common(sweep, true);
  std::string sweep_param;
  std::vector<double> sweep_values;
  sweep->add_option("--param", sweep_param, "gamma | gamma_rule | sigma_E | eps_ER")->required();
  sweep->add_option("--values", sweep_values, "Values to sweep")->required()->delimiter(',');

  auto* orc = app.add_subcommand("oracle", "First-order accuracy against the nonlinear economy");
  common(orc, true);
  double step = 0.01;
  bool state_elasticities = false;
  orc->add_option("--step", step, "Largest shock component at the first step");
  orc->add_flag("--state-elasticities", state_elasticities, "Price off point elasticities at the current state");

  auto* gold = app.add_subcommand("goldens", "Compare the built-in tables with golden files");
  common(gold, false);
  std::string golden_dir, errata_path;
  gold->add_option("--golden-dir", golden_dir, "Directory with table*.csv files");
  gold->add_option("--errata", errata_path, "Errata file (default: <golden-dir>/errata.csv if present)");

  std::vector<std::string> argv_store = args;
  argv_store.insert(argv_store.begin(), "oligo");
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    auto fmt = parse_output_format(format_name);
    if (!fmt) fail(ErrorKind::ConfigError, "--format must be paper-table, delimited or structured-records");
    Precision prec;
    if (precision >= 0) {
      prec.percent = precision;
      prec.money = std::max(0, precision - 1);
    }
    std::optional<RunConfig> cfg;
    if (!config_path.empty()) {
      cfg = load_run_config(config_path);
      if (benchmark.empty()) benchmark = cfg->benchmark_path;
      if (out_path.empty()) out_path = cfg->out_path;
      if (format_name == "paper-table") fmt = cfg->format;
      if (precision < 0) prec = cfg->precision;
    }

    if (cal->parsed()) {
      CalibrationOptions opt;
      opt.gamma_rule = gamma_rule;
      if (mode_name == "force_monopoly") opt.mode = MarketMode::ForceMonopoly;
      else if (mode_name == "force_perfect_competition") opt.mode = MarketMode::ForcePerfectCompetition;
      else if (mode_name != "infer_n_and_epsEX") fail(ErrorKind::ConfigError, "unknown --mode " + mode_name);
      std::string p = benchmark;
#ifdef OLIGO_DATA_DIR
      if (p.empty()) p = default_benchmark_path();
#endif
      const auto params = calibrate(load_benchmark(p), opt);
      cli::emit(cli::render_calibration(params, *fmt), out_path, out);
      return kExitOk;
    }

    const Baseline base = cli::load_baseline(benchmark);

    if (solve->parsed()) {
      ScenarioSpec s;
      s.label = "custom";
      s.fixed = cli::parse_shock_assignments(shock_items);
      RunItem item{"solve", TableSpec{"solve", true, false, true, true, {"custom"}}, {s}};
      cli::emit(cli::render_items(base, {item}, *fmt, prec), out_path, out);
      return kExitOk;
    }

    if (scen->parsed()) {
      std::vector<RunItem> items;
      if (cfg) items = cfg->items;
      for (const auto& c : cases) {
        auto item = builtin_item(c);
        if (!item) fail(ErrorKind::ConfigError, "unknown case '" + c + "'");
        items.push_back(*item);
      }
      if (items.empty()) fail(ErrorKind::ConfigError, "no scenarios given (use --case or --config)");
      cli::emit(cli::render_items(base, items, *fmt, prec), out_path, out);
      return kExitOk;
    }

    if (sweep->parsed()) {
      const std::string base_case = cases.empty() ? "1.0" : cases.front();
      auto spec = builtin_scenario(base_case);
      if (!spec) fail(ErrorKind::ConfigError, "unknown case '" + base_case + "'");
      RunItem item{"sweep " + sweep_param, TableSpec{"sweep", true, true, true, true, {}}, {}};
      for (double v : sweep_values) {
        ScenarioSpec s = *spec;
        std::ostringstream lbl;
        lbl << sweep_param << "=" << v;
        s.label = lbl.str();
        if (sweep_param == "gamma") s.overrides.gamma = v;
        else if (sweep_param == "gamma_rule") s.overrides.gamma_rule = v;
        else if (sweep_param == "sigma_E") s.overrides.sigma_E = v;
        else if (sweep_param == "eps_ER") s.overrides.eps_ER = v;
        else fail(ErrorKind::ConfigError, "unknown --param " + sweep_param);
        item.specs.push_back(s);
      }
      cli::emit(cli::render_items(base, {item}, *fmt, prec), out_path, out);
      return kExitOk;
    }

    if (orc->parsed()) {
      std::vector<std::string> names = cases;
      if (names.empty()) names = {"1.0", "2.0", "3.0", "4.0"};
      std::vector<std::pair<std::string, AccuracyReport>> reps;
      for (const auto& n : names) {
        auto spec = builtin_scenario(n);
        if (!spec) fail(ErrorKind::ConfigError, "unknown case '" + n + "'");
        const ScenarioResult r = resolve_scenario(base, *spec);
        const auto pe = calibrate_parametric(
            r.params, state_elasticities ? ElasticityRule::StateDependent : ElasticityRule::BenchmarkConstant);
        reps.emplace_back(spec->label, first_order_accuracy(pe, r.params, r.shock, step));
      }
      int failures = 0;
      cli::emit(cli::render_accuracy(reps, failures), out_path, out);
      if (failures > 0) {
        err << failures << " component(s) failed the ratio test\n";
        return kExitTolerance;
      }
      return kExitOk;
    }

    if (gold->parsed()) {
#ifdef OLIGO_GOLDEN_DIR
      if (golden_dir.empty()) golden_dir = OLIGO_GOLDEN_DIR;
#endif
      if (golden_dir.empty()) fail(ErrorKind::ConfigError, "--golden-dir is required");
      if (errata_path.empty() && std::filesystem::exists(golden_dir + "/errata.csv"))
        errata_path = golden_dir + "/errata.csv";
      std::vector<Erratum> errata;
      if (!errata_path.empty()) errata = load_errata(errata_path);
      std::ostringstream os;
      std::size_t failures = 0;
      for (const auto& spec : builtin_tables()) {
        std::string file = spec.name;
        file.erase(std::remove(file.begin(), file.end(), '-'), file.end());
        const GoldenTable g = load_golden(golden_dir + "/" + file + ".csv");
        std::vector<ScenarioSpec> specs;
        for (const auto& c : spec.cases) specs.push_back(*builtin_scenario(c));
        const TableModel t = build_table(spec.name, run_sensitivity(base, specs), spec);
        const GoldenDiff d = diff_golden(t, g, errata, spec.name);
        failures += d.failures();
        os << render_diff(d);
      }
      cli::emit(os.str(), out_path, out);
      return failures == 0 ? kExitOk : kExitTolerance;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (e.kind() == ErrorKind::ConfigError) return kExitConfig;
    if (e.kind() == ErrorKind::ShapeMismatch) return kExitTolerance;
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitConfig;
}

}  // namespace oligo
