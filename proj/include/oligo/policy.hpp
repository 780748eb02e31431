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

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oligo/calibration.hpp"
#include "oligo/displacement.hpp"
#include "oligo/errors.hpp"
#include "oligo/model.hpp"
#include "oligo/welfare.hpp"

namespace oligo {

struct Constraint {
  enum class Kind { TransferNeutral, EmissionTarget };
  Kind kind = Kind::TransferNeutral;
  double target = 0.0;  // Z^ for EmissionTarget
  // When set, the emission target is the Z^ this shock produces under the
  // scenario's own calibration, instead of the literal target.
  std::optional<PolicyShock> target_shock;

  static Constraint transfer_neutral() { return {}; }
  static Constraint emissions(double z_hat) { return {Kind::EmissionTarget, z_hat, std::nullopt}; }
  static Constraint emissions_of(const PolicyShock& s) { return {Kind::EmissionTarget, 0.0, s}; }
};

/// Recalibration triggers. Any override forces a full recalibration.
struct ScenarioOverrides {
  std::optional<double> gamma;
  std::optional<double> gamma_rule;
  std::optional<double> sigma_E;
  std::optional<double> eps_ER;
  std::optional<MarketMode> mode;

  bool empty() const { return !gamma && !gamma_rule && !sigma_E && !eps_ER && !mode; }
};

struct ScenarioSpec {
  std::string label;
  PolicyShock fixed;
  std::vector<Instrument> free;
  std::vector<Constraint> constraints;
  ScenarioOverrides overrides;
  // Resolve the constraint program under the base calibration, then evaluate
  // the resulting shock under the overridden one.
  bool resolve_on_base = false;
};

struct ScenarioResult {
  std::string label;
  PolicyShock shock;
  Displacement displacement;
  WelfareDecomposition welfare;
  TheoremReport theorems;
  DerivedParameters params;
  std::vector<Instrument> free;  // instruments set by the constraint program
  ScenarioOverrides overrides;
  double constraint_residual = 0.0;  // max over constraints, at the resolving calibration
};

/// Benchmark data plus the options it was calibrated with.
struct Baseline {
  CanonicalEconomy economy;
  CalibrationOptions options;
  DerivedParameters params;

  static Baseline from(const CanonicalEconomy& e, const CalibrationOptions& opt = {}) {
    return {e, opt, calibrate(e, opt)};
  }
  static Baseline from(const BenchmarkEconomy& b, const CalibrationOptions& opt = {}) {
    return from(canonicalize_units(b), opt);
  }
};

inline DerivedParameters recalibrate(const Baseline& base, const ScenarioOverrides& o) {
  if (o.empty()) return base.params;
  CanonicalEconomy e = base.economy;
  CalibrationOptions opt = base.options;
  if (o.gamma_rule) {
    e.gamma.reset();
    opt.gamma_rule = *o.gamma_rule;
  }
  if (o.gamma) e.gamma = *o.gamma;
  if (o.sigma_E) e.sigma_E = *o.sigma_E;
  if (o.eps_ER) e.eps_ER = *o.eps_ER;
  if (o.mode) opt.mode = *o.mode;
  return calibrate(e, opt);
}

namespace detail {

inline double constraint_output(const Constraint& c, const Displacement& d) {
  return c.kind == Constraint::Kind::TransferNeutral ? d.T : d[Hat::Z];
}

inline double constraint_target(const Constraint& c, const DerivedParameters& p) {
  if (c.kind == Constraint::Kind::TransferNeutral) return 0.0;
  if (c.target_shock) return solve_displacement(p, *c.target_shock)[Hat::Z];
  return c.target;
}

inline void check_well_posed(const DerivedParameters& p, const ScenarioSpec& spec) {
  if (spec.free.size() != spec.constraints.size())
    fail(ErrorKind::IllPosedSpec, spec.label + ": free instruments and constraints differ in number");
  const auto& e = p.economy;
  for (std::size_t i = 0; i < spec.free.size(); ++i) {
    const Instrument in = spec.free[i];
    for (std::size_t j = 0; j < i; ++j)
      if (spec.free[j] == in)
        fail(ErrorKind::IllPosedSpec, spec.label + ": instrument listed twice");
    if (component(spec.fixed, in) != 0.0)
      fail(ErrorKind::IllPosedSpec, spec.label + ": instrument is both fixed and free");
    const double base = in == Instrument::t_Z ? e.t_Z : in == Instrument::t_ER ? e.t_ER
                        : in == Instrument::t_EX ? e.t_EX : 1.0;
    if (base == 0.0)
      fail(ErrorKind::IllPosedSpec, spec.label + ": free instrument has a zero base tax");
  }
}

}  // namespace detail

/// Solves the constraint program exactly through the superposition map.
inline std::pair<PolicyShock, double> resolve_shock(const DerivedParameters& p, const ScenarioSpec& spec) {
  detail::check_well_posed(p, spec);
  const std::size_t k = spec.free.size();
  if (k == 0) return {spec.fixed, 0.0};

  const Displacement d0 = solve_displacement(p, spec.fixed);
  Eigen::MatrixXd M(k, k);
  Eigen::VectorXd rhs(k);
  for (std::size_t j = 0; j < k; ++j) {
    const Displacement dj = solve_displacement(p, unit_shock(spec.free[j]));
    for (std::size_t i = 0; i < k; ++i)
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          detail::constraint_output(spec.constraints[i], dj);
  }
  std::vector<double> targets(k);
  for (std::size_t i = 0; i < k; ++i) {
    targets[i] = detail::constraint_target(spec.constraints[i], p);
    rhs(static_cast<Eigen::Index>(i)) = targets[i] - detail::constraint_output(spec.constraints[i], d0);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  lu.setThreshold(1e-12);
  if (lu.rank() < static_cast<Eigen::Index>(k))
    fail(ErrorKind::SingularConstraintMap, spec.label + ": instruments cannot span the constraints");
  const Eigen::VectorXd x = lu.solve(rhs);

  PolicyShock s = spec.fixed;
  for (std::size_t j = 0; j < k; ++j) component(s, spec.free[j]) = x(static_cast<Eigen::Index>(j));

  const Displacement d = solve_displacement(p, s);
  double residual = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    residual = std::max(residual, std::abs(detail::constraint_output(spec.constraints[i], d) - targets[i]));
  return {s, residual};
}

inline ScenarioResult evaluate_shock(const DerivedParameters& p, const PolicyShock& s, std::string label) {
  ScenarioResult r;
  r.label = std::move(label);
  r.shock = s;
  r.displacement = solve_displacement(p, s);
  r.welfare = decompose_welfare(p, r.displacement);
  r.theorems = check_theorems(p, r.displacement);
  r.params = p;
  return r;
}

inline ScenarioResult resolve_scenario(const DerivedParameters& p, const ScenarioSpec& spec) {
  if (!spec.overrides.empty() || spec.resolve_on_base)
    fail(ErrorKind::IllPosedSpec, spec.label + ": overrides need the benchmark economy to recalibrate");
  auto [s, residual] = resolve_shock(p, spec);
  ScenarioResult r = evaluate_shock(p, s, spec.label);
  r.free = spec.free;
  r.constraint_residual = residual;
  return r;
}

inline ScenarioResult resolve_scenario(const Baseline& base, const ScenarioSpec& spec) {
  const DerivedParameters p = recalibrate(base, spec.overrides);
  const DerivedParameters& solver_params = spec.resolve_on_base ? base.params : p;
  auto [s, residual] = resolve_shock(solver_params, spec);
  ScenarioResult r = evaluate_shock(p, s, spec.label);
  r.free = spec.free;
  r.overrides = spec.overrides;
  r.constraint_residual = residual;
  return r;
}

/// Evaluates independent scenarios concurrently; results keep spec order.
inline std::vector<ScenarioResult> run_sensitivity(const Baseline& base, const std::vector<ScenarioSpec>& specs) {
  std::vector<std::future<ScenarioResult>> jobs;
  jobs.reserve(specs.size());
  for (const auto& spec : specs)
    jobs.push_back(std::async(std::launch::async, [&base, &spec] { return resolve_scenario(base, spec); }));
  std::vector<ScenarioResult> out;
  out.reserve(specs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

inline ScenarioResult run_structural(const Baseline& base, MarketMode mode, ScenarioSpec spec) {
  if (mode == MarketMode::InferFromPrices)
    fail(ErrorKind::IllPosedSpec, "structural runs force monopoly or perfect competition");
  spec.overrides.mode = mode;
  return resolve_scenario(base, spec);
}

// Built-in cases.

inline PolicyShock emission_tax_shock(double hat = 0.10) {
  PolicyShock s;
  s.t_Z = hat;
  return s;
}

inline ScenarioSpec two_part_spec(std::string label) {
  ScenarioSpec s;
  s.label = std::move(label);
  s.free = {Instrument::t_EX, Instrument::t_KE};
  s.constraints = {Constraint::transfer_neutral(), Constraint::emissions_of(emission_tax_shock())};
  return s;
}

inline const std::vector<std::string>& builtin_case_names() {
  static const std::vector<std::string> names = {"1.0", "1.1", "1.2", "1.3", "1.4", "1.5", "1.6", "1.7",
                                                 "1.8", "2.0", "3.0", "4.0", "4.7", "4.8"};
  return names;
}

/// Accepts "1.0" or "case-1.0".
inline std::optional<ScenarioSpec> builtin_scenario(std::string_view name) {
  if (name.starts_with("case-")) name.remove_prefix(5);
  ScenarioSpec s;
  s.label = std::string(name);
  auto tax10 = [&] { s.fixed = emission_tax_shock(); };
  if (name == "1.0") {
    tax10();
  } else if (name == "1.1") {
    tax10();
    s.overrides.gamma_rule = 0.70;
  } else if (name == "1.2") {
    tax10();
    s.overrides.gamma_rule = 0.90;
  } else if (name == "1.3") {
    tax10();
    s.overrides.sigma_E = 0.1;
  } else if (name == "1.4") {
    tax10();
    s.overrides.sigma_E = 0.6;
  } else if (name == "1.5") {
    tax10();
    s.overrides.eps_ER = -0.25;
  } else if (name == "1.6") {
    tax10();
    s.overrides.eps_ER = -0.75;
  } else if (name == "1.7") {
    tax10();
    s.overrides.mode = MarketMode::ForceMonopoly;
  } else if (name == "1.8") {
    tax10();
    s.overrides.mode = MarketMode::ForcePerfectCompetition;
  } else if (name == "2.0") {
    tax10();
    s.free = {Instrument::t_ER};
    s.constraints = {Constraint::transfer_neutral()};
  } else if (name == "3.0") {
    s.free = {Instrument::t_Z, Instrument::t_ER};
    s.constraints = {Constraint::transfer_neutral(), Constraint::emissions_of(emission_tax_shock())};
  } else if (name == "4.0") {
    s = two_part_spec(s.label);
  } else if (name == "4.7") {
    s = two_part_spec(s.label);
    s.overrides.mode = MarketMode::ForceMonopoly;
    s.resolve_on_base = true;
  } else if (name == "4.8") {
    s = two_part_spec(s.label);
    s.overrides.mode = MarketMode::ForcePerfectCompetition;
    s.resolve_on_base = true;
  } else {
    return std::nullopt;
  }
  return s;
}

struct TableSpec {
  std::string name;
  bool panel_a = true;      // shock rows
  bool parameters = false;  // recalibrated parameter rows
  bool panels_bc = true;    // displacement and welfare rows
  bool six_term = false;    // W1-W6 block
  std::vector<std::string> cases;
};

inline const std::vector<TableSpec>& builtin_tables() {
  static const std::vector<TableSpec> tables = {
      {"table-2", true, false, true, false, {"1.0", "2.0", "3.0", "4.0"}},
      {"table-3", false, true, true, false, {"1.0", "1.1", "1.2", "1.3", "1.4", "1.5", "1.6"}},
      {"table-4", true, true, true, false, {"1.0", "1.7", "1.8", "4.0", "4.7", "4.8"}},
      {"table-D1", false, false, false, true, {"1.0", "2.0", "3.0", "4.0"}},
      {"table-D2", false, false, false, true, {"1.0", "1.1", "1.2", "1.3", "1.4", "1.5", "1.6"}},
      {"table-D3", false, false, false, true, {"1.0", "1.7", "1.8", "4.0", "4.7", "4.8"}},
  };
  return tables;
}

inline std::optional<TableSpec> builtin_table(std::string_view name) {
  for (const auto& t : builtin_tables())
    if (t.name == name) return t;
  return std::nullopt;
}

}  // namespace oligo
