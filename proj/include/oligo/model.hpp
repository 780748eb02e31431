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

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oligo/competition.hpp"
#include "oligo/errors.hpp"

namespace oligo {

// Canonical units: energy in trillion Btu, energy prices and per-unit energy
// taxes in $/mmBtu, emissions in million metric tons, money in million 2012$.
// One trillion Btu is 1e6 mmBtu, so price * quantity is already million $.
inline constexpr double kMillionPerBillion = 1000.0;

inline constexpr double kStructuralTol = 1e-12;
inline constexpr double kCalibrationTol = 1e-9;

/// Observed and assumed benchmark levels, income in billion 2012$.
struct BenchmarkEconomy {
  double E_R = 0.0;
  double E_X = 0.0;
  double p_ER = 0.0;
  double p_EX = 0.0;
  double t_ER = 0.0;
  double t_EX = 0.0;
  std::optional<double> gamma;  // falls back to CalibrationOptions::gamma_rule
  double delta = 0.0;
  double Z = 0.0;
  double mu = 0.0;
  double t_Z = 0.0;
  double I = 0.0;
  double t_KE = 0.0;
  double t_KX = 0.0;
  double q_K = 1.0;
  double sigma_E = 0.0;
  double eps_ER = 0.0;
};

/// Same economy with every money flow in million 2012$.
struct CanonicalEconomy {
  double E_R = 0.0;
  double E_X = 0.0;
  double p_ER = 0.0;
  double p_EX = 0.0;
  double t_ER = 0.0;
  double t_EX = 0.0;
  std::optional<double> gamma;
  double delta = 0.0;
  double Z = 0.0;
  double mu = 0.0;
  double t_Z = 0.0;
  double income = 0.0;  // million $
  double t_KE = 0.0;
  double t_KX = 0.0;
  double q_K = 1.0;
  double sigma_E = 0.0;
  double eps_ER = 0.0;

  double E() const noexcept { return E_R + E_X; }
  double residential_expenditure() const noexcept { return p_ER * E_R; }
  double industrial_energy_expenditure() const noexcept { return p_EX * E_X; }
  double emission_tax_revenue() const noexcept { return t_Z * Z; }
};

namespace detail {

inline void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    fail(ErrorKind::NonpositiveQuantity, std::string(name) + " must be strictly positive");
}

inline void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v))
    fail(ErrorKind::InvalidInput, std::string(name) + " must be non-negative");
}

}  // namespace detail

/// Checks the sign and numeraire invariants of a benchmark. Margin checks
/// need gamma and live in calibration, where gamma is resolved.
inline void check_benchmark(const BenchmarkEconomy& b) {
  detail::require_positive(b.E_R, "E_R");
  detail::require_nonnegative(b.E_X, "E_X");
  detail::require_positive(b.p_ER, "p_ER");
  detail::require_positive(b.p_EX, "p_EX");
  detail::require_positive(b.Z, "Z");
  detail::require_positive(b.I, "I");
  detail::require_positive(b.mu, "mu");
  detail::require_positive(b.t_Z, "t_Z");
  detail::require_nonnegative(b.t_ER, "t_ER");
  detail::require_nonnegative(b.t_EX, "t_EX");
  detail::require_nonnegative(b.delta, "delta");
  detail::require_nonnegative(b.t_KE, "t_KE");
  detail::require_nonnegative(b.t_KX, "t_KX");
  if (b.gamma) detail::require_positive(*b.gamma, "gamma");
  if (b.q_K != 1.0) fail(ErrorKind::InvalidInput, "q_K is the numeraire and must equal 1");
  if (!(b.sigma_E > 0.0)) fail(ErrorKind::InvalidInput, "sigma_E must be positive");
  if (!(b.eps_ER < 0.0)) fail(ErrorKind::InvalidInput, "eps_ER must be negative");
}

inline CanonicalEconomy canonicalize_units(const BenchmarkEconomy& b) {
  check_benchmark(b);
  CanonicalEconomy c;
  c.E_R = b.E_R;
  c.E_X = b.E_X;
  c.p_ER = b.p_ER;
  c.p_EX = b.p_EX;
  c.t_ER = b.t_ER;
  c.t_EX = b.t_EX;
  c.gamma = b.gamma;
  c.delta = b.delta;
  c.Z = b.Z;
  c.mu = b.mu;
  c.t_Z = b.t_Z;
  c.income = b.I * kMillionPerBillion;
  c.t_KE = b.t_KE;
  c.t_KX = b.t_KX;
  c.q_K = b.q_K;
  c.sigma_E = b.sigma_E;
  c.eps_ER = b.eps_ER;
  return c;
}

/// Already canonical: identity.
inline CanonicalEconomy canonicalize_units(const CanonicalEconomy& c) { return c; }

inline BenchmarkEconomy to_benchmark(const CanonicalEconomy& c) {
  BenchmarkEconomy b;
  b.E_R = c.E_R;
  b.E_X = c.E_X;
  b.p_ER = c.p_ER;
  b.p_EX = c.p_EX;
  b.t_ER = c.t_ER;
  b.t_EX = c.t_EX;
  b.gamma = c.gamma;
  b.delta = c.delta;
  b.Z = c.Z;
  b.mu = c.mu;
  b.t_Z = c.t_Z;
  b.I = c.income / kMillionPerBillion;
  b.t_KE = c.t_KE;
  b.t_KX = c.t_KX;
  b.q_K = c.q_K;
  b.sigma_E = c.sigma_E;
  b.eps_ER = c.eps_ER;
  return b;
}

enum class MarketMode { InferFromPrices, ForceMonopoly, ForcePerfectCompetition };

inline std::string_view to_string(MarketMode m) {
  switch (m) {
    case MarketMode::InferFromPrices: return "infer_n_and_epsEX";
    case MarketMode::ForceMonopoly: return "force_monopoly";
    case MarketMode::ForcePerfectCompetition: return "force_perfect_competition";
  }
  return "?";
}

/// Shares of the lump-sum transfer by revenue source.
struct TransferShares {
  double EX = 0.0;
  double ER = 0.0;
  double KE = 0.0;
  double KX = 0.0;
  double Z = 0.0;

  double sum() const noexcept { return EX + ER + KE + KX + Z; }
};

/// Calibrated share, elasticity and level parameters of the benchmark
/// equilibrium. Only calibrate() constructs a consistent instance.
struct DerivedParameters {
  // Benchmark with gamma, delta and eps_ER resolved for the market mode.
  CanonicalEconomy economy;
  MarketMode mode = MarketMode::InferFromPrices;
  double gamma = 0.0;

  CompetitionIndex n;
  double eps_ER = 0.0;
  double eps_EX = 0.0;
  double sigma_U = 0.0;
  double sigma_X = 0.0;
  double sigma_E = 0.0;

  double omega_E = 0.0;
  double phi_R = 0.0;
  double phi_X = 0.0;
  double theta_EX = 0.0;  // industrial revenue share spent on energy
  double theta_KX = 0.0;  // industrial revenue share spent on capital
  double theta_ER = 0.0;  // residential income share spent on energy
  double rho_Z = 0.0;
  double rho_K = 0.0;
  double beta_E = 0.0;  // stored, eliminated from solutions by the numeraire
  double beta_X = 0.0;

  double p_KE = 0.0;
  double p_KX = 0.0;
  double K_E = 0.0;  // million $ (numeraire units)
  double K_X = 0.0;
  double K_bar = 0.0;

  double margin_R = 0.0;  // p_ER - delta - t_ER - gamma
  double margin_X = 0.0;  // p_EX - t_EX - gamma
  double Pi_E = 0.0;      // million $
  double T = 0.0;         // million $
  double pX_X = 0.0;      // million $
  std::optional<TransferShares> theta_T;  // empty when T = 0

  double E() const noexcept { return economy.E(); }
};

/// Exogenous proportional tax changes. Commodity and emission taxes are
/// relative to their own level (dt/t); capital taxes are relative to the
/// gross-of-tax capital price (dt_K / p_K).
struct PolicyShock {
  double t_Z = 0.0;
  double t_ER = 0.0;
  double t_EX = 0.0;
  double t_KE = 0.0;
  double t_KX = 0.0;

  friend PolicyShock operator+(const PolicyShock& a, const PolicyShock& b) {
    return {a.t_Z + b.t_Z, a.t_ER + b.t_ER, a.t_EX + b.t_EX, a.t_KE + b.t_KE, a.t_KX + b.t_KX};
  }
  friend PolicyShock operator*(double s, const PolicyShock& a) {
    return {s * a.t_Z, s * a.t_ER, s * a.t_EX, s * a.t_KE, s * a.t_KX};
  }
  friend bool operator==(const PolicyShock&, const PolicyShock&) = default;

  double max_abs() const noexcept {
    double m = 0.0;
    for (double v : {t_Z, t_ER, t_EX, t_KE, t_KX}) m = std::max(m, std::abs(v));
    return m;
  }
};

enum class Instrument { t_Z, t_ER, t_EX, t_KE, t_KX };

inline constexpr std::array<Instrument, 5> kInstruments = {
    Instrument::t_Z, Instrument::t_ER, Instrument::t_EX, Instrument::t_KE, Instrument::t_KX};

inline std::string_view to_string(Instrument i) {
  switch (i) {
    case Instrument::t_Z: return "t_Z";
    case Instrument::t_ER: return "t_ER";
    case Instrument::t_EX: return "t_EX";
    case Instrument::t_KE: return "t_KE";
    case Instrument::t_KX: return "t_KX";
  }
  return "?";
}

inline std::optional<Instrument> parse_instrument(std::string_view s) {
  for (Instrument i : kInstruments)
    if (to_string(i) == s) return i;
  return std::nullopt;
}

inline double& component(PolicyShock& s, Instrument i) {
  switch (i) {
    case Instrument::t_Z: return s.t_Z;
    case Instrument::t_ER: return s.t_ER;
    case Instrument::t_EX: return s.t_EX;
    case Instrument::t_KE: return s.t_KE;
    case Instrument::t_KX: return s.t_KX;
  }
  return s.t_Z;
}

inline double component(const PolicyShock& s, Instrument i) {
  return component(const_cast<PolicyShock&>(s), i);
}

inline PolicyShock unit_shock(Instrument i) {
  PolicyShock s;
  component(s, i) = 1.0;
  return s;
}

/// Rejects proportional changes of taxes whose base level is zero.
inline void check_shock(const CanonicalEconomy& e, const PolicyShock& s) {
  auto need = [](double hat, double base, const char* name) {
    if (!std::isfinite(hat)) fail(ErrorKind::InvalidShock, std::string(name) + " is not finite");
    if (hat != 0.0 && base == 0.0)
      fail(ErrorKind::InvalidShock,
           std::string(name) + " is relative to a zero base tax and has no meaning");
  };
  need(s.t_Z, e.t_Z, "t_Z");
  need(s.t_ER, e.t_ER, "t_ER");
  need(s.t_EX, e.t_EX, "t_EX");
  if (!std::isfinite(s.t_KE) || !std::isfinite(s.t_KX))
    fail(ErrorKind::InvalidShock, "capital tax change is not finite");
}

/// The 14 endogenous proportional changes, in the order of the linear system.
enum class Hat { K_E, Z, E, E_R, E_X, K_X, X, p_ER, p_X, p_EX, p_KX, p_KE, gamma, q_K };

inline constexpr std::size_t kHatCount = 14;

inline constexpr std::array<Hat, kHatCount> kHats = {
    Hat::K_E, Hat::Z,   Hat::E,    Hat::E_R,  Hat::E_X,  Hat::K_X,   Hat::X,
    Hat::p_ER, Hat::p_X, Hat::p_EX, Hat::p_KX, Hat::p_KE, Hat::gamma, Hat::q_K};

inline std::string_view to_string(Hat h) {
  static constexpr std::array<std::string_view, kHatCount> names = {
      "K_E", "Z", "E", "E_R", "E_X", "K_X", "X", "p_ER", "p_X", "p_EX", "p_KX", "p_KE", "gamma", "q_K"};
  return names[static_cast<std::size_t>(h)];
}

struct Displacement {
  std::array<double, kHatCount> hats{};
  std::optional<double> Pi_E;  // undefined when the benchmark profit is zero
  double T = 0.0;
  double A = 0.0;  // p_ER^ - p_X^
  double B = 0.0;  // p_EX^ - t_KX^
  double C = 0.0;  // t_Z^ - t_KE^

  double operator[](Hat h) const noexcept { return hats[static_cast<std::size_t>(h)]; }
  double& operator[](Hat h) noexcept { return hats[static_cast<std::size_t>(h)]; }
};

struct TwoTermWelfare {
  double market_power = 0.0;
  double externality = 0.0;
  double total() const noexcept { return market_power + externality; }
};

struct ThreeTermWelfare {
  double oligopoly_output = 0.0;
  double price_discrimination = 0.0;
  double externality = 0.0;
  double total() const noexcept { return oligopoly_output + price_discrimination + externality; }
};

struct SixTermWelfare {
  std::array<double, 6> W{};
  double total() const noexcept { return W[0] + W[1] + W[2] + W[3] + W[4] + W[5]; }
};

/// Money-metric welfare change dU/lambda in million 2012$.
struct WelfareDecomposition {
  double total = 0.0;
  TwoTermWelfare two_term;
  ThreeTermWelfare three_term;
  SixTermWelfare six_term;
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double residual = 0.0;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  const ValidationCheck* find(std::string_view name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Evaluates every DerivedParameters invariant without throwing.
inline ValidationReport audit_benchmark(const DerivedParameters& p) {
  ValidationReport r;
  auto add = [&](std::string name, bool ok, double residual) {
    r.checks.push_back({std::move(name), ok, residual});
  };
  const auto& e = p.economy;
  const bool competitive = p.mode == MarketMode::ForcePerfectCompetition;

  const double phi = p.phi_R + p.phi_X - 1.0;
  add("phi_R + phi_X = 1", std::abs(phi) <= kStructuralTol, phi);
  const double rho = p.rho_Z + p.rho_K - 1.0;
  add("rho_Z + rho_K = 1", std::abs(rho) <= kStructuralTol, rho);
  const double theta = p.theta_EX + p.theta_KX - 1.0;
  add("theta_EX + theta_KX = 1", std::abs(theta) <= kStructuralTol, theta);
  if (p.theta_T) {
    const double s = p.theta_T->sum() - 1.0;
    add("transfer shares sum to 1", std::abs(s) <= kCalibrationTol, s);
  }

  add("eps_ER < -1/n", p.n.admits_elasticity(p.eps_ER), p.eps_ER);
  add("eps_EX < -1/n", p.n.admits_elasticity(p.eps_EX), p.eps_EX);

  const double income_sources = e.q_K * p.K_bar + e.delta * e.E_R + p.Pi_E + p.T;
  const double r1 = (income_sources - e.income) / e.income;
  add("I = q_K K_bar + delta E_R + Pi_E + T", std::abs(r1) <= kCalibrationTol, r1);
  const double r2 = (p.pX_X + e.p_ER * e.E_R - e.income) / e.income;
  add("I = p_X X + p_ER E_R", std::abs(r2) <= kCalibrationTol, r2);

  const double m_tol = competitive ? -1e-12 * e.p_ER : 0.0;
  add("residential margin positive", competitive ? p.margin_R >= m_tol : p.margin_R > 0.0, p.margin_R);
  add("industrial margin positive", competitive ? p.margin_X >= m_tol : p.margin_X > 0.0, p.margin_X);

  add("sigma_U > 0", p.sigma_U > 0.0, p.sigma_U);
  add("sigma_X > 0", p.sigma_X > 0.0, p.sigma_X);
  return r;
}

/// Like audit_benchmark, but throws on the hard failures: elasticity bound,
/// income identity, or a negative margin outside forced perfect competition.
inline ValidationReport validate_benchmark(const DerivedParameters& p) {
  ValidationReport r = audit_benchmark(p);
  for (const auto& c : r.checks) {
    if (c.passed) continue;
    if (c.name.starts_with("eps_"))
      fail(ErrorKind::ElasticityBoundViolation, c.name + " violated (eps = " + std::to_string(c.residual) + ")");
    if (c.name.starts_with("I ="))
      fail(ErrorKind::IncomeIdentityViolation, c.name + " relative residual " + std::to_string(c.residual));
    if (c.name.find("margin") != std::string::npos)
      fail(ErrorKind::NonpositiveMargin, c.name + " violated (margin = " + std::to_string(c.residual) + ")");
  }
  return r;
}

}  // namespace oligo
