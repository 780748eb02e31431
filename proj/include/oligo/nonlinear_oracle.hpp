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
#include <future>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oligo/displacement.hpp"
#include "oligo/errors.hpp"
#include "oligo/model.hpp"

namespace oligo {

/// Two-input CES unit cost function, calibrated so that cost(w0) = c0 with
/// cost shares s. sigma = 1 is the Cobb-Douglas limit.
class CesCost {
 public:
  CesCost() = default;
  CesCost(std::array<double, 2> shares, std::array<double, 2> w0, double c0, double sigma)
      : shares_(shares), sigma_(sigma) {
    if (!(sigma > 0.0)) fail(ErrorKind::CalibrationResidual, "CES elasticity must be positive");
    if (cobb_douglas()) {
      scale_ = c0 / (std::pow(w0[0], shares[0]) * std::pow(w0[1], shares[1]));
    } else {
      for (int i = 0; i < 2; ++i) a_[i] = shares[i] * std::pow(c0 / w0[i], 1.0 - sigma);
    }
  }

  bool cobb_douglas() const noexcept { return std::abs(sigma_ - 1.0) < 1e-12; }

  double cost(const std::array<double, 2>& w) const {
    if (cobb_douglas()) return scale_ * std::pow(w[0], shares_[0]) * std::pow(w[1], shares_[1]);
    const double s = a_[0] * std::pow(w[0], 1.0 - sigma_) + a_[1] * std::pow(w[1], 1.0 - sigma_);
    return std::pow(s, 1.0 / (1.0 - sigma_));
  }

  /// Input i per unit of output.
  double demand(const std::array<double, 2>& w, int i) const {
    const double c = cost(w);
    if (cobb_douglas()) return shares_[i] * c / w[i];
    return a_[i] * std::pow(w[i], -sigma_) * std::pow(c, sigma_);
  }

  const std::array<double, 2>& coefficients() const noexcept { return a_; }

 private:
  std::array<double, 2> shares_{};
  std::array<double, 2> a_{};
  double sigma_ = 1.0;
  double scale_ = 1.0;
};

enum class ElasticityRule {
  BenchmarkConstant,  // firms price off the benchmark elasticities
  StateDependent,     // share-formula point elasticities at the current state
};

struct TaxLevels {
  double t_Z = 0.0;
  double t_ER = 0.0;
  double t_EX = 0.0;
  double t_KE = 0.0;
  double t_KX = 0.0;
};

/// Tax levels after moving a fraction h along a proportional shock.
inline TaxLevels shocked_taxes(const DerivedParameters& p, const PolicyShock& s, double h) {
  const auto& e = p.economy;
  return {e.t_Z * (1.0 + h * s.t_Z), e.t_ER * (1.0 + h * s.t_ER), e.t_EX * (1.0 + h * s.t_EX),
          e.t_KE + h * s.t_KE * p.p_KE, e.t_KX + h * s.t_KX * p.p_KX};
}

inline constexpr std::size_t kOracleUnknowns = 11;
using OracleVector = Eigen::Matrix<double, kOracleUnknowns, 1>;

/// Unknown order: K_E, Z, E, E_R, E_X, K_X, X, p_ER, p_X, p_EX, gamma.
struct ParametricEconomy {
  CesCost energy;      // inputs (p_KE, t_Z)
  CesCost industrial;  // inputs (p_KX, p_EX)
  double kappa = 0.0;  // X / E_R scale in the utility demand ratio
  double sigma_U = 0.0;
  double sigma_X = 0.0;
  double sigma_E = 0.0;
  CompetitionIndex n;
  double eps_ER = 0.0;
  double eps_EX = 0.0;
  double delta = 0.0;
  double K_bar = 0.0;
  ElasticityRule rule = ElasticityRule::BenchmarkConstant;
  OracleVector benchmark_log = OracleVector::Zero();
  TaxLevels benchmark_taxes;
};

struct EquilibriumState {
  double gamma = 0.0, p_EX = 0.0, p_ER = 0.0, p_X = 0.0;
  double E = 0.0, E_R = 0.0, E_X = 0.0, K_E = 0.0, K_X = 0.0, X = 0.0, Z = 0.0;
  double I = 0.0, Pi_E = 0.0, T = 0.0;
  double residual_norm = 0.0;
  double budget_residual = 0.0;  // relative; checked, never imposed
  int iterations = 0;
  OracleVector log_state = OracleVector::Zero();
  TaxLevels taxes;

  /// Log levels of the 14 endogenous variables in Hat order.
  std::array<double, kHatCount> log_levels() const {
    return {std::log(K_E), std::log(Z),   std::log(E),   std::log(E_R),
            std::log(E_X), std::log(K_X), std::log(X),   std::log(p_ER),
            std::log(p_X), std::log(p_EX), std::log(1.0 + taxes.t_KX), std::log(1.0 + taxes.t_KE),
            std::log(gamma), 0.0};
  }
};

inline OracleVector oracle_residuals(const ParametricEconomy& pe, const OracleVector& y, const TaxLevels& t) {
  const double KE = std::exp(y(0)), Z = std::exp(y(1)), E = std::exp(y(2)), ER = std::exp(y(3));
  const double EX = std::exp(y(4)), KX = std::exp(y(5)), X = std::exp(y(6)), pER = std::exp(y(7));
  const double pX = std::exp(y(8)), pEX = std::exp(y(9)), g = std::exp(y(10));
  const double pKE = 1.0 + t.t_KE, pKX = 1.0 + t.t_KX;

  double eR = pe.eps_ER, eX = pe.eps_EX;
  if (pe.rule == ElasticityRule::StateDependent) {
    const double thR = pER * ER / (pX * X + pER * ER);
    const double thX = pEX * EX / (pX * X);
    eR = -thR - (1.0 - thR) * pe.sigma_U;
    eX = -thX - (1.0 - thX) * pe.sigma_X;
  }
  const double fR = pe.n.pass_through(eR);
  const double fX = pe.n.pass_through(eX);
  const std::array<double, 2> wX{pKX, pEX};
  const std::array<double, 2> wE{pKE, t.t_Z};

  OracleVector r;
  r(0) = std::log(KE + KX) - std::log(pe.K_bar);
  r(1) = std::log(X / ER) - std::log(pe.kappa) - pe.sigma_U * std::log(pER / pX);
  r(2) = std::log(pX) - std::log(pe.industrial.cost(wX));
  r(3) = std::log(KX / X) - std::log(pe.industrial.demand(wX, 0));
  r(4) = std::log(EX / X) - std::log(pe.industrial.demand(wX, 1));
  r(5) = std::log(E) - std::log(ER + EX);
  r(6) = std::log(g) - std::log(pe.energy.cost(wE));
  r(7) = std::log(KE / E) - std::log(pe.energy.demand(wE, 0));
  r(8) = std::log(Z / E) - std::log(pe.energy.demand(wE, 1));
  r(9) = std::log(pEX) - std::log(fX * (g + t.t_EX));
  r(10) = std::log(pER) - std::log(fR * (g + pe.delta + t.t_ER));
  return r;
}

inline ParametricEconomy calibrate_parametric(const DerivedParameters& p,
                                              ElasticityRule rule = ElasticityRule::BenchmarkConstant) {
  const auto& e = p.economy;
  const double budget = e.q_K * p.K_bar + e.delta * e.E_R + p.Pi_E + p.T;
  if (std::abs(budget - e.income) > 1e-10 * e.income)
    fail(ErrorKind::CalibrationResidual, "benchmark violates the income identity");

  ParametricEconomy pe;
  pe.energy = CesCost({p.rho_K, p.rho_Z}, {p.p_KE, e.t_Z}, p.gamma, p.sigma_E);
  pe.industrial = CesCost({p.theta_KX, p.theta_EX}, {p.p_KX, e.p_EX}, 1.0, p.sigma_X);
  const double X0 = p.pX_X;  // p_X = 1 at the benchmark
  pe.kappa = X0 / e.E_R * std::pow(1.0 / e.p_ER, p.sigma_U);
  pe.sigma_U = p.sigma_U;
  pe.sigma_X = p.sigma_X;
  pe.sigma_E = p.sigma_E;
  pe.n = p.n;
  pe.eps_ER = p.eps_ER;
  pe.eps_EX = p.eps_EX;
  pe.delta = e.delta;
  pe.K_bar = p.K_bar;
  pe.rule = rule;
  pe.benchmark_log << std::log(p.K_E), std::log(e.Z), std::log(p.E()), std::log(e.E_R), std::log(e.E_X),
      std::log(p.K_X), std::log(X0), std::log(e.p_ER), 0.0, std::log(e.p_EX), std::log(p.gamma);
  pe.benchmark_taxes = {e.t_Z, e.t_ER, e.t_EX, e.t_KE, e.t_KX};

  const double res = oracle_residuals(pe, pe.benchmark_log, pe.benchmark_taxes).cwiseAbs().maxCoeff();
  if (!(res < 1e-10))
    fail(ErrorKind::CalibrationResidual, "benchmark residual " + std::to_string(res) + " exceeds 1e-10");
  return pe;
}

struct SolverOptions {
  int max_iterations = 100;
  double tolerance = 1e-14;   // stop once the max residual falls below this
  double acceptance = 1e-10;  // a stalled iterate is still accepted below this
  double jacobian_step = 1e-7;
};

inline EquilibriumState solve_equilibrium(const ParametricEconomy& pe, const TaxLevels& t,
                                          const SolverOptions& opt = {}) {
  OracleVector y = pe.benchmark_log;
  auto norm = [](const OracleVector& r) { return r.cwiseAbs().maxCoeff(); };
  OracleVector r = oracle_residuals(pe, y, t);
  double rn = norm(r);
  int it = 0;
  for (; it < opt.max_iterations && rn > opt.tolerance; ++it) {
    Eigen::Matrix<double, kOracleUnknowns, kOracleUnknowns> J;
    for (std::size_t j = 0; j < kOracleUnknowns; ++j) {
      OracleVector yp = y, ym = y;
      yp(j) += opt.jacobian_step;
      ym(j) -= opt.jacobian_step;
      J.col(j) = (oracle_residuals(pe, yp, t) - oracle_residuals(pe, ym, t)) / (2.0 * opt.jacobian_step);
    }
    const OracleVector step = J.partialPivLu().solve(r);
    double lambda = 1.0;
    bool improved = false;
    for (int k = 0; k < 30; ++k) {
      const OracleVector cand = y - lambda * step;
      if (!cand.allFinite()) {
        lambda *= 0.5;
        continue;
      }
      const OracleVector rc = oracle_residuals(pe, cand, t);
      if (rc.allFinite() && norm(rc) < rn) {
        y = cand;
        r = rc;
        rn = norm(rc);
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) {
      if (!r.allFinite() || !y.allFinite())
        fail(ErrorKind::NonpositiveState, "iterate left the positive orthant");
      break;
    }
  }
  if (!(rn < opt.acceptance))
    fail(ErrorKind::NoConvergence, "residual " + std::to_string(rn) + " after " + std::to_string(it) + " iterations");

  EquilibriumState s;
  s.log_state = y;
  s.taxes = t;
  s.iterations = it;
  s.residual_norm = rn;
  s.K_E = std::exp(y(0));
  s.Z = std::exp(y(1));
  s.E = std::exp(y(2));
  s.E_R = std::exp(y(3));
  s.E_X = std::exp(y(4));
  s.K_X = std::exp(y(5));
  s.X = std::exp(y(6));
  s.p_ER = std::exp(y(7));
  s.p_X = std::exp(y(8));
  s.p_EX = std::exp(y(9));
  s.gamma = std::exp(y(10));
  s.I = s.p_X * s.X + s.p_ER * s.E_R;
  s.Pi_E = (s.p_ER - pe.delta - t.t_ER - s.gamma) * s.E_R + (s.p_EX - t.t_EX - s.gamma) * s.E_X;
  s.T = t.t_EX * s.E_X + t.t_ER * s.E_R + t.t_KE * s.K_E + t.t_KX * s.K_X + t.t_Z * s.Z;
  s.budget_residual = (pe.K_bar + pe.delta * s.E_R + s.Pi_E + s.T - s.I) / s.I;
  return s;
}

struct AccuracyRow {
  Hat component = Hat::K_E;
  double hat = 0.0;
  double d_h = 0.0;
  double d_h2 = 0.0;
  double ratio = 0.0;
  bool pass = false;
};

struct AccuracyReport {
  PolicyShock direction;  // normalized to a max component of 1
  double h = 0.0;
  std::vector<AccuracyRow> rows;

  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return !rows.empty();
  }
};

inline constexpr double kRatioLow = 3.5;
inline constexpr double kRatioHigh = 4.5;
inline constexpr double kDiscrepancyFloor = 1e-8;

/// Compares displacement hats with symmetric nonlinear log-changes at steps
/// h and h/2. A second-order error shrinks four-fold when h halves.
inline AccuracyReport first_order_accuracy(const ParametricEconomy& pe, const DerivedParameters& p,
                                           const PolicyShock& shock, double h = 0.01) {
  AccuracyReport rep;
  rep.h = h;
  const double m = shock.max_abs();
  if (m == 0.0) {
    for (Hat c : kHats) rep.rows.push_back({c, 0.0, 0.0, 0.0, 0.0, true});
    return rep;
  }
  rep.direction = (1.0 / m) * shock;
  const Displacement d = solve_displacement(p, rep.direction);

  const std::array<double, 4> steps = {h, -h, h / 2, -h / 2};
  std::array<std::future<EquilibriumState>, 4> jobs;
  for (std::size_t i = 0; i < 4; ++i) {
    const TaxLevels t = shocked_taxes(p, rep.direction, steps[i]);
    jobs[i] = std::async(std::launch::async, [&pe, t] { return solve_equilibrium(pe, t); });
  }
  std::array<std::array<double, kHatCount>, 4> logs;
  for (std::size_t i = 0; i < 4; ++i) logs[i] = jobs[i].get().log_levels();

  for (Hat c : kHats) {
    const auto k = static_cast<std::size_t>(c);
    AccuracyRow row;
    row.component = c;
    row.hat = d[c];
    row.d_h = std::abs((logs[0][k] - logs[1][k]) / (2 * h) - d[c]);
    row.d_h2 = std::abs((logs[2][k] - logs[3][k]) / h - d[c]);
    row.ratio = row.d_h2 > 0.0 ? row.d_h / row.d_h2 : (row.d_h == 0.0 ? 0.0 : INFINITY);
    row.pass = (row.ratio >= kRatioLow && row.ratio <= kRatioHigh) ||
               (row.d_h < kDiscrepancyFloor && row.d_h2 < kDiscrepancyFloor);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace oligo
