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

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "oligo/competition.hpp"
#include "oligo/errors.hpp"
#include "oligo/model.hpp"

namespace oligo {

struct CalibrationOptions {
  MarketMode mode = MarketMode::InferFromPrices;
  double gamma_rule = 0.80;  // gamma = gamma_rule * p_EX when gamma is absent
  // Industrial elasticity kept under forced perfect competition. When empty
  // it is the value the default calibration of the same economy infers.
  std::optional<double> competitive_eps_EX;
};

struct Shares {
  double phi_R = 0.0;
  double phi_X = 0.0;
  double rho_Z = 0.0;
  double theta_ER = 0.0;
  double theta_EX = 0.0;
  double theta_KX = 0.0;
  double pX_X = 0.0;
};

struct MarketStructure {
  CompetitionIndex n;
  double eps_ER = 0.0;
  double eps_EX = 0.0;
};

struct SubstitutionElasticities {
  double sigma_U = 0.0;
  double sigma_X = 0.0;
};

struct CapitalImputation {
  double K_E = 0.0;
  double K_X = 0.0;
  double K_bar = 0.0;
  double omega_E = 0.0;
  double rho_K = 0.0;
  double p_KE = 0.0;
  double p_KX = 0.0;
};

struct Levels {
  double Pi_E = 0.0;
  double T = 0.0;
  std::optional<TransferShares> theta_T;
};

inline double resolve_gamma(const CanonicalEconomy& e, double gamma_rule) {
  if (e.gamma) return *e.gamma;
  if (!(gamma_rule > 0.0 && gamma_rule < 1.0))
    fail(ErrorKind::InvalidInput, "gamma_rule must lie in (0, 1)");
  return gamma_rule * e.p_EX;
}

inline double residential_margin(const CanonicalEconomy& e, double gamma) {
  return e.p_ER - e.delta - e.t_ER - gamma;
}

inline double industrial_margin(const CanonicalEconomy& e, double gamma) {
  return e.p_EX - e.t_EX - gamma;
}

inline Shares compute_shares(const CanonicalEconomy& e, double gamma) {
  Shares s;
  const double E = e.E();
  s.phi_R = e.E_R / E;
  s.phi_X = e.E_X / E;
  s.rho_Z = e.t_Z * e.Z / (gamma * E);
  const double res = e.residential_expenditure();
  if (res >= e.income)
    fail(ErrorKind::NonpositiveIndustrialRevenue, "p_ER * E_R must be below income I");
  s.theta_ER = res / e.income;
  s.pX_X = e.income - res;
  s.theta_EX = e.industrial_energy_expenditure() / s.pX_X;
  s.theta_KX = 1.0 - s.theta_EX;
  return s;
}

/// Inverts the two Cournot pricing conditions for n and eps_EX given eps_ER.
inline MarketStructure solve_market_structure(const CanonicalEconomy& e, double gamma) {
  const double m_R = residential_margin(e, gamma);
  const double m_X = industrial_margin(e, gamma);
  if (!(m_R > 0.0))
    fail(ErrorKind::NonpositiveMargin, "residential margin p_ER - delta - t_ER - gamma is not positive");
  if (m_X == 0.0)
    fail(ErrorKind::PerfectCompetitionLimit,
         "industrial margin is zero, which implies n = inf; use force_perfect_competition");
  if (m_X < 0.0)
    fail(ErrorKind::NonpositiveMargin, "industrial margin p_EX - t_EX - gamma is not positive");
  const double n = -e.p_ER / (e.eps_ER * m_R);
  if (n < 1.0)
    fail(ErrorKind::CompetitionIndexBelowOne, "implied n = " + std::to_string(n) + " is below 1");
  MarketStructure ms;
  ms.n = CompetitionIndex(n);
  ms.eps_ER = e.eps_ER;
  ms.eps_EX = -e.p_EX / (n * m_X);
  return ms;
}

inline MarketStructure monopoly_structure(const CanonicalEconomy& e, double gamma) {
  const double m_R = residential_margin(e, gamma);
  const double m_X = industrial_margin(e, gamma);
  if (!(m_R > 0.0) || !(m_X > 0.0))
    fail(ErrorKind::NonpositiveMargin, "monopoly pricing needs positive margins");
  MarketStructure ms;
  ms.n = CompetitionIndex::monopoly();
  ms.eps_ER = -e.p_ER / m_R;
  ms.eps_EX = -e.p_EX / m_X;
  return ms;
}

/// Residuals of the two Cournot pricing conditions in $/mmBtu.
inline std::pair<double, double> pricing_residuals(const CanonicalEconomy& e, double gamma,
                                                   const MarketStructure& ms) {
  if (ms.n.is_infinite())
    return {residential_margin(e, gamma), industrial_margin(e, gamma)};
  const double n = ms.n.value();
  const double rR = n * (e.p_ER - e.delta - e.t_ER) + e.p_ER / ms.eps_ER - n * gamma;
  const double rX = n * (e.p_EX - e.t_EX) + e.p_EX / ms.eps_EX - n * gamma;
  return {rR, rX};
}

inline double substitution_elasticity(double eps, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) fail(ErrorKind::InvalidInput, "expenditure share outside (0, 1)");
  if (!(eps < 0.0)) fail(ErrorKind::InvalidInput, "demand elasticity must be negative");
  const double sigma = (-eps - theta) / (1.0 - theta);
  if (!(sigma > 0.0))
    fail(ErrorKind::NonpositiveSigma, "demand too inelastic for a positive substitution elasticity");
  return sigma;
}

inline SubstitutionElasticities derive_substitution_elasticities(const Shares& s, double eps_ER,
                                                                 double eps_EX) {
  return {substitution_elasticity(eps_ER, s.theta_ER), substitution_elasticity(eps_EX, s.theta_EX)};
}

inline CapitalImputation impute_capital(const CanonicalEconomy& e, double gamma, double pX_X) {
  CapitalImputation c;
  const double E = e.E();
  c.p_KE = e.q_K + e.t_KE;
  c.p_KX = e.q_K + e.t_KX;
  const double energy_capital_cost = gamma * E - e.emission_tax_revenue();
  if (energy_capital_cost < 0.0)
    fail(ErrorKind::NegativeCapital, "emission tax bill t_Z Z exceeds energy cost gamma E");
  c.K_E = energy_capital_cost / c.p_KE;
  const double industrial_capital_cost = pX_X - e.industrial_energy_expenditure();
  if (industrial_capital_cost < 0.0)
    fail(ErrorKind::NegativeCapital, "industrial energy bill exceeds industrial revenue");
  c.K_X = industrial_capital_cost / c.p_KX;
  c.K_bar = c.K_E + c.K_X;
  c.omega_E = c.K_E / c.K_bar;
  c.rho_K = c.p_KE * c.K_E / (gamma * E);
  return c;
}

inline Levels compute_levels(const CanonicalEconomy& e, double gamma, const CapitalImputation& k) {
  Levels l;
  l.Pi_E = residential_margin(e, gamma) * e.E_R + industrial_margin(e, gamma) * e.E_X;
  TransferShares rev;
  rev.EX = e.t_EX * e.E_X;
  rev.ER = e.t_ER * e.E_R;
  rev.KE = e.t_KE * k.K_E;
  rev.KX = e.t_KX * k.K_X;
  rev.Z = e.emission_tax_revenue();
  l.T = rev.sum();
  if (l.T > 0.0) {
    l.theta_T = TransferShares{rev.EX / l.T, rev.ER / l.T, rev.KE / l.T, rev.KX / l.T, rev.Z / l.T};
  }
  return l;
}

inline DerivedParameters calibrate(const CanonicalEconomy& input, const CalibrationOptions& opt = {}) {
  check_benchmark(to_benchmark(input));
  CanonicalEconomy e = input;
  double gamma = resolve_gamma(e, opt.gamma_rule);

  MarketStructure ms;
  switch (opt.mode) {
    case MarketMode::InferFromPrices:
      ms = solve_market_structure(e, gamma);
      break;
    case MarketMode::ForceMonopoly:
      ms = monopoly_structure(e, gamma);
      break;
    case MarketMode::ForcePerfectCompetition: {
      double eps_EX = 0.0;
      if (opt.competitive_eps_EX) {
        eps_EX = *opt.competitive_eps_EX;
      } else {
        eps_EX = solve_market_structure(e, gamma).eps_EX;
      }
      gamma = e.p_EX - e.t_EX;
      e.delta = e.p_ER - e.t_ER - gamma;
      if (!(gamma > 0.0)) fail(ErrorKind::NonpositiveMargin, "p_EX - t_EX must be positive");
      if (e.delta < 0.0)
        fail(ErrorKind::NonpositiveMargin, "zero residential margin needs p_ER - t_ER >= p_EX - t_EX");
      ms.n = CompetitionIndex::perfect_competition();
      ms.eps_ER = e.eps_ER;
      ms.eps_EX = eps_EX;
      break;
    }
  }
  e.gamma = gamma;
  e.eps_ER = ms.eps_ER;

  const Shares sh = compute_shares(e, gamma);
  const SubstitutionElasticities se = derive_substitution_elasticities(sh, ms.eps_ER, ms.eps_EX);
  const CapitalImputation k = impute_capital(e, gamma, sh.pX_X);
  Levels lv = compute_levels(e, gamma, k);

  DerivedParameters p;
  p.economy = e;
  p.mode = opt.mode;
  p.gamma = gamma;
  p.n = ms.n;
  p.eps_ER = ms.eps_ER;
  p.eps_EX = ms.eps_EX;
  p.sigma_U = se.sigma_U;
  p.sigma_X = se.sigma_X;
  p.sigma_E = e.sigma_E;
  p.omega_E = k.omega_E;
  p.phi_R = sh.phi_R;
  p.phi_X = sh.phi_X;
  p.theta_EX = sh.theta_EX;
  p.theta_KX = sh.theta_KX;
  p.theta_ER = sh.theta_ER;
  p.rho_Z = sh.rho_Z;
  p.rho_K = k.rho_K;
  p.p_KE = k.p_KE;
  p.p_KX = k.p_KX;
  p.beta_E = e.q_K / k.p_KE;
  p.beta_X = e.q_K / k.p_KX;
  p.K_E = k.K_E;
  p.K_X = k.K_X;
  p.K_bar = k.K_bar;
  p.pX_X = sh.pX_X;
  if (opt.mode == MarketMode::ForcePerfectCompetition) {
    p.margin_R = 0.0;
    p.margin_X = 0.0;
    lv.Pi_E = 0.0;
  } else {
    p.margin_R = residential_margin(e, gamma);
    p.margin_X = industrial_margin(e, gamma);
  }
  p.Pi_E = lv.Pi_E;
  p.T = lv.T;
  p.theta_T = lv.theta_T;
  validate_benchmark(p);
  return p;
}

inline DerivedParameters calibrate(const BenchmarkEconomy& b, const CalibrationOptions& opt = {}) {
  return calibrate(canonicalize_units(b), opt);
}

}  // namespace oligo
