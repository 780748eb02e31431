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
#include <optional>

#include "oligo/errors.hpp"
#include "oligo/model.hpp"

namespace oligo {

struct PriceChanges {
  double gamma = 0.0;
  double p_EX = 0.0;
  double p_ER = 0.0;
  double p_X = 0.0;
};

struct RelativePrices {
  double A = 0.0;  // p_ER^ - p_X^
  double B = 0.0;  // p_EX^ - t_KX^
  double C = 0.0;  // t_Z^ - t_KE^
};

struct QuantityChanges {
  double K_X = 0.0;
  double K_E = 0.0;
  double E = 0.0;
  double E_R = 0.0;
  double E_X = 0.0;
  double X = 0.0;
  double Z = 0.0;
};

inline PriceChanges solve_prices(const DerivedParameters& p, const PolicyShock& s) {
  const auto& e = p.economy;
  const double E = p.E();
  PriceChanges r;
  r.gamma = p.rho_Z * s.t_Z + (1.0 - p.rho_Z) * s.t_KE;

  // Cost shifters per unit of energy: capital bill and emission bill.
  const double capital_cost = p.p_KE * p.K_E / E;
  const double emission_cost = e.t_Z * e.Z / E;
  const double fX = p.n.pass_through(p.eps_EX);
  const double fR = p.n.pass_through(p.eps_ER);
  r.p_EX = fX * (e.t_EX / e.p_EX * s.t_EX + capital_cost / e.p_EX * s.t_KE +
                 emission_cost / e.p_EX * s.t_Z);
  r.p_ER = fR * (e.t_ER / e.p_ER * s.t_ER + capital_cost / e.p_ER * s.t_KE +
                 emission_cost / e.p_ER * s.t_Z);
  r.p_X = (1.0 - p.theta_EX) * s.t_KX + p.theta_EX * r.p_EX;
  return r;
}

inline RelativePrices relative_price_changes(const PriceChanges& pr, const PolicyShock& s) {
  return {pr.p_ER - pr.p_X, pr.p_EX - s.t_KX, s.t_Z - s.t_KE};
}

inline RelativePrices relative_price_changes(const DerivedParameters& p, const PolicyShock& s) {
  return relative_price_changes(solve_prices(p, s), s);
}

inline QuantityChanges solve_quantities(const DerivedParameters& p, const RelativePrices& rp) {
  const double sU = p.sigma_U, sX = p.sigma_X, sE = p.sigma_E;
  const double om = p.omega_E, phR = p.phi_R, phX = p.phi_X, th = p.theta_EX, rZ = p.rho_Z;
  const double A = rp.A, B = rp.B, C = rp.C;
  const double industrial_reach = phX + phR * th;  // energy use via industrial output

  QuantityChanges q;
  q.K_X = sU * om * phR * A + sX * om * industrial_reach * B - sE * om * rZ * C;
  q.K_E = -sU * (1 - om) * phR * A - sX * (1 - om) * industrial_reach * B + sE * (1 - om) * rZ * C;
  q.E = -sU * (1 - om) * phR * A - sX * (1 - om) * industrial_reach * B - sE * om * rZ * C;
  q.E_R = -sU * (1 - om * phR) * A - sX * (th - om * industrial_reach) * B - sE * om * rZ * C;
  q.E_X = sU * om * phR * A - sX * (1 - om * industrial_reach) * B - sE * om * rZ * C;
  q.X = sU * om * phR * A - sX * (th - om * industrial_reach) * B - sE * om * rZ * C;
  q.Z = -sU * (1 - om) * phR * A - sX * (1 - om) * industrial_reach * B - sE * (1 - (1 - om) * rZ) * C;
  return q;
}

namespace detail {

inline Displacement assemble(const PriceChanges& pr, const RelativePrices& rp,
                             const QuantityChanges& q, const PolicyShock& s) {
  Displacement d;
  d[Hat::K_E] = q.K_E;
  d[Hat::Z] = q.Z;
  d[Hat::E] = q.E;
  d[Hat::E_R] = q.E_R;
  d[Hat::E_X] = q.E_X;
  d[Hat::K_X] = q.K_X;
  d[Hat::X] = q.X;
  d[Hat::p_ER] = pr.p_ER;
  d[Hat::p_X] = pr.p_X;
  d[Hat::p_EX] = pr.p_EX;
  d[Hat::p_KX] = s.t_KX;
  d[Hat::p_KE] = s.t_KE;
  d[Hat::gamma] = pr.gamma;
  d[Hat::q_K] = 0.0;
  d.A = rp.A;
  d.B = rp.B;
  d.C = rp.C;
  return d;
}

}  // namespace detail

/// Profit change; empty when the benchmark profit is zero.
inline std::optional<double> profit_change(const DerivedParameters& p, const Displacement& d,
                                           const PolicyShock& s) {
  const auto& e = p.economy;
  if (!(std::abs(p.Pi_E) > 1e-9 * e.income)) return std::nullopt;
  const double g_hat = d[Hat::gamma];
  const double res = e.E_R * (p.margin_R * d[Hat::E_R] + e.p_ER * d[Hat::p_ER] - e.t_ER * s.t_ER -
                              p.gamma * g_hat);
  const double ind = e.E_X * (p.margin_X * d[Hat::E_X] + e.p_EX * d[Hat::p_EX] - e.t_EX * s.t_EX -
                              p.gamma * g_hat);
  return (res + ind) / p.Pi_E;
}

/// Transfer change. Capital terms are written in levels so a zero capital tax
/// needs no (p_K / t_K) factor.
inline double transfer_change(const DerivedParameters& p, const Displacement& d, const PolicyShock& s) {
  const auto& e = p.economy;
  if (!(p.T > 0.0)) fail(ErrorKind::ZeroTransferBase, "benchmark transfer T is zero");
  const double dT = e.t_EX * e.E_X * (s.t_EX + d[Hat::E_X]) + e.t_ER * e.E_R * (s.t_ER + d[Hat::E_R]) +
                    e.t_KE * p.K_E * d[Hat::K_E] + p.p_KE * p.K_E * s.t_KE +
                    e.t_KX * p.K_X * d[Hat::K_X] + p.p_KX * p.K_X * s.t_KX +
                    e.t_Z * e.Z * (s.t_Z + d[Hat::Z]);
  return dT / p.T;
}

/// Closed-form displacement for an arbitrary shock.
inline Displacement solve_displacement(const DerivedParameters& p, const PolicyShock& s) {
  check_shock(p.economy, s);
  const PriceChanges pr = solve_prices(p, s);
  const RelativePrices rp = relative_price_changes(pr, s);
  const QuantityChanges q = solve_quantities(p, rp);
  Displacement d = detail::assemble(pr, rp, q, s);
  d.Pi_E = profit_change(p, d, s);
  d.T = transfer_change(p, d, s);
  return d;
}

struct EmissionTaxCase {
  Displacement displacement;
  bool sign_rule_applies = false;  // sigma_X > sigma_U and t_Z^ > 0
  bool emissions_fall = false;
};

/// Emission-tax-only solution written out directly: only t_Z^ moves, so
/// B^ = p_EX^ and C^ = t_Z^.
inline EmissionTaxCase solve_special_case_emission_tax(const DerivedParameters& p, const PolicyShock& s) {
  if (s.t_ER != 0.0 || s.t_EX != 0.0 || s.t_KE != 0.0 || s.t_KX != 0.0)
    fail(ErrorKind::InvalidSpecialCase, "only the emission tax may change in this solution");
  check_shock(p.economy, s);
  const auto& e = p.economy;
  const double tZ = s.t_Z;
  const double E = p.E();
  const double bill = e.t_Z * e.Z / E;

  PriceChanges pr;
  pr.gamma = p.rho_Z * tZ;
  pr.p_EX = p.n.pass_through(p.eps_EX) * (bill / e.p_EX) * tZ;
  pr.p_ER = p.n.pass_through(p.eps_ER) * (bill / e.p_ER) * tZ;
  pr.p_X = p.theta_EX * pr.p_EX;

  const double om = p.omega_E;
  const double uA = p.sigma_U * p.phi_R;
  const double xB = p.sigma_X * (p.phi_X + p.phi_R * p.theta_EX);
  const double dA = pr.p_ER - pr.p_X;
  const double eC = p.sigma_E * p.rho_Z * tZ;

  QuantityChanges q;
  q.Z = -uA * (1 - om) * dA - xB * (1 - om) * pr.p_EX - p.sigma_E * (1 - (1 - om) * p.rho_Z) * tZ;
  q.E = -uA * (1 - om) * dA - xB * (1 - om) * pr.p_EX - om * eC;
  q.K_E = -uA * (1 - om) * dA - xB * (1 - om) * pr.p_EX + (1 - om) * eC;
  q.K_X = uA * om * dA + xB * om * pr.p_EX - om * eC;
  q.E_X = q.K_X - p.sigma_X * pr.p_EX;
  q.X = (1 - p.theta_EX) * q.K_X + p.theta_EX * q.E_X;
  q.E_R = q.X - p.sigma_U * dA;

  EmissionTaxCase out;
  const RelativePrices rp{dA, pr.p_EX, tZ};
  out.displacement = detail::assemble(pr, rp, q, s);
  out.displacement.Pi_E = profit_change(p, out.displacement, s);
  out.displacement.T = transfer_change(p, out.displacement, s);
  out.sign_rule_applies = p.sigma_X > p.sigma_U && tZ > 0.0;
  out.emissions_fall = q.Z < 0.0;
  return out;
}

}  // namespace oligo
