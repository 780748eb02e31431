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

#include "oligo/model.hpp"

namespace oligo {

// All terms are money-metric welfare changes in million 2012$, evaluated at
// benchmark levels. r = p_KX / p_KE rescales gamma and t_Z when the two
// capital taxes differ; r = 1 gives the uniform-capital-tax forms.

namespace detail {

inline double capital_price_ratio(const DerivedParameters& p) { return p.p_KX / p.p_KE; }

inline double cross_weight(const DerivedParameters& p) {
  const auto& e = p.economy;
  return e.E_R * e.E_X / p.E();
}

inline ThreeTermWelfare three_term_with_ratio(const DerivedParameters& p, const Displacement& d, double r) {
  const auto& e = p.economy;
  ThreeTermWelfare w;
  w.oligopoly_output = (p.phi_X * e.p_EX + p.phi_R * e.p_ER - r * p.gamma) * p.E() * d[Hat::E];
  w.price_discrimination = (e.p_ER - e.p_EX) * cross_weight(p) * (d[Hat::E_R] - d[Hat::E_X]);
  w.externality = (r * e.t_Z - e.mu) * e.Z * d[Hat::Z];
  return w;
}

}  // namespace detail

inline TwoTermWelfare welfare_two_term(const DerivedParameters& p, const Displacement& d) {
  const auto& e = p.economy;
  const double r = detail::capital_price_ratio(p);
  TwoTermWelfare w;
  w.market_power = (e.p_EX - r * p.gamma) * e.E_X * d[Hat::E_X] + (e.p_ER - r * p.gamma) * e.E_R * d[Hat::E_R];
  w.externality = (r * e.t_Z - e.mu) * e.Z * d[Hat::Z];
  return w;
}

inline ThreeTermWelfare welfare_three_term(const DerivedParameters& p, const Displacement& d) {
  return detail::three_term_with_ratio(p, d, detail::capital_price_ratio(p));
}

/// Three-term split with capital taxes treated as uniform (gamma unscaled).
inline ThreeTermWelfare welfare_three_term_uniform(const DerivedParameters& p, const Displacement& d) {
  return detail::three_term_with_ratio(p, d, 1.0);
}

inline SixTermWelfare welfare_six_term(const DerivedParameters& p, const Displacement& d) {
  const auto& e = p.economy;
  const double cross = detail::cross_weight(p) * (d[Hat::E_R] - d[Hat::E_X]);
  const double wedge = (e.t_KE - e.t_KX) / p.p_KE;
  SixTermWelfare w;
  w.W[0] = (p.phi_X * e.p_EX + p.phi_R * e.p_ER - p.gamma) * p.E() * d[Hat::E];
  w.W[1] = wedge * p.gamma * p.E() * d[Hat::E];
  w.W[2] = (p.margin_R - p.margin_X) * cross;
  w.W[3] = (e.t_ER - e.t_EX + e.delta) * cross;
  w.W[4] = (e.t_Z - e.mu) * e.Z * d[Hat::Z];
  w.W[5] = -wedge * e.t_Z * e.Z * d[Hat::Z];
  return w;
}

inline WelfareDecomposition decompose_welfare(const DerivedParameters& p, const Displacement& d) {
  WelfareDecomposition w;
  w.two_term = welfare_two_term(p, d);
  w.three_term = welfare_three_term(p, d);
  w.six_term = welfare_six_term(p, d);
  w.total = w.three_term.total();
  return w;
}

enum class Theorem1Branch { None, ResidentialRises, ResidentialFallsLess };

inline std::string_view to_string(Theorem1Branch b) {
  switch (b) {
    case Theorem1Branch::None: return "none";
    case Theorem1Branch::ResidentialRises: return "E_R^ > 0";
    case Theorem1Branch::ResidentialFallsLess: return "E_X^ < E_R^ < 0";
  }
  return "?";
}

/// Sign conditions on the oligopoly-output term psi and the
/// price-discrimination term omega, both in their uniform-capital-tax form.
struct TheoremReport {
  double psi = 0.0;
  double omega = 0.0;
  bool t1_applicable = false;  // E^ < 0 and p_ER > p_EX
  Theorem1Branch t1_branch = Theorem1Branch::None;
  bool t1_holds = false;  // applicable, a branch fired, psi < 0 and omega > 0
  bool t2_necessary_holds = false;  // E_R^ > 0
  double t2_threshold = 0.0;
  bool t2_sufficient_holds = false;  // E_R^ > threshold > 0
};

inline TheoremReport check_theorems(const DerivedParameters& p, const Displacement& d) {
  const auto& e = p.economy;
  const ThreeTermWelfare u = welfare_three_term_uniform(p, d);
  TheoremReport t;
  t.psi = u.oligopoly_output;
  t.omega = u.price_discrimination;
  const double ER = d[Hat::E_R], EX = d[Hat::E_X];
  t.t1_applicable = d[Hat::E] < 0.0 && e.p_ER > e.p_EX;
  if (ER > 0.0)
    t.t1_branch = Theorem1Branch::ResidentialRises;
  else if (EX < ER && ER < 0.0)
    t.t1_branch = Theorem1Branch::ResidentialFallsLess;
  t.t1_holds = t.t1_applicable && t.t1_branch != Theorem1Branch::None && t.psi < 0.0 && t.omega > 0.0;
  t.t2_necessary_holds = ER > 0.0;
  t.t2_threshold = p.phi_X * (e.p_EX - p.gamma) / (p.phi_R * (e.p_ER - p.gamma)) * (-EX);
  t.t2_sufficient_holds = t.t1_applicable && t.t2_threshold > 0.0 && ER > t.t2_threshold;
  return t;
}

}  // namespace oligo
