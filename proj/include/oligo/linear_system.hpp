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
#include <string>

#include <Eigen/Dense>

#include "oligo/displacement.hpp"
#include "oligo/errors.hpp"
#include "oligo/model.hpp"

namespace oligo {

using Matrix14 = Eigen::Matrix<double, 14, 14>;
using Vector14 = Eigen::Matrix<double, 14, 1>;

/// The fourteen log-linear equilibrium conditions as a dense system. Columns
/// follow kHats; rows are the conditions in their natural order.
struct LinearSystem {
  Matrix14 M = Matrix14::Zero();
  Vector14 rhs = Vector14::Zero();
  std::array<std::string, 14> row_labels;
};

inline LinearSystem assemble_linear_system(const DerivedParameters& p, const PolicyShock& s) {
  const auto& e = p.economy;
  LinearSystem L;
  auto c = [](Hat h) { return static_cast<int>(h); };
  auto& M = L.M;
  auto& b = L.rhs;
  const double th = p.theta_EX;
  const double fX = p.n.pass_through(p.eps_EX);
  const double fR = p.n.pass_through(p.eps_ER);

  int r = 0;
  L.row_labels[r] = "capital constraint";
  M(r, c(Hat::K_E)) = p.omega_E;
  M(r, c(Hat::K_X)) = 1.0 - p.omega_E;

  L.row_labels[++r] = "utility substitution";
  M(r, c(Hat::X)) = 1.0;
  M(r, c(Hat::E_R)) = -1.0;
  M(r, c(Hat::p_ER)) = -p.sigma_U;
  M(r, c(Hat::p_X)) = p.sigma_U;

  L.row_labels[++r] = "industrial substitution";
  M(r, c(Hat::E_X)) = 1.0;
  M(r, c(Hat::K_X)) = -1.0;
  M(r, c(Hat::p_KX)) = -p.sigma_X;
  M(r, c(Hat::p_EX)) = p.sigma_X;

  L.row_labels[++r] = "industrial production";
  M(r, c(Hat::X)) = 1.0;
  M(r, c(Hat::K_X)) = -(1.0 - th);
  M(r, c(Hat::E_X)) = -th;

  L.row_labels[++r] = "industrial zero profit";
  M(r, c(Hat::X)) = 1.0;
  M(r, c(Hat::p_X)) = 1.0;
  M(r, c(Hat::K_X)) = -(1.0 - th);
  M(r, c(Hat::p_KX)) = -(1.0 - th);
  M(r, c(Hat::E_X)) = -th;
  M(r, c(Hat::p_EX)) = -th;

  L.row_labels[++r] = "energy market clearing";
  M(r, c(Hat::E)) = 1.0;
  M(r, c(Hat::E_X)) = -p.phi_X;
  M(r, c(Hat::E_R)) = -p.phi_R;

  L.row_labels[++r] = "energy input substitution";
  M(r, c(Hat::Z)) = 1.0;
  M(r, c(Hat::K_E)) = -1.0;
  M(r, c(Hat::p_KE)) = -p.sigma_E;
  b(r) = -p.sigma_E * s.t_Z;

  L.row_labels[++r] = "industrial energy pricing";
  M(r, c(Hat::p_EX)) = 1.0;
  M(r, c(Hat::gamma)) = -fX * p.gamma / e.p_EX;
  b(r) = fX * e.t_EX / e.p_EX * s.t_EX;

  L.row_labels[++r] = "residential energy pricing";
  M(r, c(Hat::p_ER)) = 1.0;
  M(r, c(Hat::gamma)) = -fR * p.gamma / e.p_ER;
  b(r) = fR * e.t_ER / e.p_ER * s.t_ER;

  L.row_labels[++r] = "energy production";
  M(r, c(Hat::E)) = 1.0;
  M(r, c(Hat::K_E)) = -p.rho_K;
  M(r, c(Hat::Z)) = -p.rho_Z;

  L.row_labels[++r] = "energy cost";
  M(r, c(Hat::gamma)) = 1.0;
  M(r, c(Hat::E)) = 1.0;
  M(r, c(Hat::p_KE)) = -p.rho_K;
  M(r, c(Hat::K_E)) = -p.rho_K;
  M(r, c(Hat::Z)) = -p.rho_Z;
  b(r) = p.rho_Z * s.t_Z;

  L.row_labels[++r] = "energy capital price";
  M(r, c(Hat::p_KE)) = 1.0;
  M(r, c(Hat::q_K)) = -p.beta_E;
  b(r) = s.t_KE;

  L.row_labels[++r] = "industrial capital price";
  M(r, c(Hat::p_KX)) = 1.0;
  M(r, c(Hat::q_K)) = -p.beta_X;
  b(r) = s.t_KX;

  L.row_labels[++r] = "numeraire";
  M(r, c(Hat::q_K)) = 1.0;
  return L;
}

/// Dense partial-pivot LU solve of the assembled system.
inline std::array<double, kHatCount> solve_linear_system(const LinearSystem& L) {
  Eigen::PartialPivLU<Matrix14> lu(L.M);
  const double det = lu.determinant();
  if (!std::isfinite(det) || std::abs(det) < 1e-300)
    fail(ErrorKind::SingularSystem, "displacement system is singular");
  const Vector14 x = lu.solve(L.rhs);
  std::array<double, kHatCount> out{};
  for (std::size_t i = 0; i < kHatCount; ++i) out[i] = x(static_cast<int>(i));
  return out;
}

/// Second solution route: full Displacement from the dense solve.
inline Displacement solve_displacement_dense(const DerivedParameters& p, const PolicyShock& s) {
  check_shock(p.economy, s);
  Displacement d;
  d.hats = solve_linear_system(assemble_linear_system(p, s));
  d.A = d[Hat::p_ER] - d[Hat::p_X];
  d.B = d[Hat::p_EX] - s.t_KX;
  d.C = s.t_Z - s.t_KE;
  d.Pi_E = profit_change(p, d, s);
  d.T = transfer_change(p, d, s);
  return d;
}

}  // namespace oligo
