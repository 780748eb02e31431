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

#include <cmath>

#include <gtest/gtest.h>

#include "oligo/benchmark_io.hpp"
#include "oligo/calibration.hpp"
#include "oligo/displacement.hpp"
#include "oligo/linear_system.hpp"
#include "oligo/policy.hpp"

namespace oligo {
namespace {

class DisplacementTest : public ::testing::Test {
 protected:
  void SetUp() override { p = calibrate(load_benchmark(default_benchmark_path())); }
  static double pct(double v) { return 100.0 * v; }
  DerivedParameters p;
  const PolicyShock case10{0.10, 0.0, 0.0, 0.0, 0.0};
  const PolicyShock case40{0.0, 0.0, 2.219101, -0.098887, 0.0};
};

TEST_F(DisplacementTest, PricesCaseOne) {
  const auto pr = solve_prices(p, case10);
  EXPECT_NEAR(pct(pr.gamma), 0.93, 0.02);
  EXPECT_NEAR(pct(pr.p_EX), 0.88, 0.02);
  EXPECT_NEAR(pct(pr.p_ER), 0.70, 0.02);
  EXPECT_NEAR(pct(pr.p_X), 0.04, 0.02);
  EXPECT_DOUBLE_EQ(pr.gamma, p.rho_Z * 0.10);
}

TEST_F(DisplacementTest, PricesTwoPart) {
  const auto pr = solve_prices(p, case40);
  EXPECT_NEAR(pct(pr.gamma), -8.97, 0.02);
  EXPECT_NEAR(pct(pr.p_EX), 2.02, 0.02);
  EXPECT_NEAR(pct(pr.p_ER), -6.75, 0.02);
}

TEST_F(DisplacementTest, RelativePrices) {
  const auto rp = relative_price_changes(p, case10);
  EXPECT_DOUBLE_EQ(rp.C, 0.10);
  EXPECT_NEAR(pct(rp.A), 0.66, 0.02);
  EXPECT_NEAR(pct(rp.B), 0.88, 0.02);
  EXPECT_NEAR(pct(relative_price_changes(p, case40).C), 9.89, 0.01);
  const auto z = relative_price_changes(p, PolicyShock{});
  EXPECT_EQ(z.A, 0.0);
  EXPECT_EQ(z.B, 0.0);
  EXPECT_EQ(z.C, 0.0);
}

TEST_F(DisplacementTest, QuantitiesCaseOne) {
  const auto d = solve_displacement(p, case10);
  EXPECT_NEAR(pct(d[Hat::Z]), -3.27, 0.02);
  EXPECT_NEAR(pct(d[Hat::E]), -0.55, 0.02);
  EXPECT_NEAR(pct(d[Hat::E_R]), -0.34, 0.02);
  EXPECT_NEAR(pct(d[Hat::E_X]), -0.59, 0.02);
  EXPECT_NEAR(pct(d[Hat::K_E]), -0.27, 0.02);
  EXPECT_NEAR(pct(d[Hat::K_X]), 0.01, 0.02);
  EXPECT_NEAR(pct(d[Hat::X]), -0.02, 0.02);
  EXPECT_NEAR(pct(*d.Pi_E), 0.31, 0.02);
  EXPECT_NEAR(pct(d.T), 0.16, 0.02);
}

TEST_F(DisplacementTest, QuantitiesTwoPart) {
  const auto d = solve_displacement(p, case40);
  EXPECT_NEAR(pct(d[Hat::E_R]), 3.33, 0.02);
  EXPECT_NEAR(pct(d[Hat::E_X]), -1.37, 0.02);
  EXPECT_NEAR(pct(d[Hat::Z]), -3.27, 0.02);
  EXPECT_NEAR(pct(*d.Pi_E), -0.47, 0.02);
}

TEST_F(DisplacementTest, ZeroShock) {
  const auto d = solve_displacement(p, PolicyShock{});
  for (double h : d.hats) EXPECT_EQ(h, 0.0);
  EXPECT_EQ(d.T, 0.0);
  EXPECT_EQ(*d.Pi_E, 0.0);
  const auto L = assemble_linear_system(p, PolicyShock{});
  EXPECT_EQ(L.rhs.cwiseAbs().maxCoeff(), 0.0);
}

TEST_F(DisplacementTest, StructuralIdentities) {
  for (const PolicyShock& s : {case10, case40, PolicyShock{0.2, -0.1, 0.3, 0.05, -0.07}}) {
    const auto d = solve_displacement(p, s);
    EXPECT_EQ(d[Hat::q_K], 0.0);
    EXPECT_EQ(d[Hat::p_KE], s.t_KE);
    EXPECT_EQ(d[Hat::p_KX], s.t_KX);
    EXPECT_NEAR(p.omega_E * d[Hat::K_E] + (1 - p.omega_E) * d[Hat::K_X], 0.0, 1e-12);
    EXPECT_NEAR(d[Hat::E], p.phi_X * d[Hat::E_X] + p.phi_R * d[Hat::E_R], 1e-12);
    EXPECT_NEAR(d[Hat::Z], d[Hat::E] - p.sigma_E * (1 - p.rho_Z) * d.C, 1e-12);
    // output from the production function, checked against the closed form
    EXPECT_NEAR(d[Hat::X], (1 - p.theta_EX) * d[Hat::K_X] + p.theta_EX * d[Hat::E_X], 1e-12);
  }
}

TEST_F(DisplacementTest, DenseRouteAgrees) {
  for (const PolicyShock& s : {case10, case40, PolicyShock{0.1, -0.283085, 0, 0, 0}}) {
    const auto a = solve_displacement(p, s);
    const auto b = solve_displacement_dense(p, s);
    for (std::size_t i = 0; i < kHatCount; ++i)
      EXPECT_NEAR(a.hats[i], b.hats[i], 1e-10 * std::max(1e-3, std::abs(a.hats[i])));
    EXPECT_NEAR(a.T, b.T, 1e-10);
  }
  EXPECT_NEAR(pct(solve_displacement_dense(p, PolicyShock{0.1, -0.283085, 0, 0, 0})[Hat::p_ER]), -2.22, 0.02);
}

TEST_F(DisplacementTest, LinearSystemLabels) {
  const auto L = assemble_linear_system(p, case10);
  for (const auto& l : L.row_labels) EXPECT_FALSE(l.empty());
  EXPECT_GT(std::abs(L.M.determinant()), 0.0);
}

TEST_F(DisplacementTest, LinearSystemIsIndependentOfDelta) {
  auto q = p;
  q.economy.delta += 1.0;
  const auto a = assemble_linear_system(p, case40);
  const auto b = assemble_linear_system(q, case40);
  EXPECT_EQ(a.M, b.M);
  EXPECT_EQ(a.rhs, b.rhs);
  const auto da = solve_displacement(p, case40);
  const auto db = solve_displacement(q, case40);
  EXPECT_EQ(da.hats, db.hats);
}

TEST_F(DisplacementTest, SingularSystemReported) {
  LinearSystem L;
  try {
    solve_linear_system(L);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularSystem);
  }
}

TEST_F(DisplacementTest, EmissionTaxSpecialCase) {
  const auto sc = solve_special_case_emission_tax(p, case10);
  const auto g = solve_displacement(p, case10);
  for (std::size_t i = 0; i < kHatCount; ++i) EXPECT_NEAR(sc.displacement.hats[i], g.hats[i], 1e-12);
  EXPECT_NEAR(pct(sc.displacement[Hat::gamma]), 0.93, 0.01);
  EXPECT_TRUE(sc.sign_rule_applies);
  EXPECT_TRUE(sc.emissions_fall);
  const auto zero = solve_special_case_emission_tax(p, PolicyShock{});
  for (double h : zero.displacement.hats) EXPECT_EQ(h, 0.0);
  try {
    solve_special_case_emission_tax(p, case40);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidSpecialCase);
  }
}

TEST_F(DisplacementTest, EmissionTaxMonotonicity) {
  const auto d = solve_displacement(p, case10);
  EXPECT_GT(d[Hat::gamma], 0.0);
  EXPECT_GT(d[Hat::p_EX], 0.0);
  EXPECT_GT(d[Hat::p_ER], 0.0);
  EXPECT_GT(d[Hat::p_X], 0.0);
  EXPECT_LT(d[Hat::p_X], d[Hat::p_EX]);
}

TEST_F(DisplacementTest, PassThroughOverShifts) {
  EXPECT_GT(p.n.pass_through(p.eps_EX), 1.0);
  EXPECT_GT(p.n.pass_through(p.eps_ER), 1.0);
}

TEST_F(DisplacementTest, ProfitUndefinedUnderPerfectCompetition) {
  CalibrationOptions o;
  o.mode = MarketMode::ForcePerfectCompetition;
  const auto q = calibrate(load_benchmark(default_benchmark_path()), o);
  EXPECT_FALSE(solve_displacement(q, case10).Pi_E.has_value());
}

TEST_F(DisplacementTest, TransferNeedsABase) {
  auto q = p;
  q.T = 0.0;
  const auto d = solve_displacement(p, case10);
  try {
    transfer_change(q, d, case10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroTransferBase);
  }
}

TEST_F(DisplacementTest, TransferMatchesShareForm) {
  // theta^T-weighted form with (p_K / t_K) capital factors
  const PolicyShock s{0.1, -0.2, 0.3, 0.04, -0.05};
  const auto d = solve_displacement(p, s);
  const auto& th = *p.theta_T;
  const auto& e = p.economy;
  const double share_form = th.EX * (s.t_EX + d[Hat::E_X]) + th.ER * (s.t_ER + d[Hat::E_R]) +
                            th.KE * (d[Hat::K_E] + p.p_KE / e.t_KE * s.t_KE) +
                            th.KX * (d[Hat::K_X] + p.p_KX / e.t_KX * s.t_KX) + th.Z * (s.t_Z + d[Hat::Z]);
  EXPECT_NEAR(d.T, share_form, 1e-14);
}

}  // namespace
}  // namespace oligo
