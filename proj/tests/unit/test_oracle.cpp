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
#include "oligo/nonlinear_oracle.hpp"
#include "oligo/policy.hpp"

namespace oligo {
namespace {

class OracleTest : public ::testing::Test {
 protected:
  void SetUp() override {
    p = calibrate(load_benchmark(default_benchmark_path()));
    pe = calibrate_parametric(p);
  }
  DerivedParameters p;
  ParametricEconomy pe;
};

TEST(CesCostTest, CalibratedAndHomogeneous) {
  const CesCost c({0.3, 0.7}, {2.0, 5.0}, 4.0, 0.5);
  EXPECT_NEAR(c.cost({2.0, 5.0}), 4.0, 1e-12);
  EXPECT_NEAR(c.cost({4.0, 10.0}), 8.0, 1e-12);
  // Shephard: cost shares at the benchmark
  EXPECT_NEAR(2.0 * c.demand({2.0, 5.0}, 0) / 4.0, 0.3, 1e-12);
  EXPECT_NEAR(5.0 * c.demand({2.0, 5.0}, 1) / 4.0, 0.7, 1e-12);
  const double h = 1e-6;
  EXPECT_NEAR((c.cost({2.0 + h, 5.0}) - c.cost({2.0 - h, 5.0})) / (2 * h), c.demand({2.0, 5.0}, 0), 1e-8);
}

TEST(CesCostTest, CobbDouglasLimit) {
  const CesCost cd({0.3, 0.7}, {2.0, 5.0}, 4.0, 1.0);
  const CesCost near({0.3, 0.7}, {2.0, 5.0}, 4.0, 1.0 + 1e-7);
  EXPECT_TRUE(cd.cobb_douglas());
  for (const auto& w : {std::array<double, 2>{3.0, 4.0}, std::array<double, 2>{1.0, 9.0}}) {
    EXPECT_NEAR(cd.cost(w), near.cost(w), 1e-5);
    EXPECT_NEAR(cd.demand(w, 1), near.demand(w, 1), 1e-5);
  }
  EXPECT_NEAR(cd.cost({2.0, 5.0}), 4.0, 1e-12);
}

TEST_F(OracleTest, BenchmarkIsFixedPoint) {
  EXPECT_LT(oracle_residuals(pe, pe.benchmark_log, pe.benchmark_taxes).cwiseAbs().maxCoeff(), 1e-10);
  const auto s = solve_equilibrium(pe, shocked_taxes(p, PolicyShock{}, 0.0));
  EXPECT_LT((s.log_state - pe.benchmark_log).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(s.I, p.economy.income, 1e-8 * p.economy.income);
  EXPECT_NEAR(s.Pi_E, p.Pi_E, 1e-8 * p.economy.income);
  EXPECT_NEAR(s.T, p.T, 1e-8 * p.economy.income);
}

TEST_F(OracleTest, WalrasLawHoldsOffBenchmark) {
  for (const PolicyShock& sh : {PolicyShock{0.3, 0, 0, 0, 0}, PolicyShock{0, -0.4, 1.5, -0.1, 0.05}}) {
    const auto s = solve_equilibrium(pe, shocked_taxes(p, sh, 1.0));
    EXPECT_LT(s.residual_norm, 1e-10);
    EXPECT_LT(std::abs(s.budget_residual), 1e-9);
  }
}

TEST_F(OracleTest, SignPatternOfEmissionTax) {
  const auto s = solve_equilibrium(pe, shocked_taxes(p, emission_tax_shock(), 1.0));
  const auto& e = p.economy;
  EXPECT_GT(s.gamma, p.gamma);
  EXPECT_GT(s.p_EX, e.p_EX);
  EXPECT_GT(s.p_ER, e.p_ER);
  EXPECT_LT(s.Z, e.Z);
  EXPECT_LT(s.E, p.E());
  EXPECT_LT(s.E_X, e.E_X);
  EXPECT_LT(s.E_R, e.E_R);
  const auto d = solve_displacement(p, emission_tax_shock());
  EXPECT_NEAR(std::log(s.Z / e.Z), d[Hat::Z], 0.01);
}

TEST_F(OracleTest, PerfectCompetitionHasNoProfit) {
  CalibrationOptions o;
  o.mode = MarketMode::ForcePerfectCompetition;
  const auto q = calibrate(load_benchmark(default_benchmark_path()), o);
  const auto qe = calibrate_parametric(q);
  const auto s = solve_equilibrium(qe, shocked_taxes(q, PolicyShock{0.2, 0.1, -0.1, 0.0, 0.0}, 1.0));
  EXPECT_NEAR(s.Pi_E, 0.0, 1e-8 * q.economy.income);
}

TEST_F(OracleTest, FirstOrderAccuracyOnCases) {
  const auto base = Baseline::from(load_benchmark(default_benchmark_path()));
  for (const char* c : {"1.0", "2.0", "3.0", "4.0"}) {
    const auto r = resolve_scenario(base, *builtin_scenario(c));
    const auto rep = first_order_accuracy(pe, p, r.shock);
    ASSERT_EQ(rep.rows.size(), kHatCount);
    for (const auto& row : rep.rows) EXPECT_TRUE(row.pass) << c << " " << to_string(row.component) << " " << row.ratio;
    EXPECT_DOUBLE_EQ(rep.direction.max_abs(), 1.0);
  }
}

TEST_F(OracleTest, ZeroShockTriviallyAccurate) {
  EXPECT_TRUE(first_order_accuracy(pe, p, PolicyShock{}).all_pass());
}

TEST_F(OracleTest, StateDependentElasticitiesDepartFromLinearization) {
  // Elasticities that move with expenditure shares add first-order terms the
  // displacement system does not carry; the discrepancy no longer shrinks
  // quadratically for the price block.
  const auto se = calibrate_parametric(p, ElasticityRule::StateDependent);
  const auto rep = first_order_accuracy(se, p, emission_tax_shock());
  EXPECT_FALSE(rep.all_pass());
}

TEST_F(OracleTest, InconsistentBenchmarkRejected) {
  auto q = p;
  q.T *= 1.5;
  try {
    calibrate_parametric(q);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CalibrationResidual);
  }
}

}  // namespace
}  // namespace oligo
