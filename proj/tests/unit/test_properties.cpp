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
#include "oligo/linear_system.hpp"
#include "oligo/welfare.hpp"
#include "support/random_economy.hpp"

namespace oligo {
namespace {

void expect_close(const Displacement& a, const Displacement& b, double rel, double abs) {
  for (std::size_t i = 0; i < kHatCount; ++i) {
    const double scale = std::max(std::abs(a.hats[i]), std::abs(b.hats[i]));
    EXPECT_LE(std::abs(a.hats[i] - b.hats[i]), rel * scale + abs) << to_string(kHats[i]);
  }
}

TEST(PropertyTest, DenseAndClosedFormAgree) {
  testing::RandomEconomy rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const auto p = rng.draw_params();
    const auto s = rng.draw_shock(p);
    expect_close(solve_displacement(p, s), solve_displacement_dense(p, s), 1e-10, 1e-15);
  }
}

TEST(PropertyTest, Superposition) {
  testing::RandomEconomy rng(99);
  for (int i = 0; i < 300; ++i) {
    const auto p = rng.draw_params();
    const auto s1 = rng.draw_shock(p);
    const auto s2 = rng.draw_shock(p);
    const double c = rng.uniform(-3, 3);
    const auto d1 = solve_displacement(p, s1);
    const auto d2 = solve_displacement(p, s2);
    const auto sum = solve_displacement(p, s1 + s2);
    const auto scaled = solve_displacement(p, c * s1);
    for (std::size_t k = 0; k < kHatCount; ++k) {
      EXPECT_NEAR(sum.hats[k], d1.hats[k] + d2.hats[k], 1e-12);
      EXPECT_NEAR(scaled.hats[k], c * d1.hats[k], 1e-12);
    }
    EXPECT_NEAR(sum.T, d1.T + d2.T, 1e-12);
    if (d1.Pi_E) EXPECT_NEAR(*sum.Pi_E, *d1.Pi_E + *d2.Pi_E, 1e-12 * std::max(1.0, std::abs(*sum.Pi_E)));
  }
}

TEST(PropertyTest, UnitScalingInvariance) {
  auto b = load_benchmark(default_benchmark_path());
  const auto p = calibrate(b);
  // rescaling every quantity leaves all hats unchanged
  auto big = b;
  const double k = 7.0;
  big.E_R *= k;
  big.E_X *= k;
  big.Z *= k;
  big.I *= k;
  const auto q = calibrate(big);
  const PolicyShock s{0.1, -0.2, 0.3, 0.02, -0.01};
  expect_close(solve_displacement(p, s), solve_displacement(q, s), 1e-12, 1e-14);
  EXPECT_NEAR(decompose_welfare(q, solve_displacement(q, s)).total,
              k * decompose_welfare(p, solve_displacement(p, s)).total, 1e-9 * std::abs(k * 3000));
}

TEST(PropertyTest, TheoremOneHoldsWheneverApplicable) {
  testing::RandomEconomy rng(7);
  int fired = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto p = rng.draw_params();
    const auto t = check_theorems(p, solve_displacement(p, rng.draw_shock(p)));
    if (!t.t1_applicable || t.t1_branch == Theorem1Branch::None) continue;
    ++fired;
    EXPECT_LT(t.psi, 0.0);
    EXPECT_GT(t.omega, 0.0);
    if (t.t2_sufficient_holds) EXPECT_GT(t.psi + t.omega, 0.0);
  }
  EXPECT_GT(fired, 50);
}

TEST(PropertyTest, SpecialCaseMatchesGeneral) {
  testing::RandomEconomy rng(31);
  for (int i = 0; i < 300; ++i) {
    const auto p = rng.draw_params();
    const PolicyShock s{rng.uniform(-0.5, 0.5), 0, 0, 0, 0};
    expect_close(solve_special_case_emission_tax(p, s).displacement, solve_displacement(p, s), 0.0, 1e-12);
  }
}

}  // namespace
}  // namespace oligo
