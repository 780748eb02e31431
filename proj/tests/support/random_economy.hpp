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

#include <random>
#include <string>

#include "oligo/calibration.hpp"
#include "oligo/errors.hpp"
#include "oligo/model.hpp"

namespace oligo::testing {

inline std::string golden_dir() { return OLIGO_GOLDEN_DIR; }

/// Draws benchmark economies that calibrate cleanly: positive margins,
/// n >= 1, and positive substitution elasticities. Roughly one draw in ten
/// is recalibrated as monopoly and one in ten as perfect competition.
class RandomEconomy {
 public:
  explicit RandomEconomy(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }

  BenchmarkEconomy draw_benchmark() {
    for (;;) {
      BenchmarkEconomy b;
      b.E_R = uniform(2000, 30000);
      b.E_X = uniform(10000, 100000);
      b.p_EX = uniform(5, 30);
      b.p_ER = b.p_EX * uniform(1.05, 2.0);
      b.t_ER = b.p_ER * uniform(0.0, 0.15);
      b.t_EX = b.p_EX * uniform(0.005, 0.10);
      const double gamma = b.p_EX * uniform(0.5, 0.9);
      b.gamma = gamma;
      b.delta = b.p_ER * uniform(0.0, 0.2);
      const double E = b.E_R + b.E_X;
      const double rho_Z = uniform(0.01, 0.5);
      b.t_Z = uniform(5, 60);
      b.Z = rho_Z * gamma * E / b.t_Z;
      b.mu = uniform(10, 200);
      const double theta_ER = uniform(0.005, 0.2);
      b.I = b.p_ER * b.E_R / theta_ER / kMillionPerBillion;
      b.t_KE = uniform(0.0, 0.4);
      b.t_KX = uniform(0.0, 0.4);
      b.sigma_E = uniform(0.05, 2.0);
      b.eps_ER = uniform(-1.5, -0.1);
      try {
        calibrate(b);
        return b;
      } catch (const Error&) {
      }
    }
  }

  DerivedParameters draw_params() {
    for (;;) {
      const BenchmarkEconomy b = draw_benchmark();
      const double u = uniform(0, 1);
      CalibrationOptions opt;
      if (u < 0.1) opt.mode = MarketMode::ForceMonopoly;
      else if (u < 0.2) opt.mode = MarketMode::ForcePerfectCompetition;
      try {
        return calibrate(b, opt);
      } catch (const Error&) {
      }
    }
  }

  PolicyShock draw_shock(const DerivedParameters& p) {
    PolicyShock s;
    s.t_Z = uniform(-0.5, 0.5);
    s.t_ER = p.economy.t_ER > 0 ? uniform(-0.5, 0.5) : 0.0;
    s.t_EX = p.economy.t_EX > 0 ? uniform(-0.5, 0.5) : 0.0;
    s.t_KE = uniform(-0.2, 0.2);
    s.t_KX = uniform(-0.2, 0.2);
    return s;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oligo::testing
