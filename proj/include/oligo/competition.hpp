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
#include <string>

#include "oligo/errors.hpp"

namespace oligo {

/// Number of symmetric Cournot firms, read as a continuous competition index.
/// Values run from 1 (monopoly) to +infinity (perfect competition). The index
/// is never rounded to an integer.
class CompetitionIndex {
 public:
  constexpr CompetitionIndex() = default;
  explicit CompetitionIndex(double n) : n_(n) {
    if (std::isnan(n) || n <= 0.0) fail(ErrorKind::InvalidInput, "competition index must be positive");
  }

  static CompetitionIndex monopoly() { return CompetitionIndex(1.0); }
  static CompetitionIndex perfect_competition() {
    return CompetitionIndex(std::numeric_limits<double>::infinity());
  }

  double value() const noexcept { return n_; }
  bool is_infinite() const noexcept { return std::isinf(n_); }

  /// Oligopoly markup multiplier n*eps / (1 + n*eps) applied to cost changes.
  /// Equals 1 exactly at n = infinity; exceeds 1 whenever eps < -1/n.
  double pass_through(double eps) const {
    if (is_infinite()) return 1.0;
    const double n_eps = n_ * eps;
    if (1.0 + n_eps == 0.0) fail(ErrorKind::PassThroughSingularity, "1 + n*eps = 0");
    return n_eps / (1.0 + n_eps);
  }

  /// Pricing-condition requirement eps < -1/n; vacuous when n is infinite.
  bool admits_elasticity(double eps) const noexcept {
    if (is_infinite()) return eps < 0.0;
    return eps < -1.0 / n_;
  }

  std::string to_string() const {
    if (is_infinite()) return "inf";
    return std::to_string(n_);
  }

 private:
  double n_ = 1.0;
};

}  // namespace oligo
