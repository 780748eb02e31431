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

#include <stdexcept>
#include <string>
#include <string_view>

namespace oligo {

enum class ErrorKind {
  InvalidInput,
  NonpositiveQuantity,
  NonpositiveMargin,
  ElasticityBoundViolation,
  IncomeIdentityViolation,
  NonpositiveIndustrialRevenue,
  CompetitionIndexBelowOne,
  PerfectCompetitionLimit,
  NonpositiveSigma,
  NegativeCapital,
  ZeroTransferBase,
  PassThroughSingularity,
  InvalidShock,
  InvalidSpecialCase,
  SingularSystem,
  SingularConstraintMap,
  IllPosedSpec,
  CalibrationResidual,
  NoConvergence,
  NonpositiveState,
  ShapeMismatch,
  ConfigError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NonpositiveQuantity: return "NonpositiveQuantity";
    case ErrorKind::NonpositiveMargin: return "NonpositiveMargin";
    case ErrorKind::ElasticityBoundViolation: return "ElasticityBoundViolation";
    case ErrorKind::IncomeIdentityViolation: return "IncomeIdentityViolation";
    case ErrorKind::NonpositiveIndustrialRevenue: return "NonpositiveIndustrialRevenue";
    case ErrorKind::CompetitionIndexBelowOne: return "CompetitionIndexBelowOne";
    case ErrorKind::PerfectCompetitionLimit: return "PerfectCompetitionLimit";
    case ErrorKind::NonpositiveSigma: return "NonpositiveSigma";
    case ErrorKind::NegativeCapital: return "NegativeCapital";
    case ErrorKind::ZeroTransferBase: return "ZeroTransferBase";
    case ErrorKind::PassThroughSingularity: return "PassThroughSingularity";
    case ErrorKind::InvalidShock: return "InvalidShock";
    case ErrorKind::InvalidSpecialCase: return "InvalidSpecialCase";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::SingularConstraintMap: return "SingularConstraintMap";
    case ErrorKind::IllPosedSpec: return "IllPosedSpec";
    case ErrorKind::CalibrationResidual: return "CalibrationResidual";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NonpositiveState: return "NonpositiveState";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace oligo
