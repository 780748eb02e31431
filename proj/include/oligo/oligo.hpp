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

#include "oligo/benchmark_io.hpp"
#include "oligo/calibration.hpp"
#include "oligo/competition.hpp"
#include "oligo/config.hpp"
#include "oligo/displacement.hpp"
#include "oligo/errors.hpp"
#include "oligo/golden.hpp"
#include "oligo/linear_system.hpp"
#include "oligo/model.hpp"
#include "oligo/nonlinear_oracle.hpp"
#include "oligo/policy.hpp"
#include "oligo/report.hpp"
#include "oligo/welfare.hpp"
