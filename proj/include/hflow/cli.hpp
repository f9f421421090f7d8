// Copyright 2026 The hflow Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "hflow/scenario.hpp"

namespace hflow {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

struct CheckLine {
    std::string name;
    double value = 0.0;
    double gate = 0.0;
    bool gated = true;  ///< ungated lines are reported for information only

    bool pass() const { return !gated || value <= gate; }
};

/// The invariant and residual suite on the t = 0 state of a scenario.
std::vector<CheckLine> initial_state_checks(const ScenarioConfig& config);

/// Subcommands run, check and compare; returns the process exit status.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hflow
