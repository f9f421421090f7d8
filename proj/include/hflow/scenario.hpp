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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hflow/ambient.hpp"
#include "hflow/derivatives.hpp"
#include "hflow/flow.hpp"
#include "hflow/surface.hpp"

namespace hflow {

enum class InitialMap { identity_graph, shear_graph, normal_sinusoid, fourier_perturbation };
enum class RhoMode { pullback_omega2, constant };

std::string_view initial_map_name(InitialMap m);
InitialMap parse_initial_map(std::string_view name);
std::string_view rho_mode_name(RhoMode m);
RhoMode parse_rho_mode(std::string_view name);

/// One term a cos(2 pi (k1 x1 + k2 x2)) + b sin(2 pi (k1 x1 + k2 x2)) added to component `component`.
struct FourierTerm {
    int component = 0;
    int k1 = 0;
    int k2 = 0;
    double cos_amp = 0.0;
    double sin_amp = 0.0;

    friend bool operator==(const FourierTerm&, const FourierTerm&) = default;
};

struct ScenarioConfig {
    std::string name = "scenario";
    Mat4 lattice = identity4();
    InitialMap initial_map = InitialMap::identity_graph;
    double epsilon1 = 0.0;    ///< shear_graph first shear amplitude
    double epsilon2 = 0.0;    ///< shear_graph second shear amplitude
    int wavenumber = 1;       ///< shear_graph and normal_sinusoid
    double epsilon = 0.0;     ///< normal_sinusoid amplitude
    /// fourier_perturbation: explicit terms; when empty, terms are drawn from `seed`
    /// with |k1|, |k2| <= fourier_max_mode and amplitudes fourier_amplitude / (1 + |k|^2).
    std::vector<FourierTerm> fourier_terms;
    int fourier_max_mode = 2;
    double fourier_amplitude = 0.01;
    RhoMode rho_mode = RhoMode::pullback_omega2;
    double rho_constant = 1.0;
    FlowKind flow_kind = FlowKind::hflow_gradient;
    Scheme scheme = Scheme::spectral;
    std::size_t grid_n1 = 64;
    std::size_t grid_n2 = 64;
    IntegratorConfig integrator;
    std::size_t diagnostics_cadence = 10;
    std::size_t snapshot_cadence = 100;
    std::string output_dir = ".";
    std::uint64_t seed = 0;

    /// Throws ConfigError naming the offending key.
    void validate() const;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown or repeated keys are errors.
/// Syntax errors carry "line N:". The result is validated.
ScenarioConfig parse_scenario(std::string_view text);

ScenarioConfig load_scenario(const std::string& path);

/// Every key, one per line, reals with 17 significant digits.
std::string serialize_scenario(const ScenarioConfig& config);

/// The winding rows used for graph modes: rows (1,1,0,0) and (0,0,1,1).
Winding graph_winding();

/// Builds the t = 0 state. Graph modes realise (x1, phi^1(x), x2, phi^2(x)) with phi the
/// composed shears; rho_12 is sampled from f^* omega_2 or set constant. Throws ConfigError
/// when f^* omega_2 is not positive, or (graph modes with pullback rho) f^* omega_3 is not
/// zero within 1e-12.
SurfaceState build_initial_surface(const ScenarioConfig& config, const AmbientSpace& ambient);

AmbientSpace scenario_ambient(const ScenarioConfig& config);

RunSettings run_settings(const ScenarioConfig& config);

/// Builds ambient space and initial state, then integrates.
FlowTrajectory run_flow(const ScenarioConfig& config);

}  // namespace hflow
