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

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hflow/ambient.hpp"
#include "hflow/derivatives.hpp"
#include "hflow/diagnostics.hpp"
#include "hflow/simd/kernels.hpp"
#include "hflow/surface.hpp"

namespace hflow {

enum class FlowKind { hflow_gradient, hflow_hamiltonian, mcf };

std::string_view flow_kind_name(FlowKind k);
FlowKind parse_flow_kind(std::string_view name);

struct VelocityField {
    FlowKind kind = FlowKind::hflow_gradient;
    VectorField v;
};

/// v = lambda g^{ij} (D_j lambda) d_i f + lambda^2 H. Needs kCurvature | kLambdaGradient.
VelocityField velocity_hflow_gradient(const GeometryFields& geometry,
                                      const simd::KernelTable& k = simd::active_kernels());

/// v = I f_*(xi_1) + J f_*(xi_2) + K f_*(xi_3). Needs kHamiltonian.
VelocityField velocity_hflow_hamiltonian(const GeometryFields& geometry, const AmbientSpace& ambient,
                                         const simd::KernelTable& k = simd::active_kernels());

/// v = H. Needs kCurvature.
VelocityField velocity_mcf(const GeometryFields& geometry);

/// Geometry content required to evaluate the velocity of a flow kind.
unsigned velocity_needs(FlowKind kind);

VelocityField velocity(FlowKind kind, const GeometryFields& geometry, const AmbientSpace& ambient,
                       const simd::KernelTable& k = simd::active_kernels());

enum class Method { euler, rk4 };
enum class DtMode { fixed, cfl };

std::string_view method_name(Method m);
Method parse_method(std::string_view name);
std::string_view dt_mode_name(DtMode m);
DtMode parse_dt_mode(std::string_view name);

struct IntegratorConfig {
    Method method = Method::rk4;
    DtMode dt_mode = DtMode::cfl;
    double dt = 1e-5;           ///< used when dt_mode == fixed
    double cfl_safety = 0.2;    ///< used when dt_mode == cfl
    double t_end = 0.1;
    std::size_t max_steps = 10'000'000;
    double stop_on_blowup = 1e6;      ///< sup |A|^2 threshold
    double stop_on_degeneracy = 1e-8; ///< det g threshold

    /// Throws ConfigError naming the offending field.
    void validate() const;

    friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

/// dt = safety min(h1, h2)^2 / (4 max(max_lambda^2, 1)).
double cfl_dt(double max_lambda, const Grid& grid, double safety);
double cfl_dt(const GeometryFields& geometry, double safety);

struct StepContext {
    const AmbientSpace& ambient;
    const DerivativeOperator& ops;
    FlowKind kind = FlowKind::hflow_gradient;
    double blowup_threshold = 1e6;
    double degeneracy_threshold = kDefaultDegeneracyThreshold;
    const simd::KernelTable& kernels = simd::active_kernels();
};

/// Geometry computed for every stage: the velocity needs plus curvature for the blowup check.
GeometryFields stage_geometry(const SurfaceState& state, const StepContext& ctx);

/// One explicit step. Winding and rho are carried over; time advances by dt.
/// Throws ImmersionDegenerate or BlowupDetected from any stage.
SurfaceState step(const SurfaceState& state, const StepContext& ctx, double dt, Method method);

/// Same, reusing already computed stage-one geometry of state.
SurfaceState step(const SurfaceState& state, const GeometryFields& geometry, const StepContext& ctx,
                  double dt, Method method);

enum class RunStatus { completed, blowup, degenerate, step_limit };

std::string_view run_status_name(RunStatus s);

struct RunSettings {
    FlowKind kind = FlowKind::hflow_gradient;
    IntegratorConfig integrator;
    std::size_t diagnostics_cadence = 10;
    std::size_t snapshot_cadence = 100;  ///< 0 disables snapshots
    bool retain_snapshots = true;
    /// Called for every snapshot (step index, state, its geometry).
    std::function<void(std::size_t, const SurfaceState&, const GeometryFields&)> on_snapshot;
    /// Called after each diagnostics record.
    std::function<void(std::size_t, const DiagnosticsRecord&)> on_record;
};

struct FlowTrajectory {
    std::vector<DiagnosticsRecord> records;
    std::vector<std::size_t> record_steps;
    std::vector<SurfaceState> snapshots;
    std::vector<std::size_t> snapshot_steps;
    RunStatus status = RunStatus::completed;
    std::size_t steps_taken = 0;
    std::size_t terminal_step = 0;  ///< step whose evaluation ended the run
    std::string message;
    SurfaceState final_state;
};

/// Integrates from the initial state. The first and last accepted states are always recorded.
/// Throws ConfigError for invalid settings or state; runtime stops become a status.
FlowTrajectory run_flow(const SurfaceState& initial, const AmbientSpace& ambient, const RunSettings& settings);

}  // namespace hflow
