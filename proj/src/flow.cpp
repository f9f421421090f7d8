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

#include "hflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hflow/error.hpp"

namespace hflow {

std::string_view flow_kind_name(FlowKind k) {
    switch (k) {
        case FlowKind::hflow_gradient: return "hflow_gradient";
        case FlowKind::hflow_hamiltonian: return "hflow_hamiltonian";
        case FlowKind::mcf: return "mcf";
    }
    return "?";
}

FlowKind parse_flow_kind(std::string_view name) {
    for (FlowKind k : {FlowKind::hflow_gradient, FlowKind::hflow_hamiltonian, FlowKind::mcf})
        if (flow_kind_name(k) == name) return k;
    throw ConfigError("unknown flow kind '" + std::string(name) + "'");
}

std::string_view method_name(Method m) { return m == Method::euler ? "euler" : "rk4"; }

Method parse_method(std::string_view name) {
    if (name == "euler") return Method::euler;
    if (name == "rk4") return Method::rk4;
    throw ConfigError("unknown integrator method '" + std::string(name) + "'");
}

std::string_view dt_mode_name(DtMode m) { return m == DtMode::fixed ? "fixed" : "cfl"; }

DtMode parse_dt_mode(std::string_view name) {
    if (name == "fixed") return DtMode::fixed;
    if (name == "cfl") return DtMode::cfl;
    throw ConfigError("unknown dt mode '" + std::string(name) + "'");
}

std::string_view run_status_name(RunStatus s) {
    switch (s) {
        case RunStatus::completed: return "completed";
        case RunStatus::blowup: return "blowup";
        case RunStatus::degenerate: return "degenerate";
        case RunStatus::step_limit: return "step_limit";
    }
    return "?";
}

void IntegratorConfig::validate() const {
    if (dt_mode == DtMode::cfl && !(cfl_safety > 0.0 && cfl_safety <= 1.0))
        throw ConfigError("integrator.cfl_safety must lie in (0, 1]");
    if (dt_mode == DtMode::fixed && !(dt > 0.0 && std::isfinite(dt)))
        throw ConfigError("integrator.dt must be positive");
    if (!(t_end > 0.0 && std::isfinite(t_end))) throw ConfigError("integrator.t_end must be positive");
    if (max_steps == 0) throw ConfigError("integrator.max_steps must be at least 1");
    if (!(stop_on_blowup > 0.0)) throw ConfigError("integrator.stop_on_blowup must be positive");
    if (!(stop_on_degeneracy > 0.0)) throw ConfigError("integrator.stop_on_degeneracy must be positive");
}

double cfl_dt(double max_lambda, const Grid& grid, double safety) {
    const double h = std::min(grid.h1(), grid.h2());
    return safety * h * h / (4.0 * std::max(max_lambda * max_lambda, 1.0));
}

double cfl_dt(const GeometryFields& geometry, double safety) {
    const auto& lam = geometry.metric.lambda;
    return cfl_dt(*std::max_element(lam.begin(), lam.end()), geometry.grid, safety);
}

VelocityField velocity_hflow_gradient(const GeometryFields& g, const simd::KernelTable& k) {
    if (!g.has(GeometryNeeds(kCurvature | kLambdaGradient)))
        throw std::logic_error("gradient velocity needs curvature and lambda gradient");
    const std::size_t n = g.grid.size();
    VelocityField out{FlowKind::hflow_gradient, VectorField(n)};
    simd::GradientVelocityArgs a{};
    for (int c = 0; c < 4; ++c) {
        a.d1[c] = g.partials.d1.c[c].data();
        a.d2[c] = g.partials.d2.c[c].data();
        a.h[c] = g.curvature.mean_curvature.c[c].data();
        a.v[c] = out.v.c[c].data();
    }
    a.lambda = g.metric.lambda.data();
    a.dlambda[0] = g.dlambda[0].data();
    a.dlambda[1] = g.dlambda[1].data();
    a.ginv11 = g.metric.ginv11.data();
    a.ginv12 = g.metric.ginv12.data();
    a.ginv22 = g.metric.ginv22.data();
    k.gradient_velocity(a, 0, n);
    return out;
}

VelocityField velocity_hflow_hamiltonian(const GeometryFields& g, const AmbientSpace& ambient,
                                         const simd::KernelTable& k) {
    if (!g.has(kHamiltonian)) throw std::logic_error("hamiltonian velocity needs the xi fields");
    const std::size_t n = g.grid.size();
    VelocityField out{FlowKind::hflow_hamiltonian, VectorField(n)};
    simd::HamiltonianVelocityArgs a{};
    for (int c = 0; c < 4; ++c) {
        a.d1[c] = g.partials.d1.c[c].data();
        a.d2[c] = g.partials.d2.c[c].data();
        a.v[c] = out.v.c[c].data();
    }
    for (int s = 0; s < 3; ++s) {
        a.xi[s][0] = g.hamiltonian.xi[s][0].data();
        a.xi[s][1] = g.hamiltonian.xi[s][1].data();
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) a.structures[s][r][c] = ambient.complex_structures[s][r][c];
    }
    k.hamiltonian_velocity(a, 0, n);
    return out;
}

VelocityField velocity_mcf(const GeometryFields& g) {
    if (!g.has(kCurvature)) throw std::logic_error("mcf velocity needs curvature");
    return {FlowKind::mcf, g.curvature.mean_curvature};
}

unsigned velocity_needs(FlowKind kind) {
    switch (kind) {
        case FlowKind::hflow_gradient: return kCurvature | kLambdaGradient;
        case FlowKind::hflow_hamiltonian: return kHamiltonian;
        case FlowKind::mcf: return kCurvature;
    }
    return kAllGeometry;
}

VelocityField velocity(FlowKind kind, const GeometryFields& g, const AmbientSpace& ambient,
                       const simd::KernelTable& k) {
    switch (kind) {
        case FlowKind::hflow_gradient: return velocity_hflow_gradient(g, k);
        case FlowKind::hflow_hamiltonian: return velocity_hflow_hamiltonian(g, ambient, k);
        case FlowKind::mcf: return velocity_mcf(g);
    }
    throw std::logic_error("unhandled flow kind");
}

GeometryFields stage_geometry(const SurfaceState& state, const StepContext& ctx) {
    GeometryFields g = compute_geometry(state, ctx.ambient, ctx.ops, velocity_needs(ctx.kind) | kCurvature,
                                        ctx.degeneracy_threshold, ctx.kernels);
    for (double a2 : g.curvature.norm_sq_a)
        if (!(a2 <= ctx.blowup_threshold)) throw BlowupDetected(a2, ctx.blowup_threshold);
    return g;
}

namespace {

// out = x + alpha y, componentwise over a vector field.
void axpy(const VectorField& x, const VectorField& y, double alpha, VectorField& out,
          const simd::KernelTable& k) {
    const std::size_t n = x.size();
    for (int c = 0; c < 4; ++c) {
        const simd::AxpyArgs a{x.c[c].data(), y.c[c].data(), alpha, out.c[c].data()};
        k.axpy(a, 0, n);
    }
}

SurfaceState with_periodic(const SurfaceState& base, const VectorField& p, double time) {
    SurfaceState s;
    s.grid = base.grid;
    s.time = time;
    s.winding = base.winding;
    s.periodic = p;
    s.rho = base.rho;
    s.scheme = base.scheme;
    return s;
}

}  // namespace

SurfaceState step(const SurfaceState& state, const StepContext& ctx, double dt, Method method) {
    return step(state, stage_geometry(state, ctx), ctx, dt, method);
}

SurfaceState step(const SurfaceState& state, const GeometryFields& geometry, const StepContext& ctx,
                  double dt, Method method) {
    if (!(dt > 0.0) && !(dt < 0.0)) throw ConfigError("time step must be nonzero");
    const std::size_t n = state.grid.size();
    const auto& k = ctx.kernels;
    const VelocityField k1 = velocity(ctx.kind, geometry, ctx.ambient, k);

    if (method == Method::euler) {
        VectorField p(n);
        axpy(state.periodic, k1.v, dt, p, k);
        return with_periodic(state, p, state.time + dt);
    }

    VectorField trial(n);
    auto stage = [&](const VectorField& slope, double frac) {
        axpy(state.periodic, slope, frac * dt, trial, k);
        const SurfaceState s = with_periodic(state, trial, state.time + frac * dt);
        return velocity(ctx.kind, stage_geometry(s, ctx), ctx.ambient, k);
    };
    const VelocityField k2 = stage(k1.v, 0.5);
    const VelocityField k3 = stage(k2.v, 0.5);
    const VelocityField k4 = stage(k3.v, 1.0);

    VectorField p(n);
    axpy(state.periodic, k1.v, dt / 6.0, p, k);
    axpy(p, k2.v, dt / 3.0, p, k);
    axpy(p, k3.v, dt / 3.0, p, k);
    axpy(p, k4.v, dt / 6.0, p, k);
    return with_periodic(state, p, state.time + dt);
}

FlowTrajectory run_flow(const SurfaceState& initial, const AmbientSpace& ambient, const RunSettings& settings) {
    const IntegratorConfig& ic = settings.integrator;
    ic.validate();
    if (settings.diagnostics_cadence == 0) throw ConfigError("diagnostics cadence must be at least 1");
    validate_state(initial, ambient);

    const DerivativeOperator ops(initial.grid, initial.scheme);
    const StepContext ctx{ambient, ops, settings.kind, ic.stop_on_blowup, ic.stop_on_degeneracy,
                          simd::active_kernels()};

    FlowTrajectory traj;
    traj.final_state = initial;
    SurfaceState state = initial;
    GeometryFields geometry;

    auto record = [&](std::size_t at, double dt_used) {
        traj.records.push_back(make_record(state, geometry, dt_used));
        traj.record_steps.push_back(at);
        if (settings.on_record) settings.on_record(at, traj.records.back());
    };
    auto snapshot = [&](std::size_t at) {
        if (settings.snapshot_cadence == 0 || at % settings.snapshot_cadence != 0) return;
        if (settings.retain_snapshots) {
            traj.snapshots.push_back(state);
            traj.snapshot_steps.push_back(at);
        }
        if (settings.on_snapshot) settings.on_snapshot(at, state, geometry);
    };
    auto stop = [&](RunStatus s, std::size_t at, std::string msg) {
        traj.status = s;
        traj.terminal_step = at;
        traj.message = std::move(msg);
    };

    try {
        geometry = stage_geometry(state, ctx);
    } catch (const ImmersionDegenerate& e) {
        stop(RunStatus::degenerate, 0, e.what());
        return traj;
    } catch (const BlowupDetected& e) {
        stop(RunStatus::blowup, 0, e.what());
        return traj;
    }
    record(0, 0.0);
    snapshot(0);

    std::size_t steps = 0;
    double last_dt = 0.0;
    const double t_tol = 1e-12 * ic.t_end;
    while (true) {
        if (state.time >= ic.t_end - t_tol) {
            stop(RunStatus::completed, steps, "reached t_end");
            break;
        }
        if (steps >= ic.max_steps) {
            stop(RunStatus::step_limit, steps, "reached max_steps");
            break;
        }
        double dt = ic.dt_mode == DtMode::fixed ? ic.dt : cfl_dt(geometry, ic.cfl_safety);
        dt = std::min(dt, ic.t_end - state.time);
        try {
            SurfaceState next = step(state, geometry, ctx, dt, ic.method);
            GeometryFields next_geometry = stage_geometry(next, ctx);
            state = std::move(next);
            geometry = std::move(next_geometry);
        } catch (const ImmersionDegenerate& e) {
            stop(RunStatus::degenerate, steps + 1, e.what());
            break;
        } catch (const BlowupDetected& e) {
            stop(RunStatus::blowup, steps + 1, e.what());
            break;
        }
        ++steps;
        last_dt = dt;
        if (steps % settings.diagnostics_cadence == 0) record(steps, dt);
        snapshot(steps);
    }
    if (traj.record_steps.back() != steps) record(steps, last_dt);
    traj.steps_taken = steps;
    traj.final_state = state;
    return traj;
}

}  // namespace hflow
