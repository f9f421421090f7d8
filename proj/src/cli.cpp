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

#include "hflow/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "hflow/diagnostics.hpp"
#include "hflow/error.hpp"
#include "hflow/flow.hpp"
#include "hflow/io.hpp"

namespace hflow {

namespace {

double max_velocity_gap(const VelocityField& a, const VelocityField& b) {
    double worst = 0.0;
    for (int c = 0; c < 4; ++c)
        for (std::size_t i = 0; i < a.v.size(); ++i) worst = std::max(worst, std::abs(a.v.c[c][i] - b.v.c[c][i]));
    return worst;
}

}  // namespace

std::vector<CheckLine> initial_state_checks(const ScenarioConfig& config) {
    const AmbientSpace ambient = scenario_ambient(config);
    const SurfaceState state = build_initial_surface(config, ambient);
    const bool spectral = state.scheme == Scheme::spectral;
    std::vector<CheckLine> lines;

    const StructureReport structure = verify_structure_relations(ambient);
    lines.push_back({"structure_relations", structure.max_residual_excluding_product(), 1e-14});
    lines.push_back({"product_ij_minus_k", structure.residuals.at("product_ij_minus_k"), 0.0, false});

    const DerivativeOperator ops(state.grid, state.scheme);
    const GeometryFields g = compute_geometry(state, ambient, ops, kAllGeometry);
    const ResidualReport inv = pointwise_invariants(g);
    lines.push_back({"pythagorean", inv.get("pythagorean"), 1e-10});
    lines.push_back({"eta_bound", inv.get("eta_bound"), 1e-10});
    lines.push_back({"calibration_bound", inv.get("calibration_bound"), 2e-10});
    lines.push_back({"normality", inv.get("normality"), 1e-10});
    lines.push_back({"a_dominates_h", inv.get("a_dominates_h"), 1e-12});

    const double gap = max_velocity_gap(velocity_hflow_gradient(g), velocity_hflow_hamiltonian(g, ambient));
    lines.push_back({"velocity_equivalence", gap, 1e-8, spectral});

    const double max_q = q_field(g).max_q;
    const bool graph = config.initial_map == InitialMap::identity_graph ||
                       config.initial_map == InitialMap::shear_graph;
    lines.push_back({"max_q", max_q, 1e-12, graph && config.rho_mode == RhoMode::pullback_omega2});

    if (max_q <= kDefaultSpecialGate) {
        const ResidualReport sp = special_identity_residuals(state, g, ambient);
        lines.push_back({"lambda_gradient_identity", sp.get("lambda_gradient"), 1e-6, spectral});
        double frame = 0.0;
        for (std::size_t i1 = 0; i1 < state.grid.n1; ++i1)
            for (std::size_t i2 = 0; i2 < state.grid.n2; ++i2) {
                const AdaptedFrame f = adapted_frame(g, i1, i2, ambient);
                frame = std::max({frame, f.residuals[0], f.residuals[1], f.residuals[2]});
            }
        lines.push_back({"adapted_frame", frame, 1e-10});

        // Time-derivative residuals from two short steps; reported, not gated.
        if (config.flow_kind != FlowKind::mcf) {
            const StepContext ctx{ambient, ops, config.flow_kind, config.integrator.stop_on_blowup,
                                  config.integrator.stop_on_degeneracy};
            const double dt = cfl_dt(g, 0.1);
            std::vector<SurfaceState> window{state};
            window.push_back(step(window.back(), ctx, dt, Method::rk4));
            window.push_back(step(window.back(), ctx, dt, Method::rk4));
            const ResidualReport ev = evolution_residuals(window, ambient);
            for (const auto& e : ev.entries) lines.push_back({"evolution_" + e.name, e.value, 0.0, false});
        }
    }
    return lines;
}

namespace {

struct GlobalOptions {
    std::string output_dir;
    std::size_t grid = 0;
    bool quiet = false;
};

ScenarioConfig load_with_overrides(const std::string& path, const GlobalOptions& opts) {
    ScenarioConfig c = load_scenario(path);
    if (!opts.output_dir.empty()) c.output_dir = opts.output_dir;
    if (opts.grid != 0) {
        c.grid_n1 = opts.grid;
        c.grid_n2 = opts.grid;
        c.validate();
    }
    return c;
}

std::filesystem::path prepare_output(const ScenarioConfig& c) {
    std::filesystem::path dir(c.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir;
}

std::string format_line(const CheckLine& l) {
    char buf[256];
    if (l.gated)
        std::snprintf(buf, sizeof buf, "%-28s %.6e <= %.1e  %s", l.name.c_str(), l.value, l.gate,
                      l.pass() ? "PASS" : "FAIL");
    else
        std::snprintf(buf, sizeof buf, "%-28s %.6e  info", l.name.c_str(), l.value);
    return buf;
}

int cmd_run(const std::string& file, const GlobalOptions& opts, std::ostream& out) {
    const ScenarioConfig c = load_with_overrides(file, opts);
    const auto dir = prepare_output(c);
    const AmbientSpace ambient = scenario_ambient(c);
    const SurfaceState initial = build_initial_surface(c, ambient);

    RunSettings settings = run_settings(c);
    settings.retain_snapshots = false;
    settings.on_snapshot = [&](std::size_t step, const SurfaceState& s, const GeometryFields& g) {
        char stem[64];
        std::snprintf(stem, sizeof stem, "_step%08zu", step);
        const std::string base = (dir / (c.name + stem)).string();
        write_snapshot(s, g, ambient, base + ".hflow", SnapshotFormat::flat_binary);
        write_snapshot(s, g, ambient, base + ".vtk", SnapshotFormat::vtk_legacy);
    };
    if (!opts.quiet)
        settings.on_record = [&](std::size_t step, const DiagnosticsRecord& r) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "step %zu t=%.6g E=%.12g max_Q=%.3e max_A2=%.6g", step, r.t, r.energy,
                          r.max_q, r.max_norm_sq_a);
            out << buf << '\n';
        };

    const FlowTrajectory traj = run_flow(initial, ambient, settings);
    const std::string scenario_path = (dir / (c.name + ".scenario")).string();
    std::ofstream saved(scenario_path, std::ios::binary | std::ios::trunc);
    if (!(saved << serialize_scenario(c))) throw IoError("failed writing '" + scenario_path + "'");
    if (!traj.records.empty()) write_diagnostics_csv(traj, (dir / (c.name + "_diagnostics.csv")).string());
    if (!opts.quiet)
        out << "status " << run_status_name(traj.status) << " after " << traj.steps_taken << " steps"
            << (traj.message.empty() ? "" : ": " + traj.message) << '\n';
    return kExitOk;
}

int cmd_check(const std::string& file, const GlobalOptions& opts, std::ostream& out) {
    const ScenarioConfig c = load_with_overrides(file, opts);
    const auto lines = initial_state_checks(c);
    bool ok = true;
    for (const auto& l : lines) {
        ok = ok && l.pass();
        if (!opts.quiet || !l.pass()) out << format_line(l) << '\n';
    }
    out << (ok ? "check passed" : "check FAILED") << '\n';
    return ok ? kExitOk : kExitCheckFailed;
}

std::string flow_suffix(FlowKind k) {
    switch (k) {
        case FlowKind::hflow_gradient: return "hflow";
        case FlowKind::hflow_hamiltonian: return "hflow_hamiltonian";
        case FlowKind::mcf: return "mcf";
    }
    return "?";
}

int cmd_compare(const std::string& file, const std::string& flows, const GlobalOptions& opts, std::ostream& out) {
    ScenarioConfig c = load_with_overrides(file, opts);
    std::vector<FlowKind> kinds;
    std::istringstream in(flows);
    for (std::string item; std::getline(in, item, ',');) kinds.push_back(parse_flow_kind(item));
    if (kinds.size() != 2 || kinds[0] == kinds[1]) throw ConfigError("--flows needs two distinct flow kinds");

    const auto dir = prepare_output(c);
    const AmbientSpace ambient = scenario_ambient(c);
    const SurfaceState initial = build_initial_surface(c, ambient);
    // One step size for both runs so the records line up.
    if (c.integrator.dt_mode == DtMode::cfl) {
        const DerivativeOperator ops(initial.grid, initial.scheme);
        c.integrator.dt = cfl_dt(compute_geometry(initial, ambient, ops, kFirstOrder), c.integrator.cfl_safety);
        c.integrator.dt_mode = DtMode::fixed;
    }

    std::vector<FlowTrajectory> runs;
    for (FlowKind k : kinds) {
        RunSettings s = run_settings(c);
        s.kind = k;
        s.snapshot_cadence = 0;
        runs.push_back(run_flow(initial, ambient, s));
        if (!opts.quiet)
            out << flow_kind_name(k) << ": " << run_status_name(runs.back().status) << " after "
                << runs.back().steps_taken << " steps\n";
    }

    const auto& names = DiagnosticsRecord::column_names();
    std::string csv = "t";
    for (std::size_t col = 1; col < names.size(); ++col)
        for (FlowKind k : kinds) csv += "," + std::string(names[col]) + "_" + flow_suffix(k);
    csv += '\n';
    const std::size_t rows = std::min(runs[0].records.size(), runs[1].records.size());
    char buf[32];
    for (std::size_t r = 0; r < rows; ++r) {
        const auto a = runs[0].records[r].values();
        const auto b = runs[1].records[r].values();
        std::snprintf(buf, sizeof buf, "%.17g", a[0]);
        csv += buf;
        for (std::size_t col = 1; col < names.size(); ++col)
            for (const auto* v : {&a, &b}) {
                std::snprintf(buf, sizeof buf, ",%.17g", (*v)[col]);
                csv += buf;
            }
        csv += '\n';
    }
    const std::string path = (dir / (c.name + "_compare.csv")).string();
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!(f << csv)) throw IoError("failed writing '" + path + "'");
    if (!opts.quiet) out << "wrote " << path << '\n';
    return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulator and verification suite for the hyperkahler mean curvature flow of tori."};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOptions opts;
    app.add_option("--output-dir", opts.output_dir, "Directory for results")->envname("HFLOW_OUTPUT_DIR");
    app.add_option("--grid", opts.grid, "Override the grid size (N x N)");
    app.add_flag("--quiet", opts.quiet, "Only print failures and the final verdict");

    std::string file;
    std::string flows = "hflow_gradient,mcf";
    auto* run = app.add_subcommand("run", "Integrate a scenario and write diagnostics and snapshots");
    run->add_option("scenario", file, "Scenario file")->required();
    auto* check = app.add_subcommand("check", "Run the invariant and residual suite on the initial state");
    check->add_option("scenario", file, "Scenario file")->required();
    auto* compare = app.add_subcommand("compare", "Run two flows from the same data and join their diagnostics");
    compare->add_option("scenario", file, "Scenario file")->required();
    compare->add_option("--flows", flows, "Two comma-separated flow kinds");

    std::vector<const char*> argv{"hflow"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        (void)app.exit(e, out, err);
        return kExitConfigError;
    }

    try {
        if (*run) return cmd_run(file, opts, out);
        if (*check) return cmd_check(file, opts, out);
        return cmd_compare(file, flows, opts, out);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const NotSpecial& e) {
        err << "check failed: " << e.what() << '\n';
        return kExitCheckFailed;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
}

}  // namespace hflow
