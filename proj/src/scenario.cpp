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

#include "hflow/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "hflow/error.hpp"

namespace hflow {

std::string_view initial_map_name(InitialMap m) {
    switch (m) {
        case InitialMap::identity_graph: return "identity_graph";
        case InitialMap::shear_graph: return "shear_graph";
        case InitialMap::normal_sinusoid: return "normal_sinusoid";
        case InitialMap::fourier_perturbation: return "fourier_perturbation";
    }
    return "?";
}

InitialMap parse_initial_map(std::string_view name) {
    for (InitialMap m : {InitialMap::identity_graph, InitialMap::shear_graph, InitialMap::normal_sinusoid,
                         InitialMap::fourier_perturbation})
        if (initial_map_name(m) == name) return m;
    throw ConfigError("unknown initial map '" + std::string(name) + "'");
}

std::string_view rho_mode_name(RhoMode m) { return m == RhoMode::constant ? "constant" : "pullback_omega2"; }

RhoMode parse_rho_mode(std::string_view name) {
    if (name == "pullback_omega2") return RhoMode::pullback_omega2;
    if (name == "constant") return RhoMode::constant;
    throw ConfigError("unknown rho mode '" + std::string(name) + "'");
}

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& key, const std::string& what) { throw ConfigError(key + ": " + what); };
    if (name.empty()) fail("name", "must not be empty");
    try {
        (void)inverse(lattice);
    } catch (const ConfigError& e) {
        fail("lattice", e.what());
    }
    if (grid_n1 < 8 || grid_n2 < 8 || grid_n1 % 2 != 0 || grid_n2 % 2 != 0)
        fail("gridSize", "each component must be even and at least 8");
    auto nonneg = [&](const char* key, double v) {
        if (!(v >= 0.0) || !std::isfinite(v)) fail(key, "must be nonnegative");
    };
    nonneg("epsilon1", epsilon1);
    nonneg("epsilon2", epsilon2);
    nonneg("epsilon", epsilon);
    nonneg("fourier.amplitude", fourier_amplitude);
    if (wavenumber < 1) fail("wavenumber", "must be at least 1");
    const int nyquist = static_cast<int>(std::min(grid_n1, grid_n2) / 2);
    if (fourier_max_mode < 1 || fourier_max_mode >= nyquist)
        fail("fourier.max_mode", "must lie in [1, gridSize/2)");
    for (const auto& t : fourier_terms) {
        if (t.component < 0 || t.component > 3) fail("fourier.terms", "component must be 0..3");
        if (std::abs(t.k1) >= nyquist || std::abs(t.k2) >= nyquist)
            fail("fourier.terms", "wavenumbers must stay below gridSize/2");
        if (!std::isfinite(t.cos_amp) || !std::isfinite(t.sin_amp)) fail("fourier.terms", "amplitudes must be finite");
    }
    if (!(rho_constant > 0.0) || !std::isfinite(rho_constant)) fail("rhoConstant", "must be positive");
    if (diagnostics_cadence == 0) fail("diagnosticsCadence", "must be at least 1");
    integrator.validate();
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class LineParser {
public:
    LineParser(std::size_t line, std::string key) : line_(line), key_(std::move(key)) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("line " + std::to_string(line_) + ": " + key_ + ": " + what);
    }

    double real(const std::string& w) const {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
        if (ec != std::errc() || ptr != w.data() + w.size()) fail("expected a real number, got '" + w + "'");
        return v;
    }

    long long integer(const std::string& w) const {
        long long v = 0;
        const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
        if (ec != std::errc() || ptr != w.data() + w.size()) fail("expected an integer, got '" + w + "'");
        return v;
    }

    std::size_t count(const std::string& w) const {
        const long long v = integer(w);
        if (v < 0) fail("must be nonnegative");
        return static_cast<std::size_t>(v);
    }

    double single_real(const std::string& v) const {
        const auto ws = words(v);
        if (ws.size() != 1) fail("expected one value");
        return real(ws[0]);
    }

    template <class F>
    auto enumerated(F parse, const std::string& v) const {
        try {
            return parse(v);
        } catch (const ConfigError& e) {
            fail(e.what());
        }
    }

private:
    std::size_t line_;
    std::string key_;
};

using Setter = void (*)(ScenarioConfig&, const LineParser&, const std::string&);

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"name", [](ScenarioConfig& c, const LineParser&, const std::string& v) { c.name = v; }},
        {"lattice",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) {
             const auto ws = words(v);
             if (ws.size() != 16) p.fail("expected 16 reals (row-major 4x4)");
             for (int i = 0; i < 16; ++i) c.lattice[i / 4][i % 4] = p.real(ws[i]);
         }},
        {"initialMap",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) {
             c.initial_map = p.enumerated(parse_initial_map, v);
         }},
        {"epsilon1", [](ScenarioConfig& c, const LineParser& p, const std::string& v) { c.epsilon1 = p.single_real(v); }},
        {"epsilon2", [](ScenarioConfig& c, const LineParser& p, const std::string& v) { c.epsilon2 = p.single_real(v); }},
        {"epsilon", [](ScenarioConfig& c, const LineParser& p, const std::string& v) { c.epsilon = p.single_real(v); }},
        {"wavenumber",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) {
             c.wavenumber = static_cast<int>(p.integer(v));
         }},
        {"fourier.terms",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) {
             std::istringstream in(v);
             for (std::string item; std::getline(in, item, ';');) {
                 const auto ws = words(item);
                 if (ws.empty()) continue;
                 if (ws.size() != 5) p.fail("each term is 'component k1 k2 cos_amp sin_amp'");
                 c.fourier_terms.push_back({static_cast<int>(p.integer(ws[0])), static_cast<int>(p.integer(ws[1])),
                                            static_cast<int>(p.integer(ws[2])), p.real(ws[3]), p.real(ws[4])});
             }
         }},
        {"fourier.max_mode",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) {
             c.fourier_max_mode = static_cast<int>(p.integer(v));
         }},
        {"fourier.amplitude",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) { c.fourier_amplitude = p.single_real(v); }},
        {"rhoMode",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) { c.rho_mode = p.enumerated(parse_rho_mode, v); }},
        {"rhoConstant",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) { c.rho_constant = p.single_real(v); }},
        {"flowKind",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) { c.flow_kind = p.enumerated(parse_flow_kind, v); }},
        {"scheme",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) { c.scheme = p.enumerated(parse_scheme, v); }},
        {"gridSize",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) {
             const auto ws = words(v);
             if (ws.empty() || ws.size() > 2) p.fail("expected 'N' or 'N1 N2'");
             c.grid_n1 = p.count(ws[0]);
             c.grid_n2 = ws.size() == 2 ? p.count(ws[1]) : c.grid_n1;
         }},
        {"diagnosticsCadence",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) { c.diagnostics_cadence = p.count(v); }},
        {"snapshotCadence",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) { c.snapshot_cadence = p.count(v); }},
        {"outputDir", [](ScenarioConfig& c, const LineParser&, const std::string& v) { c.output_dir = v; }},
        {"seed",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) {
             std::uint64_t s = 0;
             const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
             if (ec != std::errc() || ptr != v.data() + v.size()) p.fail("expected an unsigned integer");
             c.seed = s;
         }},
        {"integrator.method",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) {
             c.integrator.method = p.enumerated(parse_method, v);
         }},
        {"integrator.dt_mode",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) {
             c.integrator.dt_mode = p.enumerated(parse_dt_mode, v);
         }},
        {"integrator.dt", [](ScenarioConfig& c, const LineParser& p, const std::string& v) { c.integrator.dt = p.single_real(v); }},
        {"integrator.cfl_safety",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) { c.integrator.cfl_safety = p.single_real(v); }},
        {"integrator.t_end",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) { c.integrator.t_end = p.single_real(v); }},
        {"integrator.max_steps",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) { c.integrator.max_steps = p.count(v); }},
        {"integrator.stop_on_blowup",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) { c.integrator.stop_on_blowup = p.single_real(v); }},
        {"integrator.stop_on_degeneracy",
         [](ScenarioConfig& c, const LineParser& p, const std::string& v) {
             c.integrator.stop_on_degeneracy = p.single_real(v);
         }},
    };
    return table;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) {
    ScenarioConfig c;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view raw = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": missing key before '='");
        const auto it = setters().find(key);
        if (it == setters().end())
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (!seen.insert(key).second)
            throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "' given twice");
        if (value.empty()) throw ConfigError("line " + std::to_string(line_no) + ": " + key + ": missing value");
        it->second(c, LineParser(line_no, key), value);
    }
    c.validate();
    return c;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string serialize_scenario(const ScenarioConfig& c) {
    std::ostringstream out;
    out << "name = " << c.name << '\n';
    out << "lattice =";
    for (const auto& row : c.lattice)
        for (double v : row) out << ' ' << format_real(v);
    out << '\n';
    out << "initialMap = " << initial_map_name(c.initial_map) << '\n';
    out << "epsilon1 = " << format_real(c.epsilon1) << '\n';
    out << "epsilon2 = " << format_real(c.epsilon2) << '\n';
    out << "wavenumber = " << c.wavenumber << '\n';
    out << "epsilon = " << format_real(c.epsilon) << '\n';
    if (!c.fourier_terms.empty()) {
        out << "fourier.terms =";
        for (std::size_t i = 0; i < c.fourier_terms.size(); ++i) {
            const auto& t = c.fourier_terms[i];
            out << (i ? "; " : " ") << t.component << ' ' << t.k1 << ' ' << t.k2 << ' ' << format_real(t.cos_amp)
                << ' ' << format_real(t.sin_amp);
        }
        out << '\n';
    }
    out << "fourier.max_mode = " << c.fourier_max_mode << '\n';
    out << "fourier.amplitude = " << format_real(c.fourier_amplitude) << '\n';
    out << "rhoMode = " << rho_mode_name(c.rho_mode) << '\n';
    out << "rhoConstant = " << format_real(c.rho_constant) << '\n';
    out << "flowKind = " << flow_kind_name(c.flow_kind) << '\n';
    out << "scheme = " << scheme_name(c.scheme) << '\n';
    out << "gridSize = " << c.grid_n1 << ' ' << c.grid_n2 << '\n';
    out << "integrator.method = " << method_name(c.integrator.method) << '\n';
    out << "integrator.dt_mode = " << dt_mode_name(c.integrator.dt_mode) << '\n';
    out << "integrator.dt = " << format_real(c.integrator.dt) << '\n';
    out << "integrator.cfl_safety = " << format_real(c.integrator.cfl_safety) << '\n';
    out << "integrator.t_end = " << format_real(c.integrator.t_end) << '\n';
    out << "integrator.max_steps = " << c.integrator.max_steps << '\n';
    out << "integrator.stop_on_blowup = " << format_real(c.integrator.stop_on_blowup) << '\n';
    out << "integrator.stop_on_degeneracy = " << format_real(c.integrator.stop_on_degeneracy) << '\n';
    out << "diagnosticsCadence = " << c.diagnostics_cadence << '\n';
    out << "snapshotCadence = " << c.snapshot_cadence << '\n';
    out << "outputDir = " << c.output_dir << '\n';
    out << "seed = " << c.seed << '\n';
    return out.str();
}

Winding graph_winding() { return {Vec4{1, 1, 0, 0}, Vec4{0, 0, 1, 1}}; }

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Uniform in [-1, 1) from the top 53 bits; independent of the standard library's distributions.
double symmetric_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

std::vector<FourierTerm> random_terms(const ScenarioConfig& c) {
    std::mt19937_64 rng(c.seed);
    std::vector<FourierTerm> out;
    const int m = c.fourier_max_mode;
    for (int comp = 0; comp < 4; ++comp)
        for (int k1 = 0; k1 <= m; ++k1)
            for (int k2 = -m; k2 <= m; ++k2) {
                if (k1 == 0 && k2 <= 0) continue;
                const double scale = c.fourier_amplitude / (1.0 + k1 * k1 + k2 * k2);
                const double a = scale * symmetric_unit(rng);
                const double b = scale * symmetric_unit(rng);
                out.push_back({comp, k1, k2, a, b});
            }
    return out;
}

struct ShearMap {
    double e1, e2, k;

    // phi = sigma_2 o sigma_1 and its Jacobian.
    void eval(double x1, double x2, double phi[2], double jac[2][2]) const {
        const double w = kTwoPi * k;
        const double y1 = x1 + e1 * std::sin(w * x2);
        const double dy1_dx2 = e1 * w * std::cos(w * x2);
        phi[0] = y1;
        phi[1] = x2 + e2 * std::sin(w * y1);
        const double c = e2 * w * std::cos(w * y1);
        jac[0][0] = 1.0;
        jac[0][1] = dy1_dx2;
        jac[1][0] = c;
        jac[1][1] = 1.0 + c * dy1_dx2;
    }
};

}  // namespace

AmbientSpace scenario_ambient(const ScenarioConfig& config) { return standard_hyperkahler_torus(config.lattice); }

SurfaceState build_initial_surface(const ScenarioConfig& config, const AmbientSpace& ambient) {
    config.validate();
    SurfaceState s;
    s.grid = Grid{config.grid_n1, config.grid_n2};
    s.scheme = config.scheme;
    s.time = 0.0;
    const std::size_t n = s.grid.size();
    s.periodic = VectorField(n);
    s.rho.assign(n, config.rho_constant);

    const bool graph =
        config.initial_map == InitialMap::identity_graph || config.initial_map == InitialMap::shear_graph;
    const ShearMap shear{config.initial_map == InitialMap::shear_graph ? config.epsilon1 : 0.0,
                         config.initial_map == InitialMap::shear_graph ? config.epsilon2 : 0.0,
                         static_cast<double>(config.wavenumber)};
    double max_omega3 = 0.0;

    switch (config.initial_map) {
        case InitialMap::identity_graph:
        case InitialMap::shear_graph:
            s.winding = graph_winding();
            for (std::size_t i1 = 0; i1 < s.grid.n1; ++i1)
                for (std::size_t i2 = 0; i2 < s.grid.n2; ++i2) {
                    const double x1 = s.grid.x1(i1), x2 = s.grid.x2(i2);
                    double phi[2], jac[2][2];
                    shear.eval(x1, x2, phi, jac);
                    const std::size_t idx = s.grid.index(i1, i2);
                    s.periodic.c[1][idx] = phi[0] - x1;
                    s.periodic.c[3][idx] = phi[1] - x2;
                    const Vec4 d1{1.0, jac[0][0], 0.0, jac[1][0]};
                    const Vec4 d2{0.0, jac[0][1], 1.0, jac[1][1]};
                    max_omega3 = std::max(max_omega3, std::abs(bilinear(ambient.kahler_forms[2], d1, d2)));
                }
            break;
        case InitialMap::normal_sinusoid:
            s.winding = {Vec4{1, 0, 0, 0}, Vec4{0, 1, 0, 0}};
            for (std::size_t i1 = 0; i1 < s.grid.n1; ++i1)
                for (std::size_t i2 = 0; i2 < s.grid.n2; ++i2)
                    s.periodic.c[2][s.grid.index(i1, i2)] =
                        config.epsilon * std::sin(kTwoPi * config.wavenumber * s.grid.x1(i1));
            break;
        case InitialMap::fourier_perturbation: {
            s.winding = graph_winding();
            const auto terms = config.fourier_terms.empty() ? random_terms(config) : config.fourier_terms;
            for (std::size_t i1 = 0; i1 < s.grid.n1; ++i1)
                for (std::size_t i2 = 0; i2 < s.grid.n2; ++i2) {
                    const std::size_t idx = s.grid.index(i1, i2);
                    for (const auto& t : terms) {
                        const double arg = kTwoPi * (t.k1 * s.grid.x1(i1) + t.k2 * s.grid.x2(i2));
                        s.periodic.c[t.component][idx] += t.cos_amp * std::cos(arg) + t.sin_amp * std::sin(arg);
                    }
                }
            break;
        }
    }

    if (config.rho_mode == RhoMode::pullback_omega2) {
        const DerivativeOperator ops(s.grid, s.scheme);
        const LiftDerivatives d = lift_partials(s, ops);
        for (std::size_t i = 0; i < n; ++i) {
            const double w2 = bilinear(ambient.kahler_forms[1], d.d1.at(i), d.d2.at(i));
            if (!(w2 > 0.0))
                throw ConfigError("rhoMode = pullback_omega2 needs f^*omega_2 > 0, violated at grid point (" +
                                  std::to_string(i / s.grid.n2) + ", " + std::to_string(i % s.grid.n2) +
                                  ") where it equals " + format_real(w2));
            s.rho[i] = w2;
        }
        if (graph && max_omega3 > 1e-12)
            throw ConfigError("initial map is not Lagrangian for omega_3: max |f^*omega_3| = " +
                              format_real(max_omega3));
    }
    validate_state(s, ambient);
    return s;
}

RunSettings run_settings(const ScenarioConfig& config) {
    RunSettings r;
    r.kind = config.flow_kind;
    r.integrator = config.integrator;
    r.diagnostics_cadence = config.diagnostics_cadence;
    r.snapshot_cadence = config.snapshot_cadence;
    return r;
}

FlowTrajectory run_flow(const ScenarioConfig& config) {
    config.validate();
    const AmbientSpace ambient = scenario_ambient(config);
    return run_flow(build_initial_surface(config, ambient), ambient, run_settings(config));
}

}  // namespace hflow
