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

#include "hflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hflow/error.hpp"

namespace hflow {

const std::array<std::string_view, DiagnosticsRecord::kColumns>& DiagnosticsRecord::column_names() {
    static const std::array<std::string_view, kColumns> names = {
        "t",     "E",         "min_lambda", "max_lambda", "max_Q",   "max_A2",   "max_H",
        "int_A2_dmu", "area", "min_beta1",  "min_beta2",  "min_mu", "min_detg", "dt"};
    return names;
}

std::array<double, DiagnosticsRecord::kColumns> DiagnosticsRecord::values() const {
    return {t,          energy,    min_lambda, max_lambda, max_q,  max_norm_sq_a, max_norm_h,
            int_a_sq_dmu, total_area, min_beta1, min_beta2, min_mu, min_det_g,     dt_used};
}

double energy(const SurfaceState& state, const GeometryFields& g) {
    const double cell = state.grid.h1() * state.grid.h2();
    double e = 0.0;
    for (std::size_t i = 0; i < state.grid.size(); ++i) {
        const double n1 = g.pullbacks.n[0][i], n2 = g.pullbacks.n[1][i], n3 = g.pullbacks.n[2][i];
        e += (n1 * n1 + n2 * n2 + n3 * n3) * state.rho[i];
    }
    return e * cell;
}

double energy_from_lambda(const SurfaceState& state, const GeometryFields& g) {
    const double cell = state.grid.h1() * state.grid.h2();
    double e = 0.0;
    for (std::size_t i = 0; i < state.grid.size(); ++i) {
        const double lam = g.metric.lambda[i];
        e += lam * lam * state.rho[i];
    }
    return e * cell;
}

QField q_field(const GeometryFields& g) {
    QField out;
    const std::size_t n = g.grid.size();
    out.q.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = g.pullbacks.eta[1][i] - 1.0 / g.metric.lambda[i];
        const double e3 = g.pullbacks.eta[2][i];
        out.q[i] = d * d + e3 * e3;
        out.max_q = std::max(out.max_q, out.q[i]);
    }
    return out;
}

BetaMu beta_mu_diagnostics(const GeometryFields& g) {
    BetaMu out;
    out.beta1 = g.pullbacks.eta[1];
    out.beta2 = g.pullbacks.calibration_ratio;
    out.min_beta1 = *std::min_element(out.beta1.begin(), out.beta1.end());
    out.min_beta2 = *std::min_element(out.beta2.begin(), out.beta2.end());
    out.min_mu = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < out.beta1.size(); ++i)
        out.min_mu = std::min(out.min_mu, out.beta1[i] + out.beta2[i]);
    return out;
}

DiagnosticsRecord make_record(const SurfaceState& state, const GeometryFields& g, double dt_used) {
    if (!g.has(kCurvature)) throw std::logic_error("make_record needs curvature fields");
    DiagnosticsRecord r;
    r.t = state.time;
    r.energy = energy(state, g);
    const auto [lo, hi] = std::minmax_element(g.metric.lambda.begin(), g.metric.lambda.end());
    r.min_lambda = *lo;
    r.max_lambda = *hi;
    r.max_q = q_field(g).max_q;
    const double cell = state.grid.h1() * state.grid.h2();
    double max_h2 = 0.0;
    for (std::size_t i = 0; i < state.grid.size(); ++i) {
        r.max_norm_sq_a = std::max(r.max_norm_sq_a, g.curvature.norm_sq_a[i]);
        max_h2 = std::max(max_h2, g.curvature.norm_sq_h[i]);
        r.int_a_sq_dmu += g.curvature.norm_sq_a[i] * g.metric.area_density[i];
        r.total_area += g.metric.area_density[i];
    }
    r.int_a_sq_dmu *= cell;
    r.total_area *= cell;
    r.max_norm_h = std::sqrt(max_h2);
    const BetaMu b = beta_mu_diagnostics(g);
    r.min_beta1 = b.min_beta1;
    r.min_beta2 = b.min_beta2;
    r.min_mu = b.min_mu;
    r.min_det_g = *std::min_element(g.metric.det_g.begin(), g.metric.det_g.end());
    r.dt_used = dt_used;
    return r;
}

double ResidualReport::get(std::string_view name) const {
    for (const auto& e : entries)
        if (e.name == name) return e.value;
    throw std::out_of_range("no residual named " + std::string(name));
}

bool ResidualReport::contains(std::string_view name) const {
    return std::any_of(entries.begin(), entries.end(), [&](const Entry& e) { return e.name == name; });
}

double ResidualReport::max() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.value);
    return m;
}

ResidualReport pointwise_invariants(const GeometryFields& g) {
    ResidualReport rep;
    rep.grid = g.grid;
    double pyth = 0.0, normal = 0.0, eta = 0.0, a_vs_h = 0.0, calib = 0.0;
    for (std::size_t i = 0; i < g.grid.size(); ++i) {
        const double lam = g.metric.lambda[i];
        double s = 0.0;
        for (int a = 0; a < 3; ++a) {
            s += g.pullbacks.n[a][i] * g.pullbacks.n[a][i];
            eta = std::max(eta, std::abs(g.pullbacks.eta[a][i]) - 1.0);
        }
        pyth = std::max(pyth, std::abs(s - lam * lam));
        const double b2 = g.pullbacks.calibration_ratio[i];
        calib = std::max(calib, b2 * b2 - 1.0);
        if (g.has(kCurvature)) {
            const Vec4 h = g.curvature.mean_curvature.at(i);
            const double hn = std::sqrt(dot(h, h));
            for (const VectorField* d : {&g.partials.d1, &g.partials.d2}) {
                const Vec4 t = d->at(i);
                const double scale = hn * std::sqrt(dot(t, t));
                if (scale > 0.0) normal = std::max(normal, std::abs(dot(h, t)) / scale);
            }
            a_vs_h = std::max(a_vs_h, 0.5 * g.curvature.norm_sq_h[i] - g.curvature.norm_sq_a[i]);
        }
    }
    rep.entries = {{"pythagorean", pyth},
                   {"eta_bound", std::max(eta, 0.0)},
                   {"calibration_bound", std::max(calib, 0.0)}};
    if (g.has(kCurvature)) {
        rep.entries.push_back({"normality", normal});
        rep.entries.push_back({"a_dominates_h", std::max(a_vs_h, 0.0)});
    }
    return rep;
}

ResidualReport special_identity_residuals(const SurfaceState& state, const GeometryFields& g,
                                          const AmbientSpace& ambient, double q_gate) {
    if (!g.has(static_cast<GeometryNeeds>(kCurvature | kLambdaGradient)))
        throw std::logic_error("special_identity_residuals needs curvature and lambda gradient");
    const double max_q = q_field(g).max_q;
    if (max_q > q_gate) throw NotSpecial(max_q, q_gate);

    ResidualReport rep;
    rep.grid = state.grid;
    rep.scheme = state.scheme;
    double worst = 0.0;
    for (std::size_t i1 = 0; i1 < state.grid.n1; ++i1)
        for (std::size_t i2 = 0; i2 < state.grid.n2; ++i2) {
            const std::size_t idx = state.grid.index(i1, i2);
            const AdaptedFrame f = adapted_frame(g, i1, i2, ambient);
            const Vec4 h = g.curvature.mean_curvature.at(idx);
            const double lam = g.metric.lambda[idx];
            const std::array<Vec4, 2> e = {f.e1, f.e2};
            const std::array<Vec4, 2> nu = {f.nu1, f.nu2};
            for (int k = 0; k < 2; ++k) {
                const auto c = tangent_coordinates(g, idx, e[k]);
                const double dlam = c[0] * g.dlambda[0][idx] + c[1] * g.dlambda[1][idx];
                worst = std::max(worst, std::abs(dlam - lam * lam * f.eta1 * dot(nu[k], h)));
            }
        }
    rep.entries.push_back({"lambda_gradient", worst});
    rep.entries.push_back({"pythagorean", pointwise_invariants(g).get("pythagorean")});
    return rep;
}

}  // namespace hflow
