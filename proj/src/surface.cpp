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

#include "hflow/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "hflow/error.hpp"

namespace hflow {

Vec4 SurfaceState::lift(std::size_t i1, std::size_t i2) const {
    const std::size_t idx = grid.index(i1, i2);
    const double x1 = grid.x1(i1), x2 = grid.x2(i2);
    Vec4 out{};
    for (int a = 0; a < 4; ++a) out[a] = winding[0][a] * x1 + winding[1][a] * x2 + periodic.c[a][idx];
    return out;
}

void validate_state(const SurfaceState& state, const AmbientSpace& ambient) {
    const std::size_t n = state.grid.size();
    if (n == 0) throw ConfigError("surface grid is empty");
    for (const auto& comp : state.periodic.c)
        if (comp.size() != n) throw ConfigError("periodic part does not match the grid size");
    if (state.rho.size() != n) throw ConfigError("background density does not match the grid size");
    for (std::size_t i = 0; i < n; ++i)
        if (!(state.rho[i] > 0.0))
            throw ConfigError("background density rho_12 must be positive (grid index " +
                              std::to_string(i) + ")");
    const Mat4 inv = inverse(ambient.lattice);
    for (int r = 0; r < 2; ++r) {
        const Vec4 coeff = mat_vec(inv, state.winding[r]);
        for (double c : coeff)
            if (std::abs(c - std::round(c)) > 1e-9)
                throw ConfigError("winding row " + std::to_string(r + 1) +
                                  " is not an integer combination of lattice periods");
    }
}

SurfaceState shifted(const SurfaceState& state, std::size_t s1, std::size_t s2) {
    SurfaceState out = state;
    const Grid& g = state.grid;
    for (std::size_t i1 = 0; i1 < g.n1; ++i1)
        for (std::size_t i2 = 0; i2 < g.n2; ++i2) {
            const std::size_t src = g.index((i1 + s1) % g.n1, (i2 + s2) % g.n2);
            const std::size_t dst = g.index(i1, i2);
            for (int a = 0; a < 4; ++a) out.periodic.c[a][dst] = state.periodic.c[a][src];
            out.rho[dst] = state.rho[src];
        }
    return out;
}

LiftDerivatives lift_partials(const SurfaceState& state, const DerivativeOperator& ops,
                              bool with_second) {
    const std::size_t n = state.grid.size();
    LiftDerivatives out;
    out.d1 = VectorField(n);
    out.d2 = VectorField(n);
    if (with_second) {
        out.d11 = VectorField(n);
        out.d12 = VectorField(n);
        out.d22 = VectorField(n);
        out.has_second = true;
    }
    AllDerivatives all;
    FirstDerivatives first;
    for (int a = 0; a < 4; ++a) {
        const ScalarField& p = state.periodic.c[a];
        const ScalarField* d1 = nullptr;
        const ScalarField* d2 = nullptr;
        if (with_second) {
            ops.all(p, all);
            out.d11.c[a] = std::move(all.d11);
            out.d12.c[a] = std::move(all.d12);
            out.d22.c[a] = std::move(all.d22);
            d1 = &all.d1;
            d2 = &all.d2;
        } else {
            ops.first(p, first);
            d1 = &first.d1;
            d2 = &first.d2;
        }
        const double w1 = state.winding[0][a], w2 = state.winding[1][a];
        for (std::size_t i = 0; i < n; ++i) {
            out.d1.c[a][i] = w1 + (*d1)[i];
            out.d2.c[a][i] = w2 + (*d2)[i];
        }
    }
    return out;
}

InducedGeometry induced_geometry(const SurfaceState& state, const LiftDerivatives& partials,
                                 double threshold, const simd::KernelTable& k) {
    const std::size_t n = state.grid.size();
    InducedGeometry g;
    for (ScalarField* f : {&g.g11, &g.g12, &g.g22, &g.ginv11, &g.ginv12, &g.ginv22, &g.det_g,
                           &g.area_density, &g.lambda})
        f->assign(n, 0.0);

    simd::MetricArgs args{};
    for (int a = 0; a < 4; ++a) {
        args.d1[a] = partials.d1.c[a].data();
        args.d2[a] = partials.d2.c[a].data();
    }
    args.rho = state.rho.data();
    args.g11 = g.g11.data();
    args.g12 = g.g12.data();
    args.g22 = g.g22.data();
    args.ginv11 = g.ginv11.data();
    args.ginv12 = g.ginv12.data();
    args.ginv22 = g.ginv22.data();
    args.det_g = g.det_g.data();
    args.sqrt_det_g = g.area_density.data();
    args.lambda = g.lambda.data();
    k.metric(args, 0, n);

    std::size_t worst = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (!(g.det_g[i] >= g.det_g[worst])) worst = i;
    if (!(g.det_g[worst] > threshold))
        throw ImmersionDegenerate(worst / state.grid.n2, worst % state.grid.n2, g.det_g[worst]);
    return g;
}

Pullbacks pullback_fields(const SurfaceState& state, const LiftDerivatives& partials,
                          const InducedGeometry& geometry, const AmbientSpace& ambient,
                          const simd::KernelTable& k) {
    const std::size_t n = state.grid.size();
    Pullbacks out;
    for (int a = 0; a < 3; ++a) {
        out.n[a].assign(n, 0.0);
        out.eta[a].assign(n, 0.0);
    }
    out.calibration_ratio.assign(n, 0.0);

    simd::PullbackArgs args{};
    for (int a = 0; a < 4; ++a) {
        args.d1[a] = partials.d1.c[a].data();
        args.d2[a] = partials.d2.c[a].data();
    }
    args.rho = state.rho.data();
    args.sqrt_det_g = geometry.area_density.data();
    for (int f = 0; f < 4; ++f) {
        const Mat4& w = f < 3 ? ambient.kahler_forms[f] : ambient.calibration;
        for (int p = 0; p < 6; ++p) args.forms[f][p] = w[simd::kFormPairs[p][0]][simd::kFormPairs[p][1]];
    }
    for (int a = 0; a < 3; ++a) {
        args.n[a] = out.n[a].data();
        args.eta[a] = out.eta[a].data();
    }
    args.calibration_ratio = out.calibration_ratio.data();
    k.pullback(args, 0, n);
    return out;
}

Curvature curvature_fields(const LiftDerivatives& partials, const InducedGeometry& geometry,
                           const simd::KernelTable& k) {
    if (!partials.has_second) throw std::logic_error("curvature_fields needs second derivatives");
    const std::size_t n = partials.d1.size();
    Curvature out;
    for (auto& a : out.second_fundamental_form) a = VectorField(n);
    out.mean_curvature = VectorField(n);
    out.norm_sq_a.assign(n, 0.0);
    out.norm_sq_h.assign(n, 0.0);

    simd::CurvatureArgs args{};
    const VectorField* second[3] = {&partials.d11, &partials.d12, &partials.d22};
    for (int c = 0; c < 4; ++c) {
        args.d1[c] = partials.d1.c[c].data();
        args.d2[c] = partials.d2.c[c].data();
        for (int p = 0; p < 3; ++p) {
            args.dd[p][c] = second[p]->c[c].data();
            args.a[p][c] = out.second_fundamental_form[p].c[c].data();
        }
        args.h[c] = out.mean_curvature.c[c].data();
    }
    args.ginv11 = geometry.ginv11.data();
    args.ginv12 = geometry.ginv12.data();
    args.ginv22 = geometry.ginv22.data();
    args.norm_sq_a = out.norm_sq_a.data();
    args.norm_sq_h = out.norm_sq_h.data();
    k.curvature(args, 0, n);
    return out;
}

HamiltonianFields hamiltonian_fields(const SurfaceState& state, const Pullbacks& pullbacks,
                                     const DerivativeOperator& ops) {
    const std::size_t n = state.grid.size();
    HamiltonianFields out;
    FirstDerivatives d;
    for (int a = 0; a < 3; ++a) {
        ops.first(pullbacks.n[a], d);
        out.xi[a][0].resize(n);
        out.xi[a][1].resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            out.xi[a][0][i] = d.d2[i] / state.rho[i];
            out.xi[a][1][i] = -d.d1[i] / state.rho[i];
        }
    }
    return out;
}

GeometryFields compute_geometry(const SurfaceState& state, const AmbientSpace& ambient,
                                const DerivativeOperator& ops, unsigned needs,
                                double degeneracy_threshold, const simd::KernelTable& k) {
    GeometryFields g;
    g.grid = state.grid;
    g.partials = lift_partials(state, ops, (needs & kCurvature) != 0);
    g.metric = induced_geometry(state, g.partials, degeneracy_threshold, k);
    g.pullbacks = pullback_fields(state, g.partials, g.metric, ambient, k);
    g.content = kFirstOrder;
    if (needs & kCurvature) {
        g.curvature = curvature_fields(g.partials, g.metric, k);
        g.content |= kCurvature;
    }
    if (needs & kLambdaGradient) {
        FirstDerivatives d;
        ops.first(g.metric.lambda, d);
        const std::size_t n = state.grid.size();
        g.grad_lambda[0].resize(n);
        g.grad_lambda[1].resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            g.grad_lambda[0][i] = g.metric.ginv11[i] * d.d1[i] + g.metric.ginv12[i] * d.d2[i];
            g.grad_lambda[1][i] = g.metric.ginv12[i] * d.d1[i] + g.metric.ginv22[i] * d.d2[i];
        }
        g.dlambda = {std::move(d.d1), std::move(d.d2)};
        g.content |= kLambdaGradient;
    }
    if (needs & kHamiltonian) {
        g.hamiltonian = hamiltonian_fields(state, g.pullbacks, ops);
        g.content |= kHamiltonian;
    }
    return g;
}

std::array<double, 2> tangent_coordinates(const GeometryFields& g, std::size_t idx, const Vec4& x) {
    const double b1 = dot(g.partials.d1.at(idx), x);
    const double b2 = dot(g.partials.d2.at(idx), x);
    return {g.metric.ginv11[idx] * b1 + g.metric.ginv12[idx] * b2,
            g.metric.ginv12[idx] * b1 + g.metric.ginv22[idx] * b2};
}

namespace {

Vec4 scaled(const Vec4& v, double s) { return {v[0] * s, v[1] * s, v[2] * s, v[3] * s}; }

Vec4 minus(const Vec4& a, const Vec4& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }

}  // namespace

AdaptedFrame adapted_frame(const GeometryFields& g, std::size_t i1, std::size_t i2,
                           const AmbientSpace& ambient) {
    const std::size_t idx = g.grid.index(i1, i2);
    const Vec4 u = g.partials.d1.at(idx);
    const Vec4 w = g.partials.d2.at(idx);
    const double nu = std::sqrt(dot(u, u));
    if (!(nu > 0.0)) throw ImmersionDegenerate(i1, i2, g.metric.det_g[idx]);

    AdaptedFrame f;
    f.e1 = scaled(u, 1.0 / nu);
    const Vec4 rest = minus(w, scaled(f.e1, dot(w, f.e1)));
    const double nr = std::sqrt(dot(rest, rest));
    if (!(nr > 0.0)) throw ImmersionDegenerate(i1, i2, g.metric.det_g[idx]);
    f.e2 = scaled(rest, 1.0 / nr);
    f.nu1 = mat_vec(ambient.K(), f.e1);
    f.nu2 = mat_vec(ambient.K(), f.e2);
    f.eta1 = g.pullbacks.eta[0][idx];

    const std::array<Vec4, 4> frame = {f.e1, f.e2, f.nu1, f.nu2};
    for (int s = 0; s < 3; ++s)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                f.frame_matrices[s][a][b] = dot(mat_vec(ambient.complex_structures[s], frame[a]), frame[b]);

    const double e = f.eta1;
    const double r = std::sqrt(std::max(0.0, 1.0 - e * e));
    f.closed_forms[0] = {{{0, e, 0, r}, {-e, 0, -r, 0}, {0, r, 0, -e}, {-r, 0, e, 0}}};
    f.closed_forms[1] = {{{0, r, 0, -e}, {-r, 0, e, 0}, {0, -e, 0, -r}, {e, 0, r, 0}}};
    f.closed_forms[2] = {{{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}}};
    for (int s = 0; s < 3; ++s) {
        double worst = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                worst = std::max(worst, std::abs(f.frame_matrices[s][a][b] - f.closed_forms[s][a][b]));
        f.residuals[s] = worst;
    }
    return f;
}

}  // namespace hflow
