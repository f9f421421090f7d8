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

// Residuals of the flat-ambient evolution laws along the H-flow.
//
// Tensors on the surface are built in coordinates (h_ijk = <K d_i f, A_jk>,
// H_k = <H, K d_k f>, covariant derivatives through Christoffel symbols of the
// discrete metric) and contracted in the orthonormal Gram-Schmidt frame
// e_a = E_a^i d_i, where index placement no longer matters.

#include <array>
#include <cmath>
#include <string>

#include "hflow/diagnostics.hpp"
#include "hflow/error.hpp"

namespace hflow {

namespace {

// Slot of the symmetric pair (i, j) in {11, 12, 22}.
constexpr int slot(int i, int j) { return i + j; }

struct Laplacian {
    const DerivativeOperator& ops;
    const InducedGeometry& m;

    ScalarField operator()(const ScalarField& u) const {
        const std::size_t n = u.size();
        FirstDerivatives du;
        ops.first(u, du);
        ScalarField flux1(n), flux2(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double s = m.area_density[i];
            flux1[i] = s * (m.ginv11[i] * du.d1[i] + m.ginv12[i] * du.d2[i]);
            flux2[i] = s * (m.ginv12[i] * du.d1[i] + m.ginv22[i] * du.d2[i]);
        }
        const ScalarField div1 = ops.d1(flux1);
        const ScalarField div2 = ops.d2(flux2);
        ScalarField out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = (div1[i] + div2[i]) / m.area_density[i];
        return out;
    }
};

void check_window(std::span<const SurfaceState> w) {
    if (w.size() != 3) throw ConfigError("evolution residuals need exactly three snapshots");
    for (const auto& s : w)
        if (!(s.grid == w[0].grid) || s.scheme != w[0].scheme)
            throw ConfigError("snapshots disagree on grid or scheme");
    const double s1 = w[1].time - w[0].time;
    const double s2 = w[2].time - w[1].time;
    if (!(s1 > 0.0) || std::abs(s1 - s2) > 1e-9 * std::max(std::abs(s1), std::abs(s2)))
        throw ConfigError("snapshot spacing is inconsistent: " + std::to_string(s1) + " vs " +
                          std::to_string(s2));
}

}  // namespace

ResidualReport evolution_residuals(std::span<const SurfaceState> window, const AmbientSpace& ambient,
                                   bool include_norm_sq_a) {
    check_window(window);
    const SurfaceState& mid = window[1];
    const Grid& grid = mid.grid;
    const std::size_t n = grid.size();
    const DerivativeOperator ops(grid, mid.scheme);

    const unsigned needs = kCurvature;
    const GeometryFields g0 = compute_geometry(window[0], ambient, ops, needs);
    const GeometryFields g = compute_geometry(mid, ambient, ops, needs);
    const GeometryFields g2 = compute_geometry(window[2], ambient, ops, needs);
    const double two_s = window[2].time - window[0].time;

    const InducedGeometry& m = g.metric;
    const Laplacian lap{ops, m};

    ScalarField lam2(n), half_lam2(n);
    for (std::size_t i = 0; i < n; ++i) {
        lam2[i] = m.lambda[i] * m.lambda[i];
        half_lam2[i] = 0.5 * lam2[i];
    }
    const ScalarField lap_lam2 = lap(lam2);
    const ScalarField lap_h2 = lap(g.curvature.norm_sq_h);
    const ScalarField lap_a2 = include_norm_sq_a ? lap(g.curvature.norm_sq_a) : ScalarField{};

    // Metric derivatives dg[slot][l].
    std::array<FirstDerivatives, 3> dg;
    ops.first(m.g11, dg[0]);
    ops.first(m.g12, dg[1]);
    ops.first(m.g22, dg[2]);

    // H_k and h_ijk against the normals K d_i f.
    std::array<ScalarField, 2> hk;
    std::array<std::array<ScalarField, 3>, 2> h3;
    for (int k = 0; k < 2; ++k) {
        hk[k].resize(n);
        for (int p = 0; p < 3; ++p) h3[k][p].resize(n);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::array<Vec4, 2> nu = {mat_vec(ambient.K(), g.partials.d1.at(i)),
                                        mat_vec(ambient.K(), g.partials.d2.at(i))};
        const Vec4 hv = g.curvature.mean_curvature.at(i);
        for (int k = 0; k < 2; ++k) {
            hk[k][i] = dot(hv, nu[k]);
            for (int p = 0; p < 3; ++p) h3[k][p][i] = dot(nu[k], g.curvature.second_fundamental_form[p].at(i));
        }
    }
    std::array<FirstDerivatives, 2> dhk;
    for (int k = 0; k < 2; ++k) ops.first(hk[k], dhk[k]);
    std::array<std::array<FirstDerivatives, 3>, 2> dh3;
    if (include_norm_sq_a)
        for (int k = 0; k < 2; ++k)
            for (int p = 0; p < 3; ++p) ops.first(h3[k][p], dh3[k][p]);

    double res_lam2 = 0.0, res_area = 0.0, res_h2 = 0.0, res_a2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lam = m.lambda[i];
        const double l2 = lam2[i];
        const double hh = g.curvature.norm_sq_h[i];
        const double eta1 = g.pullbacks.eta[0][i];

        // lambda^2 and area density.
        const double dt_lam2 = (g2.metric.lambda[i] * g2.metric.lambda[i] -
                                g0.metric.lambda[i] * g0.metric.lambda[i]) / two_s;
        res_lam2 = std::max(res_lam2, std::abs(dt_lam2 - (l2 * lap_lam2[i] - 2.0 * l2 * l2 * hh)));
        const double dt_area = (g2.metric.area_density[i] - g0.metric.area_density[i]) / two_s;
        const double rhs_area = (0.5 * lap_lam2[i] - l2 * hh) * m.area_density[i];
        res_area = std::max(res_area, std::abs(dt_area - rhs_area));

        // Christoffel symbols Gamma^k_ij from derivatives of g.
        const double gi[2][2] = {{m.ginv11[i], m.ginv12[i]}, {m.ginv12[i], m.ginv22[i]}};
        auto dmet = [&](int a, int b, int l) {
            const FirstDerivatives& d = dg[slot(a, b)];
            return l == 0 ? d.d1[i] : d.d2[i];
        };
        double gamma[2][2][2];
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                double lower[2];
                for (int l = 0; l < 2; ++l) lower[l] = 0.5 * (dmet(b, l, a) + dmet(a, l, b) - dmet(a, b, l));
                for (int k = 0; k < 2; ++k) gamma[k][a][b] = gi[k][0] * lower[0] + gi[k][1] * lower[1];
            }

        double hcoord[2], hcov[2][2], hten[2][2][2];
        for (int k = 0; k < 2; ++k) hcoord[k] = hk[k][i];
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j) {
                const double d = j == 0 ? dhk[k].d1[i] : dhk[k].d2[i];
                hcov[k][j] = d - gamma[0][j][k] * hcoord[0] - gamma[1][j][k] * hcoord[1];
            }
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c) hten[a][b][c] = h3[a][slot(b, c)][i];

        // Orthonormal frame e_a = E[a][i] d_i.
        const double g11 = m.g11[i], g12 = m.g12[i];
        const double r1 = std::sqrt(g11);
        const double r2 = std::sqrt(m.det_g[i] / g11);
        const double E[2][2] = {{1.0 / r1, 0.0}, {-g12 / g11 / r2, 1.0 / r2}};

        double Hf[2] = {0, 0}, Hcf[2][2] = {{0, 0}, {0, 0}}, hf[2][2][2] = {};
        for (int a = 0; a < 2; ++a)
            for (int p = 0; p < 2; ++p) Hf[a] += E[a][p] * hcoord[p];
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int p = 0; p < 2; ++p)
                    for (int q = 0; q < 2; ++q) Hcf[a][b] += E[a][p] * E[b][q] * hcov[p][q];
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                    for (int p = 0; p < 2; ++p)
                        for (int q = 0; q < 2; ++q)
                            for (int r = 0; r < 2; ++r) hf[a][b][c] += E[a][p] * E[b][q] * E[c][r] * hten[p][q][r];

        double grad_h_sq = 0.0, hhh = 0.0, trace_hc = 0.0, hh_hh = 0.0;
        for (int a = 0; a < 2; ++a) {
            trace_hc += Hcf[a][a];
            for (int b = 0; b < 2; ++b) {
                grad_h_sq += Hcf[a][b] * Hcf[a][b];
                hhh += Hf[a] * Hf[b] * Hcf[a][b];
                double s = 0.0;
                for (int l = 0; l < 2; ++l)
                    for (int mm = 0; mm < 2; ++mm) s += hf[a][l][mm] * hf[b][l][mm];
                hh_hh += s * Hf[a] * Hf[b];
            }
        }
        const double rhs_h2 = l2 * (lap_h2[i] - 2.0 * grad_h_sq + 4.0 * (3.0 * l2 - 2.0) * hh * hh +
                                    10.0 * lam * eta1 * hhh + 4.0 * lam * eta1 * hh * trace_hc +
                                    2.0 * hh_hh);
        const double dt_h2 = (g2.curvature.norm_sq_h[i] - g0.curvature.norm_sq_h[i]) / two_s;
        res_h2 = std::max(res_h2, std::abs(dt_h2 - rhs_h2));

        if (include_norm_sq_a) {
            // h_ijk,l = D_l h_ijk - Gamma^m_li h_mjk - Gamma^m_lj h_imk - Gamma^m_lk h_ijm
            double hcovl[2][2][2][2];
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int c = 0; c < 2; ++c)
                        for (int l = 0; l < 2; ++l) {
                            const FirstDerivatives& d = dh3[a][slot(b, c)];
                            double v = l == 0 ? d.d1[i] : d.d2[i];
                            for (int q = 0; q < 2; ++q)
                                v -= gamma[q][l][a] * hten[q][b][c] + gamma[q][l][b] * hten[a][q][c] +
                                     gamma[q][l][c] * hten[a][b][q];
                            hcovl[a][b][c][l] = v;
                        }
            double hlf[2][2][2][2] = {};
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int c = 0; c < 2; ++c)
                        for (int d = 0; d < 2; ++d)
                            for (int p = 0; p < 2; ++p)
                                for (int q = 0; q < 2; ++q)
                                    for (int r = 0; r < 2; ++r)
                                        for (int s = 0; s < 2; ++s)
                                            hlf[a][b][c][d] +=
                                                E[a][p] * E[b][q] * E[c][r] * E[d][s] * hcovl[p][q][r][s];

            double grad_a_sq = 0.0, t_hhh = 0.0, t_hdh = 0.0, t_hdd = 0.0, quart1 = 0.0, quart2 = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int c = 0; c < 2; ++c) {
                        const double habc = hf[a][b][c];
                        t_hhh += Hf[a] * Hf[b] * Hf[c] * habc;
                        t_hdh += Hf[a] * Hcf[b][c] * habc;
                        for (int l = 0; l < 2; ++l) {
                            grad_a_sq += hlf[a][b][c][l] * hlf[a][b][c][l];
                            t_hdd += Hf[l] * hlf[a][b][c][l] * habc;
                        }
                        // sums over l, m, r of h_lmr h_abl h_cmr and h_alm h_bmr h_crl
                        for (int l = 0; l < 2; ++l)
                            for (int mm = 0; mm < 2; ++mm)
                                for (int r = 0; r < 2; ++r) {
                                    quart1 += hf[l][mm][r] * hf[a][b][l] * hf[c][mm][r] * habc;
                                    quart2 += hf[a][l][mm] * hf[b][mm][r] * hf[c][r][l] * habc;
                                }
                    }
            const double rhs_a2 = l2 * (lap_a2[i] - 2.0 * grad_a_sq + 4.0 * (3.0 * l2 - 2.0) * t_hhh +
                                        12.0 * lam * eta1 * t_hdh + 2.0 * lam * eta1 * t_hdd +
                                        6.0 * quart1 - 4.0 * quart2);
            const double dt_a2 = (g2.curvature.norm_sq_a[i] - g0.curvature.norm_sq_a[i]) / two_s;
            res_a2 = std::max(res_a2, std::abs(dt_a2 - rhs_a2));
        }
    }

    ResidualReport rep;
    rep.grid = grid;
    rep.scheme = mid.scheme;
    rep.time_spacing = 0.5 * two_s;
    rep.entries = {{"lambda_sq", res_lam2}, {"area_density", res_area}, {"mean_curvature_sq", res_h2}};
    if (include_norm_sq_a) rep.entries.push_back({"norm_sq_a", res_a2});
    return rep;
}

}  // namespace hflow
