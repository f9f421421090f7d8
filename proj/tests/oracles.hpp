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

// Closed-form oracles and state builders shared by the tests. Nothing here calls
// into the library's geometry pipeline; the formulas are written out by hand.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "hflow/ambient.hpp"
#include "hflow/surface.hpp"
#include "hflow/types.hpp"

namespace oracle {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Coefficient of w ^ w against dy1^dy2^dy3^dy4 by summing over all 24 permutations:
/// w ^ w = (1/4) sum_sigma sign(sigma) w_{s0 s1} w_{s2 s3} vol.
inline double wedge_square(const hflow::Mat4& w) {
    std::array<int, 4> p{0, 1, 2, 3};
    double total = 0.0;
    do {
        int inversions = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) inversions += p[i] > p[j];
        const double sign = inversions % 2 == 0 ? 1.0 : -1.0;
        total += sign * w[p[0]][p[1]] * w[p[2]][p[3]];
    } while (std::next_permutation(p.begin(), p.end()));
    return total / 4.0;
}

/// Single shear graph f = (x1, x1 + e sin 2 pi x2, x2, x2), rho = 2:
/// a = 2 pi e cos 2 pi x2, lambda = sqrt(4 + a^2) / 2, N_1 = a / 2.
struct SingleShear {
    double eps;
    double a(double x2) const { return kTwoPi * eps * std::cos(kTwoPi * x2); }
    double lambda(double x2) const { return std::sqrt(4.0 + a(x2) * a(x2)) / 2.0; }
    double n1(double x2) const { return a(x2) / 2.0; }
    double eta1(double x2) const { return a(x2) / std::sqrt(4.0 + a(x2) * a(x2)); }
};

inline hflow::Mat4 negate(hflow::Mat4 m) {
    for (auto& r : m)
        for (auto& v : r) v = -v;
    return m;
}

inline double max_abs_diff(const hflow::ScalarField& a, const hflow::ScalarField& b) {
    double r = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
    return r;
}

inline double max_abs_diff(const hflow::VectorField& a, const hflow::VectorField& b) {
    double r = 0.0;
    for (int c = 0; c < 4; ++c) r = std::max(r, max_abs_diff(a.c[c], b.c[c]));
    return r;
}

inline double max_abs(const hflow::ScalarField& a) {
    double r = 0.0;
    for (double v : a) r = std::max(r, std::abs(v));
    return r;
}

/// State on an n x n grid with the graph winding, given periodic part and rho.
template <class P, class R>
hflow::SurfaceState make_state(std::size_t n, hflow::Scheme scheme, P periodic, R rho,
                               hflow::Winding winding = {hflow::Vec4{1, 1, 0, 0}, hflow::Vec4{0, 0, 1, 1}}) {
    hflow::SurfaceState s;
    s.grid = hflow::Grid{n, n};
    s.scheme = scheme;
    s.winding = winding;
    s.periodic = hflow::VectorField(s.grid.size());
    s.rho.resize(s.grid.size());
    for (std::size_t i1 = 0; i1 < n; ++i1)
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            const double x1 = s.grid.x1(i1), x2 = s.grid.x2(i2);
            const std::size_t idx = s.grid.index(i1, i2);
            s.periodic.set(idx, periodic(x1, x2));
            s.rho[idx] = rho(x1, x2);
        }
    return s;
}

inline hflow::SurfaceState identity_graph(std::size_t n, double rho = 2.0,
                                          hflow::Scheme scheme = hflow::Scheme::spectral) {
    return make_state(n, scheme, [](double, double) { return hflow::Vec4{}; },
                      [rho](double, double) { return rho; });
}

inline hflow::SurfaceState single_shear(std::size_t n, double eps, hflow::Scheme scheme = hflow::Scheme::spectral) {
    return make_state(n, scheme,
                      [eps](double, double x2) { return hflow::Vec4{0, eps * std::sin(kTwoPi * x2), 0, 0}; },
                      [](double, double) { return 2.0; });
}

/// f = (x1, x2, e sin 2 pi x1, 0) with constant rho.
inline hflow::SurfaceState normal_sinusoid(std::size_t n, double eps, double rho = 1.0) {
    return make_state(n, hflow::Scheme::spectral,
                      [eps](double x1, double) { return hflow::Vec4{0, 0, eps * std::sin(kTwoPi * x1), 0}; },
                      [rho](double, double) { return rho; },
                      {hflow::Vec4{1, 0, 0, 0}, hflow::Vec4{0, 1, 0, 0}});
}

/// Random low-mode periodic part with amplitude amp and constant rho.
inline hflow::SurfaceState random_state(std::size_t n, unsigned seed, double amp = 0.02, double rho = 1.5) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::array<std::array<double, 4>, 4> coef{};
    for (auto& row : coef)
        for (auto& v : row) v = amp * u(rng);
    return make_state(n, hflow::Scheme::spectral,
                      [coef](double x1, double x2) {
                          hflow::Vec4 p{};
                          for (int c = 0; c < 4; ++c)
                              p[c] = coef[c][0] * std::sin(kTwoPi * x1) + coef[c][1] * std::cos(kTwoPi * x2) +
                                     coef[c][2] * std::sin(kTwoPi * (x1 + x2)) +
                                     coef[c][3] * std::cos(kTwoPi * (2 * x1 - x2));
                          return p;
                      },
                      [rho](double x1, double x2) { return rho + 0.2 * std::sin(kTwoPi * x1) * std::cos(kTwoPi * x2); });
}

/// Least-squares slope of log(err) against log(h).
inline double observed_order(const std::vector<double>& h, const std::vector<double>& err) {
    const double n = static_cast<double>(h.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double x = std::log(h[i]), y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Three-level order estimate log2((e0 - e1) / (e1 - e2)) for a refinement ratio of 2.
/// A constant error floor cancels in the differences.
inline double richardson_order(double e0, double e1, double e2) { return std::log2((e0 - e1) / (e1 - e2)); }

}  // namespace oracle
