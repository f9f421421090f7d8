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

#include "hflow/derivatives.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hflow/error.hpp"

namespace hflow {

std::string_view scheme_name(Scheme s) { return s == Scheme::spectral ? "spectral" : "central4"; }

Scheme parse_scheme(std::string_view name) {
    if (name == "spectral") return Scheme::spectral;
    if (name == "central4") return Scheme::central4;
    throw ConfigError("unknown derivative scheme '" + std::string(name) + "'");
}

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

struct DerivativeOperator::Spectral {
    std::size_t n1, n2, nc;  // nc = n2 / 2 + 1
    double* real = nullptr;
    fftw_complex* spectrum = nullptr;
    fftw_complex* scratch = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    std::vector<double> k1, k2;            // angular wavenumbers 2 pi k
    std::vector<double> k1_odd, k2_odd;    // Nyquist removed

    explicit Spectral(const Grid& g) : n1(g.n1), n2(g.n2), nc(g.n2 / 2 + 1) {
        real = fftw_alloc_real(n1 * n2);
        spectrum = fftw_alloc_complex(n1 * nc);
        scratch = fftw_alloc_complex(n1 * nc);
        {
            std::lock_guard lock(planner_mutex());
            forward = fftw_plan_dft_r2c_2d(static_cast<int>(n1), static_cast<int>(n2), real,
                                           spectrum, FFTW_ESTIMATE);
            backward = fftw_plan_dft_c2r_2d(static_cast<int>(n1), static_cast<int>(n2), scratch,
                                            real, FFTW_ESTIMATE);
        }
        if (forward == nullptr || backward == nullptr) throw std::runtime_error("FFTW planning failed");
        const double two_pi = 2.0 * std::numbers::pi;
        auto wave = [&](std::size_t m, std::size_t n) {
            const auto sm = static_cast<double>(m);
            return (2 * m <= n) ? sm : sm - static_cast<double>(n);
        };
        k1.resize(n1);
        k1_odd.resize(n1);
        for (std::size_t m = 0; m < n1; ++m) {
            k1[m] = two_pi * wave(m, n1);
            k1_odd[m] = (n1 % 2 == 0 && 2 * m == n1) ? 0.0 : k1[m];
        }
        k2.resize(nc);
        k2_odd.resize(nc);
        for (std::size_t m = 0; m < nc; ++m) {
            k2[m] = two_pi * static_cast<double>(m);
            k2_odd[m] = (n2 % 2 == 0 && 2 * m == n2) ? 0.0 : k2[m];
        }
    }

    ~Spectral() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
        fftw_free(real);
        fftw_free(spectrum);
        fftw_free(scratch);
    }

    void transform(std::span<const double> u) {
        std::copy(u.begin(), u.end(), real);
        fftw_execute(forward);
    }

    // out = IFFT(spectrum * c(m1, m2)) with c real, or i c(m1, m2) when imaginary.
    template <class F>
    void inverse(F&& c, bool imaginary, ScalarField& out) {
        const double scale = 1.0 / static_cast<double>(n1 * n2);
        for (std::size_t m1 = 0; m1 < n1; ++m1)
            for (std::size_t m2 = 0; m2 < nc; ++m2) {
                const std::size_t idx = m1 * nc + m2;
                const double f = c(m1, m2) * scale;
                const double re = spectrum[idx][0], im = spectrum[idx][1];
                scratch[idx][0] = imaginary ? -im * f : re * f;
                scratch[idx][1] = imaginary ? re * f : im * f;
            }
        fftw_execute(backward);
        out.assign(real, real + n1 * n2);
    }

    void d1(ScalarField& out) {
        inverse([&](std::size_t m1, std::size_t) { return k1_odd[m1]; }, true, out);
    }
    void d2(ScalarField& out) {
        inverse([&](std::size_t, std::size_t m2) { return k2_odd[m2]; }, true, out);
    }
    void d11(ScalarField& out) {
        inverse([&](std::size_t m1, std::size_t) { return -k1[m1] * k1[m1]; }, false, out);
    }
    void d12(ScalarField& out) {
        inverse([&](std::size_t m1, std::size_t m2) { return -k1_odd[m1] * k2_odd[m2]; }, false, out);
    }
    void d22(ScalarField& out) {
        inverse([&](std::size_t, std::size_t m2) { return -k2[m2] * k2[m2]; }, false, out);
    }
};

namespace {

// Fourth-order periodic stencils along one axis. stride/len describe the axis.
void central_first(std::span<const double> u, const Grid& g, int axis, ScalarField& out) {
    out.resize(u.size());
    const double inv = axis == 0 ? 1.0 / (12.0 * g.h1()) : 1.0 / (12.0 * g.h2());
    const auto n1 = static_cast<long>(g.n1), n2 = static_cast<long>(g.n2);
    for (long i = 0; i < n1; ++i)
        for (long j = 0; j < n2; ++j) {
            auto at = [&](long di) {
                if (axis == 0) return u[static_cast<std::size_t>(((i + di + n1) % n1) * n2 + j)];
                return u[static_cast<std::size_t>(i * n2 + (j + di + n2) % n2)];
            };
            out[static_cast<std::size_t>(i * n2 + j)] =
                (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) * inv;
        }
}

void central_second(std::span<const double> u, const Grid& g, int axis, ScalarField& out) {
    out.resize(u.size());
    const double h = axis == 0 ? g.h1() : g.h2();
    const double inv = 1.0 / (12.0 * h * h);
    const auto n1 = static_cast<long>(g.n1), n2 = static_cast<long>(g.n2);
    for (long i = 0; i < n1; ++i)
        for (long j = 0; j < n2; ++j) {
            auto at = [&](long di) {
                if (axis == 0) return u[static_cast<std::size_t>(((i + di + n1) % n1) * n2 + j)];
                return u[static_cast<std::size_t>(i * n2 + (j + di + n2) % n2)];
            };
            out[static_cast<std::size_t>(i * n2 + j)] =
                (-at(2) + 16.0 * at(1) - 30.0 * at(0) + 16.0 * at(-1) - at(-2)) * inv;
        }
}

}  // namespace

DerivativeOperator::DerivativeOperator(Grid grid, Scheme scheme) : grid_(grid), scheme_(scheme) {
    if (grid.n1 < 5 || grid.n2 < 5) throw ConfigError("derivative grid must have at least 5 points per axis");
    if (scheme == Scheme::spectral) spectral_ = std::make_unique<Spectral>(grid);
}

DerivativeOperator::~DerivativeOperator() = default;
DerivativeOperator::DerivativeOperator(DerivativeOperator&&) noexcept = default;
DerivativeOperator& DerivativeOperator::operator=(DerivativeOperator&&) noexcept = default;

void DerivativeOperator::first(std::span<const double> u, FirstDerivatives& out) const {
    if (scheme_ == Scheme::spectral) {
        spectral_->transform(u);
        spectral_->d1(out.d1);
        spectral_->d2(out.d2);
        return;
    }
    central_first(u, grid_, 0, out.d1);
    central_first(u, grid_, 1, out.d2);
}

void DerivativeOperator::all(std::span<const double> u, AllDerivatives& out) const {
    if (scheme_ == Scheme::spectral) {
        spectral_->transform(u);
        spectral_->d1(out.d1);
        spectral_->d2(out.d2);
        spectral_->d11(out.d11);
        spectral_->d12(out.d12);
        spectral_->d22(out.d22);
        return;
    }
    central_first(u, grid_, 0, out.d1);
    central_first(u, grid_, 1, out.d2);
    central_second(u, grid_, 0, out.d11);
    central_second(u, grid_, 1, out.d22);
    central_first(out.d2, grid_, 0, out.d12);
}

ScalarField DerivativeOperator::d1(std::span<const double> u) const {
    FirstDerivatives d;
    first(u, d);
    return std::move(d.d1);
}

ScalarField DerivativeOperator::d2(std::span<const double> u) const {
    FirstDerivatives d;
    first(u, d);
    return std::move(d.d2);
}

}  // namespace hflow
