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

#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "hflow/flow.hpp"
#include "hflow/simd/kernels.hpp"
#include "hflow/surface.hpp"
#include "oracles.hpp"

using namespace hflow;
using namespace hflow::simd;

namespace {

constexpr std::size_t kLen = 4099;  // not a multiple of any vector width

struct Pool {
    std::mt19937_64 rng{2024};
    std::vector<std::vector<double>> store;

    const double* input(double lo, double hi) {
        std::uniform_real_distribution<double> u(lo, hi);
        store.emplace_back(kLen);
        for (double& v : store.back()) v = u(rng);
        return store.back().data();
    }
};

struct Outputs {
    std::vector<std::vector<double>> bufs;

    double* next() {
        bufs.emplace_back(kLen, -7.0);
        return bufs.back().data();
    }
    bool same(const Outputs& o) const {
        for (std::size_t i = 0; i < bufs.size(); ++i)
            if (std::memcmp(bufs[i].data(), o.bufs[i].data(), kLen * sizeof(double)) != 0) return false;
        return true;
    }
};

// Inputs are drawn once and shared by every table; outputs are per table.
template <class Args, class Fill, class Call>
void compare_tables(Fill fill, Call call, std::size_t begin, std::size_t end) {
    Pool pool;
    Args proto{};
    fill(proto, pool, nullptr);
    Outputs ref;
    Args a = proto;
    fill(a, pool, &ref);
    call(kernels(Isa::scalar), a, begin, end);
    for (Isa isa : supported_isas()) {
        Outputs got;
        Args b = proto;
        fill(b, pool, &got);
        call(kernels(isa), b, begin, end);
        CAPTURE(isa_name(isa));
        CHECK(got.same(ref));
    }
}

}  // namespace

TEST_CASE("dispatch reports the scalar table and rejects unknown support") {
    const auto isas = supported_isas();
    REQUIRE(!isas.empty());
    CHECK(isas.front() == Isa::scalar);
    CHECK(kernels(Isa::scalar).isa == Isa::scalar);
    CHECK(isa_name(Isa::avx2) == "avx2");
    if (!isa_supported(Isa::avx2)) CHECK_THROWS_AS(kernels(Isa::avx2), std::invalid_argument);
    MESSAGE("active table: " << isa_name(active_kernels().isa));
}

TEST_CASE("every kernel is bit-identical across instruction sets") {
    for (auto [begin, end] : {std::pair<std::size_t, std::size_t>{0, kLen}, {3, kLen - 2}, {5, 6}}) {
        CAPTURE(begin);
        compare_tables<MetricArgs>(
            [](MetricArgs& a, Pool& p, Outputs* o) {
                if (!o) {
                    for (int c = 0; c < 4; ++c) {
                        a.d1[c] = p.input(-2, 2);
                        a.d2[c] = p.input(-2, 2);
                    }
                    a.rho = p.input(0.5, 3);
                    return;
                }
                for (double** f : {&a.g11, &a.g12, &a.g22, &a.ginv11, &a.ginv12, &a.ginv22, &a.det_g, &a.sqrt_det_g,
                                   &a.lambda})
                    *f = o->next();
            },
            [](const KernelTable& k, const MetricArgs& a, std::size_t b, std::size_t e) { k.metric(a, b, e); }, begin,
            end);

        compare_tables<PullbackArgs>(
            [](PullbackArgs& a, Pool& p, Outputs* o) {
                if (!o) {
                    for (int c = 0; c < 4; ++c) {
                        a.d1[c] = p.input(-2, 2);
                        a.d2[c] = p.input(-2, 2);
                    }
                    a.rho = p.input(0.5, 3);
                    a.sqrt_det_g = p.input(0.5, 3);
                    for (int f = 0; f < 4; ++f)
                        for (int q = 0; q < 6; ++q) a.forms[f][q] = (f + q) % 3 - 1.0;
                    return;
                }
                for (int f = 0; f < 3; ++f) {
                    a.n[f] = o->next();
                    a.eta[f] = o->next();
                }
                a.calibration_ratio = o->next();
            },
            [](const KernelTable& k, const PullbackArgs& a, std::size_t b, std::size_t e) { k.pullback(a, b, e); },
            begin, end);

        compare_tables<CurvatureArgs>(
            [](CurvatureArgs& a, Pool& p, Outputs* o) {
                if (!o) {
                    for (int c = 0; c < 4; ++c) {
                        a.d1[c] = p.input(-2, 2);
                        a.d2[c] = p.input(-2, 2);
                        for (int q = 0; q < 3; ++q) a.dd[q][c] = p.input(-5, 5);
                    }
                    a.ginv11 = p.input(0.5, 2);
                    a.ginv12 = p.input(-0.3, 0.3);
                    a.ginv22 = p.input(0.5, 2);
                    return;
                }
                for (int c = 0; c < 4; ++c) {
                    for (int q = 0; q < 3; ++q) a.a[q][c] = o->next();
                    a.h[c] = o->next();
                }
                a.norm_sq_a = o->next();
                a.norm_sq_h = o->next();
            },
            [](const KernelTable& k, const CurvatureArgs& a, std::size_t b, std::size_t e) { k.curvature(a, b, e); },
            begin, end);

        compare_tables<GradientVelocityArgs>(
            [](GradientVelocityArgs& a, Pool& p, Outputs* o) {
                if (!o) {
                    for (int c = 0; c < 4; ++c) {
                        a.d1[c] = p.input(-2, 2);
                        a.d2[c] = p.input(-2, 2);
                        a.h[c] = p.input(-3, 3);
                    }
                    a.lambda = p.input(0.5, 2);
                    a.dlambda[0] = p.input(-1, 1);
                    a.dlambda[1] = p.input(-1, 1);
                    a.ginv11 = p.input(0.5, 2);
                    a.ginv12 = p.input(-0.3, 0.3);
                    a.ginv22 = p.input(0.5, 2);
                    return;
                }
                for (int c = 0; c < 4; ++c) a.v[c] = o->next();
            },
            [](const KernelTable& k, const GradientVelocityArgs& a, std::size_t b, std::size_t e) {
                k.gradient_velocity(a, b, e);
            },
            begin, end);

        compare_tables<HamiltonianVelocityArgs>(
            [](HamiltonianVelocityArgs& a, Pool& p, Outputs* o) {
                if (!o) {
                    for (int c = 0; c < 4; ++c) {
                        a.d1[c] = p.input(-2, 2);
                        a.d2[c] = p.input(-2, 2);
                    }
                    const AmbientSpace s = standard_hyperkahler_torus();
                    for (int q = 0; q < 3; ++q) {
                        a.xi[q][0] = p.input(-1, 1);
                        a.xi[q][1] = p.input(-1, 1);
                        for (int r = 0; r < 4; ++r)
                            for (int c = 0; c < 4; ++c) a.structures[q][r][c] = s.complex_structures[q][r][c];
                    }
                    return;
                }
                for (int c = 0; c < 4; ++c) a.v[c] = o->next();
            },
            [](const KernelTable& k, const HamiltonianVelocityArgs& a, std::size_t b, std::size_t e) {
                k.hamiltonian_velocity(a, b, e);
            },
            begin, end);

        compare_tables<AxpyArgs>(
            [](AxpyArgs& a, Pool& p, Outputs* o) {
                if (!o) {
                    a.x = p.input(-1, 1);
                    a.y = p.input(-1, 1);
                    a.alpha = 0.37;
                    return;
                }
                a.out = o->next();
            },
            [](const KernelTable& k, const AxpyArgs& a, std::size_t b, std::size_t e) { k.axpy(a, b, e); }, begin,
            end);
    }
}

TEST_CASE("the full geometry pipeline is bit-identical across instruction sets") {
    const AmbientSpace amb = standard_hyperkahler_torus();
    const SurfaceState s = oracle::random_state(30, 5, 0.05);
    const DerivativeOperator ops(s.grid, s.scheme);
    const GeometryFields ref = compute_geometry(s, amb, ops, kAllGeometry, kDefaultDegeneracyThreshold,
                                                kernels(Isa::scalar));
    const VelocityField vref = velocity_hflow_gradient(ref, kernels(Isa::scalar));
    for (Isa isa : supported_isas()) {
        const GeometryFields g = compute_geometry(s, amb, ops, kAllGeometry, kDefaultDegeneracyThreshold, kernels(isa));
        CHECK(g.metric.lambda == ref.metric.lambda);
        CHECK(g.curvature.norm_sq_a == ref.curvature.norm_sq_a);
        CHECK(g.pullbacks.eta[0] == ref.pullbacks.eta[0]);
        CHECK(g.hamiltonian.xi[2][1] == ref.hamiltonian.xi[2][1]);
        const VelocityField v = velocity_hflow_gradient(g, kernels(isa));
        for (int c = 0; c < 4; ++c) CHECK(v.v.c[c] == vref.v.c[c]);
    }
}
