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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "hflow/diagnostics.hpp"
#include "hflow/error.hpp"
#include "hflow/flow.hpp"
#include "oracles.hpp"

using namespace hflow;
using oracle::kTwoPi;

namespace {

const AmbientSpace& ambient() {
    static const AmbientSpace s = standard_hyperkahler_torus();
    return s;
}

GeometryFields geometry_of(const SurfaceState& s) {
    const DerivativeOperator ops(s.grid, s.scheme);
    return compute_geometry(s, ambient(), ops);
}

SurfaceState at_time(SurfaceState s, double t) {
    s.time = t;
    return s;
}

// Three snapshots centred on t0 with spacing 4 dt, integrated with fixed rk4 steps of dt.
std::vector<SurfaceState> window(const SurfaceState& initial, double t0, double dt) {
    const DerivativeOperator ops(initial.grid, initial.scheme);
    const StepContext ctx{ambient(), ops, FlowKind::hflow_gradient};
    const auto steps_to_first = static_cast<std::size_t>(std::llround(t0 / dt)) - 4;
    SurfaceState s = initial;
    for (std::size_t i = 0; i < steps_to_first; ++i) s = step(s, ctx, dt, Method::rk4);
    std::vector<SurfaceState> out{s};
    for (int k = 0; k < 2; ++k) {
        for (int i = 0; i < 4; ++i) s = step(s, ctx, dt, Method::rk4);
        out.push_back(s);
    }
    return out;
}

}  // namespace

TEST_CASE("energy of the identity graph is 2") {
    const SurfaceState s = oracle::identity_graph(16);
    const GeometryFields g = geometry_of(s);
    CHECK(energy(s, g) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(energy_from_lambda(s, g) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("energy as sum of N_a^2 agrees with the lambda^2 integral") {
    for (unsigned seed = 1; seed <= 6; ++seed) {
        const SurfaceState s = oracle::random_state(24, seed, 0.04);
        const GeometryFields g = geometry_of(s);
        const double e = energy(s, g);
        CHECK(e > 0.0);
        CHECK(std::abs(e - energy_from_lambda(s, g)) <= 1e-10 * e);
    }
}

TEST_CASE("Q vanishes for graphs of area-preserving maps with the pullback density") {
    CHECK(q_field(geometry_of(oracle::identity_graph(16))).max_q == 0.0);
    for (double eps : {0.02, 0.05, 0.1}) CHECK(q_field(geometry_of(oracle::single_shear(32, eps))).max_q <= 1e-12);
}

TEST_CASE("Q of the identity graph with unit density is 1/4") {
    const QField q = q_field(geometry_of(oracle::identity_graph(16, 1.0)));
    CHECK(q.max_q == doctest::Approx(0.25).epsilon(1e-15));
    for (double v : q.q) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("special identity residuals") {
    SUBCASE("identity graph") {
        const SurfaceState s = oracle::identity_graph(16);
        const ResidualReport r = special_identity_residuals(s, geometry_of(s), ambient());
        CHECK(r.get("lambda_gradient") <= 1e-12);
        CHECK(r.get("pythagorean") <= 1e-12);
    }
    SUBCASE("single shear is resolved spectrally") {
        const SurfaceState s = oracle::single_shear(64, 0.05);
        const ResidualReport r = special_identity_residuals(s, geometry_of(s), ambient());
        MESSAGE("lambda gradient residual " << r.get("lambda_gradient"));
        CHECK(r.get("lambda_gradient") <= 1e-6);
        CHECK(r.grid == Grid{64, 64});
        CHECK(r.scheme == Scheme::spectral);
        CHECK_THROWS_AS(r.get("nope"), std::out_of_range);
    }
    SUBCASE("non-special state") {
        const SurfaceState s = oracle::identity_graph(16, 1.0);
        CHECK_THROWS_AS(special_identity_residuals(s, geometry_of(s), ambient()), NotSpecial);
    }
}

TEST_CASE("special lambda-gradient residual converges under central4 refinement") {
    std::vector<double> h, err;
    for (std::size_t n : {32u, 64u, 128u}) {
        const SurfaceState s = oracle::single_shear(n, 0.05, Scheme::central4);
        h.push_back(1.0 / static_cast<double>(n));
        err.push_back(special_identity_residuals(s, geometry_of(s), ambient()).get("lambda_gradient"));
    }
    CHECK(oracle::observed_order(h, err) >= 3.5);
}

TEST_CASE("beta diagnostics") {
    SUBCASE("identity graph") {
        const BetaMu b = beta_mu_diagnostics(geometry_of(oracle::identity_graph(16)));
        CHECK(b.min_beta1 == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(b.min_beta2 == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(b.min_mu == doctest::Approx(2.0).epsilon(1e-15));
    }
    SUBCASE("single shear matches the closed form") {
        // beta_1 = beta_2 = 2 / sqrt(4 + a^2) with a = 2 pi eps cos 2 pi x2.
        const double eps = 0.02;
        const SurfaceState s = oracle::single_shear(32, eps);
        const BetaMu b = beta_mu_diagnostics(geometry_of(s));
        double err = 0.0;
        for (std::size_t i1 = 0; i1 < 32; ++i1)
            for (std::size_t i2 = 0; i2 < 32; ++i2) {
                const double a = kTwoPi * eps * std::cos(kTwoPi * s.grid.x2(i2));
                const double want = 2.0 / std::sqrt(4.0 + a * a);
                const std::size_t idx = s.grid.index(i1, i2);
                err = std::max({err, std::abs(b.beta1[idx] - want), std::abs(b.beta2[idx] - want)});
            }
        CHECK(err <= 1e-12);
        CHECK(b.min_beta1 > 1.0 - eps);
        CHECK(b.min_beta2 > 1.0 - eps);
    }
    SUBCASE("calibration bound on random states") {
        for (unsigned seed = 1; seed <= 6; ++seed) {
            const BetaMu b = beta_mu_diagnostics(geometry_of(oracle::random_state(24, seed, 0.1)));
            for (std::size_t i = 0; i < b.beta1.size(); ++i) {
                CHECK(b.beta1[i] * b.beta1[i] <= 1.0 + 1e-10);
                CHECK(b.beta2[i] * b.beta2[i] <= 1.0 + 1e-10);
            }
        }
    }
}

TEST_CASE("pointwise invariants hold on random states") {
    for (unsigned seed = 1; seed <= 4; ++seed) {
        const ResidualReport r = pointwise_invariants(geometry_of(oracle::random_state(32, seed, 0.05)));
        CHECK(r.get("pythagorean") <= 1e-10);
        CHECK(r.get("normality") <= 1e-10);
        CHECK(r.get("eta_bound") <= 1e-10);
        CHECK(r.get("calibration_bound") <= 2e-10);
        CHECK(r.get("a_dominates_h") <= 1e-12);
    }
}

TEST_CASE("make_record on the identity graph") {
    const SurfaceState s = oracle::identity_graph(16);
    const DiagnosticsRecord r = make_record(s, geometry_of(s), 1e-3);
    CHECK(r.energy == doctest::Approx(2.0));
    CHECK(r.min_lambda == doctest::Approx(1.0));
    CHECK(r.max_lambda == doctest::Approx(1.0));
    CHECK(r.max_q == 0.0);
    CHECK(r.max_norm_sq_a <= 1e-24);
    CHECK(r.total_area == doctest::Approx(2.0));
    CHECK(r.min_det_g == doctest::Approx(4.0));
    CHECK(r.dt_used == 1e-3);
    CHECK(DiagnosticsRecord::column_names().front() == "t");
    CHECK(DiagnosticsRecord::column_names().back() == "dt");
}

TEST_CASE("evolution residuals vanish on the stationary identity graph") {
    const SurfaceState s = oracle::identity_graph(16);
    const std::vector<SurfaceState> w{at_time(s, 0.0), at_time(s, 0.01), at_time(s, 0.02)};
    const ResidualReport r = evolution_residuals(w, ambient(), true);
    CHECK(r.max() <= 1e-13);
    CHECK(r.contains("norm_sq_a"));
    CHECK(r.time_spacing == doctest::Approx(0.01));
}

TEST_CASE("evolution residuals reject malformed windows") {
    const SurfaceState s = oracle::identity_graph(16);
    const std::vector<SurfaceState> uneven{at_time(s, 0.0), at_time(s, 0.01), at_time(s, 0.03)};
    CHECK_THROWS_AS(evolution_residuals(uneven, ambient()), ConfigError);
    const std::vector<SurfaceState> two{at_time(s, 0.0), at_time(s, 0.01)};
    CHECK_THROWS_AS(evolution_residuals(two, ambient()), ConfigError);
    const std::vector<SurfaceState> mixed{at_time(s, 0.0), at_time(oracle::identity_graph(8), 0.01),
                                          at_time(s, 0.02)};
    CHECK_THROWS_AS(evolution_residuals(mixed, ambient()), ConfigError);
}

TEST_CASE("evolution residuals decay at second order under time refinement") {
    const SurfaceState s = oracle::single_shear(32, 0.05);
    const double dt0 = 2.0e-5;
    const double t0 = 400 * dt0;
    std::vector<double> dts;
    std::vector<std::vector<double>> res(3);
    for (int level = 0; level < 3; ++level) {
        const double dt = dt0 / (1 << level);
        const ResidualReport r = evolution_residuals(window(s, t0, dt), ambient());
        dts.push_back(dt);
        res[0].push_back(r.get("lambda_sq"));
        res[1].push_back(r.get("area_density"));
        res[2].push_back(r.get("mean_curvature_sq"));
    }
    const double o_lambda = oracle::observed_order(dts, res[0]);
    const double o_area = oracle::observed_order(dts, res[1]);
    MESSAGE("orders " << o_lambda << " " << o_area << "; |H|^2 residuals " << res[2][0] << " -> " << res[2][2]);
    // Second-order central difference in time; 0.05 allows for least-squares fit noise.
    CHECK(o_lambda >= 1.95);
    CHECK(o_area >= 1.95);
    CHECK(std::isfinite(res[2][2]));
    CHECK(res[2][2] < res[2][0]);
}
