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

#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hflow/ambient.hpp"
#include "hflow/derivatives.hpp"
#include "hflow/surface.hpp"

namespace hflow {

/// One time sample of the scalar diagnostics. Column order matches the CSV.
struct DiagnosticsRecord {
    double t = 0.0;
    double energy = 0.0;
    double min_lambda = 0.0;
    double max_lambda = 0.0;
    double max_q = 0.0;
    double max_norm_sq_a = 0.0;
    double max_norm_h = 0.0;
    double int_a_sq_dmu = 0.0;
    double total_area = 0.0;
    double min_beta1 = 0.0;
    double min_beta2 = 0.0;
    double min_mu = 0.0;
    double min_det_g = 0.0;
    double dt_used = 0.0;

    static constexpr std::size_t kColumns = 14;
    static const std::array<std::string_view, kColumns>& column_names();
    std::array<double, kColumns> values() const;

    friend bool operator==(const DiagnosticsRecord&, const DiagnosticsRecord&) = default;
};

/// sum_a ||N_a||^2 in L^2(rho), rectangle rule.
double energy(const SurfaceState& state, const GeometryFields& geometry);

/// The same integral evaluated as int lambda^2 rho dx.
double energy_from_lambda(const SurfaceState& state, const GeometryFields& geometry);

struct QField {
    ScalarField q;  ///< (eta_2 - 1/lambda)^2 + eta_3^2
    double max_q = 0.0;
};

QField q_field(const GeometryFields& geometry);

struct BetaMu {
    ScalarField beta1;  ///< f^* omega_2 / dmu
    ScalarField beta2;  ///< f^* zeta / dmu
    double min_beta1 = 0.0;
    double min_beta2 = 0.0;
    double min_mu = 0.0;  ///< min over the grid of beta1 + beta2
};

BetaMu beta_mu_diagnostics(const GeometryFields& geometry);

/// Needs curvature content in the geometry.
DiagnosticsRecord make_record(const SurfaceState& state, const GeometryFields& geometry, double dt_used);

struct ResidualReport {
    struct Entry {
        std::string name;
        double value = 0.0;
    };
    std::vector<Entry> entries;
    Grid grid;
    Scheme scheme = Scheme::spectral;
    double time_spacing = 0.0;  ///< snapshot spacing for time-derivative residuals

    /// Throws std::out_of_range for an unknown name.
    double get(std::string_view name) const;
    bool contains(std::string_view name) const;
    double max() const;
};

/// Algebraic identities every state satisfies: pythagorean
/// (N1^2 + N2^2 + N3^2 = lambda^2), normality (<H, d_i f> relative to
/// |H||d_i f|), eta_bound (excess of |eta_a| over 1), a_dominates_h (excess of
/// |H|^2/2 over |A|^2), calibration_bound (excess of beta^2 over 1).
ResidualReport pointwise_invariants(const GeometryFields& geometry);

inline constexpr double kDefaultSpecialGate = 1e-6;

/// For states with f^*(omega_2 + i omega_3) = rho: lambda_gradient is the
/// sup over the grid and k = 1, 2 of |d lambda(e_k) - lambda^2 eta_1 <K e_k, H>|
/// in the Gram-Schmidt frame; pythagorean as above. Throws NotSpecial when
/// max Q exceeds the gate.
ResidualReport special_identity_residuals(const SurfaceState& state, const GeometryFields& geometry,
                                          const AmbientSpace& ambient,
                                          double q_gate = kDefaultSpecialGate);

/// Time-derivative checks of the flat-ambient evolution laws along an H-flow,
/// from three equally spaced snapshots (central difference at the middle one):
///   lambda_sq:         d/dt lambda^2 = lambda^2 Lap lambda^2 - 2 lambda^4 |H|^2
///   area_density:      d/dt sqrt(g) = (Lap(lambda^2 / 2) - lambda^2 |H|^2) sqrt(g)
///   mean_curvature_sq: the |H|^2 law for the special flow in the frame
///                      nu_i = K e_i (requires the middle snapshot in the special class)
///   norm_sq_a:         the |A|^2 law, only when include_norm_sq_a is set
/// Laplacians are Laplace-Beltrami in divergence form; Christoffel symbols come
/// from derivatives of g. Throws ConfigError for unequal spacing or mismatched
/// snapshots.
ResidualReport evolution_residuals(std::span<const SurfaceState> window, const AmbientSpace& ambient,
                                   bool include_norm_sq_a = false);

}  // namespace hflow
