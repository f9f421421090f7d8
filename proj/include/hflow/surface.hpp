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
#include <cstddef>

#include "hflow/ambient.hpp"
#include "hflow/derivatives.hpp"
#include "hflow/simd/kernels.hpp"
#include "hflow/types.hpp"

namespace hflow {

/// Discrete immersed torus f(x) = W^T x + p(x) on a periodic grid.
///
/// rho stores the density rho_12 of the background area form against
/// dx^1 ^ dx^2; it must be positive everywhere.
struct SurfaceState {
    Grid grid;
    double time = 0.0;
    Winding winding{};
    VectorField periodic;
    ScalarField rho;
    Scheme scheme = Scheme::spectral;

    /// Lift value W^T x + p(x) at a grid point.
    Vec4 lift(std::size_t i1, std::size_t i2) const;
};

/// Throws ConfigError when sizes disagree, rho is not positive, or a winding
/// row is not an integer combination of lattice columns.
void validate_state(const SurfaceState& state, const AmbientSpace& ambient);

/// Returns a copy whose periodic data and rho are cyclically shifted by
/// (s1, s2) grid points.
SurfaceState shifted(const SurfaceState& state, std::size_t s1, std::size_t s2);

struct LiftDerivatives {
    VectorField d1, d2;        ///< d_i f = W_i + D_i p
    VectorField d11, d12, d22; ///< only filled when second derivatives were requested
    bool has_second = false;
};

LiftDerivatives lift_partials(const SurfaceState& state, const DerivativeOperator& ops,
                              bool with_second = false);

struct InducedGeometry {
    ScalarField g11, g12, g22;
    ScalarField ginv11, ginv12, ginv22;
    ScalarField det_g;
    ScalarField area_density;  ///< sqrt(det g)
    ScalarField lambda;        ///< sqrt(det g) / rho_12
};

inline constexpr double kDefaultDegeneracyThreshold = 1e-8;

/// Throws ImmersionDegenerate at the grid point with the smallest det g when
/// it is <= threshold.
InducedGeometry induced_geometry(const SurfaceState& state, const LiftDerivatives& partials,
                                 double threshold = kDefaultDegeneracyThreshold,
                                 const simd::KernelTable& k = simd::active_kernels());

struct Pullbacks {
    std::array<ScalarField, 3> n;    ///< N_a = omega_a(d1 f, d2 f) / rho_12
    std::array<ScalarField, 3> eta;  ///< eta_a = omega_a(d1 f, d2 f) / sqrt(det g)
    ScalarField calibration_ratio;   ///< zeta(d1 f, d2 f) / sqrt(det g)
};

Pullbacks pullback_fields(const SurfaceState& state, const LiftDerivatives& partials,
                          const InducedGeometry& geometry, const AmbientSpace& ambient,
                          const simd::KernelTable& k = simd::active_kernels());

struct Curvature {
    std::array<VectorField, 3> second_fundamental_form;  ///< A_11, A_12, A_22
    VectorField mean_curvature;
    ScalarField norm_sq_a;
    ScalarField norm_sq_h;
};

/// Requires partials with second derivatives (flat ambient: the second
/// covariant derivative of the lift is its plain second derivative).
Curvature curvature_fields(const LiftDerivatives& partials, const InducedGeometry& geometry,
                           const simd::KernelTable& k = simd::active_kernels());

/// Coordinate components (xi_a^1, xi_a^2) of the Hamiltonian fields of N_a
/// with respect to rho: rho_12 xi^1 = D_2 N_a, rho_12 xi^2 = -D_1 N_a.
struct HamiltonianFields {
    std::array<std::array<ScalarField, 2>, 3> xi;
};

HamiltonianFields hamiltonian_fields(const SurfaceState& state, const Pullbacks& pullbacks,
                                     const DerivativeOperator& ops);

enum GeometryNeeds : unsigned {
    kFirstOrder = 0,
    kCurvature = 1u << 0,
    kLambdaGradient = 1u << 1,
    kHamiltonian = 1u << 2,
    kAllGeometry = kCurvature | kLambdaGradient | kHamiltonian,
};

/// All per-point geometry of a state. Optional groups are empty unless
/// requested through GeometryNeeds.
struct GeometryFields {
    Grid grid;
    LiftDerivatives partials;
    InducedGeometry metric;
    Pullbacks pullbacks;
    Curvature curvature;
    std::array<ScalarField, 2> dlambda;     ///< coordinate partials D_i lambda
    std::array<ScalarField, 2> grad_lambda; ///< g^{ij} D_j lambda
    HamiltonianFields hamiltonian;
    unsigned content = kFirstOrder;

    bool has(GeometryNeeds n) const { return (content & n) == n; }
};

GeometryFields compute_geometry(const SurfaceState& state, const AmbientSpace& ambient,
                                const DerivativeOperator& ops, unsigned needs = kAllGeometry,
                                double degeneracy_threshold = kDefaultDegeneracyThreshold,
                                const simd::KernelTable& k = simd::active_kernels());

/// Orthonormal frame {e1, e2, nu1 = K e1, nu2 = K e2} at one grid point, with
/// the matrices <S F_A, F_B> of S = I, J, K in that frame and their distance
/// to the closed forms written in terms of eta_1 alone:
///
///   I = [[0, e, 0, s], [-e, 0, -s, 0], [0, s, 0, -e], [-s, 0, e, 0]]
///   J = [[0, s, 0, -e], [-s, 0, e, 0], [0, -e, 0, -s], [e, 0, s, 0]]
///   K = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]
///
/// with e = eta_1, s = sqrt(1 - eta_1^2). The residuals vanish for states
/// with f^*(omega_2 + i omega_3) = rho.
struct AdaptedFrame {
    Vec4 e1, e2, nu1, nu2;
    double eta1 = 0.0;
    std::array<Mat4, 3> frame_matrices{};
    std::array<Mat4, 3> closed_forms{};
    std::array<double, 3> residuals{};  ///< max entrywise |frame - closed form| for I, J, K
};

AdaptedFrame adapted_frame(const GeometryFields& geometry, std::size_t i1, std::size_t i2,
                           const AmbientSpace& ambient);

/// Expresses a tangent vector X = x^i d_i f in the coordinate basis.
std::array<double, 2> tangent_coordinates(const GeometryFields& geometry, std::size_t idx,
                                          const Vec4& x);

}  // namespace hflow
