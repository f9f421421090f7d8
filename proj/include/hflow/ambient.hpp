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
#include <map>
#include <string>

#include "hflow/types.hpp"

namespace hflow {

/// Flat hyperkahler 4-torus R^4 / lattice with the Euclidean metric.
///
/// A 2-form is stored by its component matrix W (antisymmetric) so that
/// w(X, Y) = X^T W Y. The complex structure J compatible with w through
/// w(X, Y) = <J X, Y> is then J = metric^{-1} W^T.
struct AmbientSpace {
    Mat4 lattice = identity4();  ///< columns are the period vectors
    Mat4 metric = identity4();
    std::array<Mat4, 3> complex_structures{};  ///< I, J, K
    std::array<Mat4, 3> kahler_forms{};        ///< omega_1, omega_2, omega_3
    Mat4 calibration{};                        ///< anti-self-dual zeta

    const Mat4& I() const { return complex_structures[0]; }
    const Mat4& J() const { return complex_structures[1]; }
    const Mat4& K() const { return complex_structures[2]; }
};

/// Component matrix of the 2-form dy^a ^ dy^b (0-based indices).
Mat4 elementary_two_form(int a, int b);

/// The standard structure on R^4 / lattice:
///   omega_1 = dy1^dy2 + dy3^dy4, omega_2 = dy1^dy4 + dy2^dy3,
///   omega_3 = dy1^dy3 - dy2^dy4, zeta = dy1^dy3 + dy2^dy4.
/// Throws ConfigError for a singular lattice.
AmbientSpace standard_hyperkahler_torus(const Mat4& lattice = identity4());

/// The J with w(X, Y) = <J X, Y>_metric.
Mat4 complex_structure_from_form(const Mat4& form, const Mat4& metric = identity4());

/// Inverse of complex_structure_from_form: W = (metric J)^T.
Mat4 form_from_complex_structure(const Mat4& structure, const Mat4& metric = identity4());

/// Coefficient c in w ^ w = c dy1^dy2^dy3^dy4 (twice the Pfaffian).
double wedge_square_coefficient(const Mat4& form);

double determinant(const Mat4& m);

/// Throws ConfigError when m is singular (|det| below 1e-12 relative to its scale).
Mat4 inverse(const Mat4& m);

struct StructureReport {
    /// Named maximum absolute residuals. Keys: squares_minus_identity,
    /// compatibility, orthogonality, antisymmetry, product_ij_plus_k,
    /// product_ij_minus_k, orientation (0 when zeta^2 and omega_2^2 have
    /// opposite signs, else 1).
    std::map<std::string, double> residuals;
    /// -1 when I J = -K holds, +1 when I J = +K holds, 0 when neither.
    int product_sign = 0;
    double omega2_wedge_square = 0.0;
    double zeta_wedge_square = 0.0;

    double max_residual_excluding_product() const;
};

/// Evaluates every algebraic relation of the structure. Never throws; failures
/// show up as nonzero residuals.
StructureReport verify_structure_relations(const AmbientSpace& space);

}  // namespace hflow
