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

#include "hflow/ambient.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "hflow/error.hpp"

namespace hflow {

namespace {

double max_abs_diff(const Mat4& a, const Mat4& b) {
    double r = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r = std::max(r, std::abs(a[i][j] - b[i][j]));
    return r;
}

Mat4 negated(const Mat4& m) {
    Mat4 out = m;
    for (auto& row : out)
        for (auto& v : row) v = -v;
    return out;
}

Mat4 sum(const Mat4& a, const Mat4& b) {
    Mat4 out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i][j] = a[i][j] + b[i][j];
    return out;
}

// LU with partial pivoting; returns det and fills inv when requested.
double lu_solve(Mat4 a, Mat4* inv) {
    Mat4 b = identity4();
    double det = 1.0;
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0) return 0.0;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            std::swap(b[piv], b[col]);
            det = -det;
        }
        det *= a[col][col];
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int c = 0; c < 4; ++c) {
                a[r][c] -= f * a[col][c];
                b[r][c] -= f * b[col][c];
            }
        }
    }
    if (inv != nullptr) {
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) (*inv)[r][c] = b[r][c] / a[r][r];
    }
    return det;
}

}  // namespace

Mat4 elementary_two_form(int a, int b) {
    Mat4 w{};
    w[a][b] = 1.0;
    w[b][a] = -1.0;
    return w;
}

double determinant(const Mat4& m) { return lu_solve(m, nullptr); }

Mat4 inverse(const Mat4& m) {
    double scale = 0.0;
    for (const auto& row : m)
        for (double v : row) scale = std::max(scale, std::abs(v));
    Mat4 inv{};
    const double det = lu_solve(m, &inv);
    if (scale == 0.0 || std::abs(det) <= 1e-12 * std::pow(scale, 4))
        throw ConfigError("lattice matrix is singular (det = " + std::to_string(det) + ")");
    return inv;
}

Mat4 complex_structure_from_form(const Mat4& form, const Mat4& metric) {
    return multiply(inverse(metric), transpose(form));
}

Mat4 form_from_complex_structure(const Mat4& structure, const Mat4& metric) {
    return transpose(multiply(metric, structure));
}

double wedge_square_coefficient(const Mat4& w) {
    const double pfaffian = w[0][1] * w[2][3] - w[0][2] * w[1][3] + w[0][3] * w[1][2];
    return 2.0 * pfaffian;
}

AmbientSpace standard_hyperkahler_torus(const Mat4& lattice) {
    (void)inverse(lattice);  // validates invertibility

    AmbientSpace s;
    s.lattice = lattice;
    s.metric = identity4();
    s.kahler_forms[0] = sum(elementary_two_form(0, 1), elementary_two_form(2, 3));
    s.kahler_forms[1] = sum(elementary_two_form(0, 3), elementary_two_form(1, 2));
    s.kahler_forms[2] = sum(elementary_two_form(0, 2), negated(elementary_two_form(1, 3)));
    s.calibration = sum(elementary_two_form(0, 2), elementary_two_form(1, 3));
    for (int a = 0; a < 3; ++a)
        s.complex_structures[a] = complex_structure_from_form(s.kahler_forms[a], s.metric);
    return s;
}

double StructureReport::max_residual_excluding_product() const {
    double r = 0.0;
    for (const auto& [name, value] : residuals)
        if (name.rfind("product_", 0) != 0) r = std::max(r, value);
    return r;
}

StructureReport verify_structure_relations(const AmbientSpace& space) {
    StructureReport report;
    const Mat4 minus_id = negated(identity4());

    double squares = 0.0, compat = 0.0, ortho = 0.0, antisym = 0.0;
    for (int a = 0; a < 3; ++a) {
        const Mat4& j = space.complex_structures[a];
        squares = std::max(squares, max_abs_diff(multiply(j, j), minus_id));
        compat = std::max(compat, max_abs_diff(form_from_complex_structure(j, space.metric),
                                               space.kahler_forms[a]));
        // J^T g J = g
        ortho = std::max(ortho,
                         max_abs_diff(multiply(transpose(j), multiply(space.metric, j)), space.metric));
        antisym = std::max(antisym, max_abs_diff(space.kahler_forms[a],
                                                 negated(transpose(space.kahler_forms[a]))));
    }
    antisym = std::max(antisym, max_abs_diff(space.calibration, negated(transpose(space.calibration))));

    const Mat4 ij = multiply(space.I(), space.J());
    const double plus_k = max_abs_diff(ij, space.K());
    const double minus_k = max_abs_diff(ij, negated(space.K()));

    report.omega2_wedge_square = wedge_square_coefficient(space.kahler_forms[1]);
    report.zeta_wedge_square = wedge_square_coefficient(space.calibration);
    const bool opposite = report.omega2_wedge_square * report.zeta_wedge_square < 0.0;

    report.residuals["squares_minus_identity"] = squares;
    report.residuals["compatibility"] = compat;
    report.residuals["orthogonality"] = ortho;
    report.residuals["antisymmetry"] = antisym;
    report.residuals["product_ij_plus_k"] = plus_k;
    report.residuals["product_ij_minus_k"] = minus_k;
    report.residuals["orientation"] = opposite ? 0.0 : 1.0;
    report.product_sign = minus_k <= 1e-14 ? -1 : (plus_k <= 1e-14 ? 1 : 0);
    return report;
}

}  // namespace hflow
