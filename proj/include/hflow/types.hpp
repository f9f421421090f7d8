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
#include <vector>

namespace hflow {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;

/// 2x4 matrix whose rows are the period increments of a lift.
using Winding = std::array<Vec4, 2>;

inline constexpr Mat4 identity4() {
    Mat4 m{};
    for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
    return m;
}

inline double dot(const Vec4& a, const Vec4& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

inline Vec4 mat_vec(const Mat4& m, const Vec4& v) {
    Vec4 out{};
    for (int i = 0; i < 4; ++i)
        out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2] + m[i][3] * v[3];
    return out;
}

inline Mat4 multiply(const Mat4& a, const Mat4& b) {
    Mat4 out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) out[i][j] += a[i][k] * b[k][j];
    return out;
}

inline Mat4 transpose(const Mat4& m) {
    Mat4 out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i][j] = m[j][i];
    return out;
}

/// Bilinear form u^T m v.
inline double bilinear(const Mat4& m, const Vec4& u, const Vec4& v) {
    return dot(u, mat_vec(m, v));
}

/// Uniform periodic grid on the unit parameter square [0,1)^2.
/// Storage is row-major: index(i1, i2) = i1 * n2 + i2.
struct Grid {
    std::size_t n1 = 0;
    std::size_t n2 = 0;

    std::size_t size() const { return n1 * n2; }
    double h1() const { return 1.0 / static_cast<double>(n1); }
    double h2() const { return 1.0 / static_cast<double>(n2); }
    std::size_t index(std::size_t i1, std::size_t i2) const { return i1 * n2 + i2; }
    double x1(std::size_t i1) const { return static_cast<double>(i1) * h1(); }
    double x2(std::size_t i2) const { return static_cast<double>(i2) * h2(); }

    friend bool operator==(const Grid&, const Grid&) = default;
};

using ScalarField = std::vector<double>;

/// Four-component field stored as structure of arrays.
struct VectorField {
    std::array<ScalarField, 4> c;

    VectorField() = default;
    explicit VectorField(std::size_t n) {
        for (auto& comp : c) comp.assign(n, 0.0);
    }
    std::size_t size() const { return c[0].size(); }
    Vec4 at(std::size_t i) const { return {c[0][i], c[1][i], c[2][i], c[3][i]}; }
    void set(std::size_t i, const Vec4& v) {
        for (int a = 0; a < 4; ++a) c[a][i] = v[a];
    }
};

}  // namespace hflow
