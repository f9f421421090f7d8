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

// Built with -mavx2 only for this translation unit. Nothing here may be an
// inline function shared with other translation units: every lane type and
// instantiation lives in an anonymous namespace.

#include <immintrin.h>

#include <cstddef>

#include "tables.hpp"

namespace hflow::simd::detail {
namespace {

struct Lane4 {
    __m256d v;
};

inline Lane4 operator+(Lane4 a, Lane4 b) { return {_mm256_add_pd(a.v, b.v)}; }
inline Lane4 operator-(Lane4 a, Lane4 b) { return {_mm256_sub_pd(a.v, b.v)}; }
inline Lane4 operator*(Lane4 a, Lane4 b) { return {_mm256_mul_pd(a.v, b.v)}; }
inline Lane4 operator/(Lane4 a, Lane4 b) { return {_mm256_div_pd(a.v, b.v)}; }

struct Avx2Lanes {
    using V = Lane4;
    static constexpr std::size_t width = 4;
    static V load(const double* p) { return {_mm256_loadu_pd(p)}; }
    static void store(double* p, V v) { _mm256_storeu_pd(p, v.v); }
    static V set1(double x) { return {_mm256_set1_pd(x)}; }
    static V sqrt(V v) { return {_mm256_sqrt_pd(v.v)}; }
};

#include "point_kernels.inl"

// Remainders go to the scalar reference so both tables agree on every index.
void metric(const MetricArgs& a, std::size_t b, std::size_t e) {
    scalar_table().metric(a, metric_loop<Avx2Lanes>(a, b, e), e);
}
void pullback(const PullbackArgs& a, std::size_t b, std::size_t e) {
    scalar_table().pullback(a, pullback_loop<Avx2Lanes>(a, b, e), e);
}
void curvature(const CurvatureArgs& a, std::size_t b, std::size_t e) {
    scalar_table().curvature(a, curvature_loop<Avx2Lanes>(a, b, e), e);
}
void gradient_velocity(const GradientVelocityArgs& a, std::size_t b, std::size_t e) {
    scalar_table().gradient_velocity(a, gradient_velocity_loop<Avx2Lanes>(a, b, e), e);
}
void hamiltonian_velocity(const HamiltonianVelocityArgs& a, std::size_t b, std::size_t e) {
    scalar_table().hamiltonian_velocity(a, hamiltonian_velocity_loop<Avx2Lanes>(a, b, e), e);
}
void axpy(const AxpyArgs& a, std::size_t b, std::size_t e) {
    scalar_table().axpy(a, axpy_loop<Avx2Lanes>(a, b, e), e);
}

constexpr KernelTable kAvx2{Isa::avx2,          &metric, &pullback, &curvature, &gradient_velocity,
                            &hamiltonian_velocity, &axpy};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

}  // namespace hflow::simd::detail
