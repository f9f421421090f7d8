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
#include <cstddef>

#include "tables.hpp"

namespace hflow::simd::detail {
namespace {

struct ScalarLanes {
    using V = double;
    static constexpr std::size_t width = 1;
    static V load(const double* p) { return *p; }
    static void store(double* p, V v) { *p = v; }
    static V set1(double x) { return x; }
    static V sqrt(V v) { return std::sqrt(v); }
};

#include "point_kernels.inl"

void metric(const MetricArgs& a, std::size_t b, std::size_t e) { metric_loop<ScalarLanes>(a, b, e); }
void pullback(const PullbackArgs& a, std::size_t b, std::size_t e) {
    pullback_loop<ScalarLanes>(a, b, e);
}
void curvature(const CurvatureArgs& a, std::size_t b, std::size_t e) {
    curvature_loop<ScalarLanes>(a, b, e);
}
void gradient_velocity(const GradientVelocityArgs& a, std::size_t b, std::size_t e) {
    gradient_velocity_loop<ScalarLanes>(a, b, e);
}
void hamiltonian_velocity(const HamiltonianVelocityArgs& a, std::size_t b, std::size_t e) {
    hamiltonian_velocity_loop<ScalarLanes>(a, b, e);
}
void axpy(const AxpyArgs& a, std::size_t b, std::size_t e) { axpy_loop<ScalarLanes>(a, b, e); }

constexpr KernelTable kScalar{Isa::scalar,     &metric, &pullback, &curvature, &gradient_velocity,
                              &hamiltonian_velocity, &axpy};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace hflow::simd::detail
