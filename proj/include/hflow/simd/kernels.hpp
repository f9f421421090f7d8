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

// Per-grid-point geometry kernels with runtime instruction-set dispatch.
//
// Every kernel is a pure map over the index range [begin, end) of
// structure-of-arrays inputs. The scalar table is the reference; the AVX2
// table evaluates the same expression tree four lanes at a time (no FMA
// contraction), so both produce bit-identical output.
//
// Set HFLOW_SIMD=scalar in the environment to force the reference path.

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace hflow::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Coefficient order of a 2-form: (0,1) (0,2) (0,3) (1,2) (1,3) (2,3).
inline constexpr int kFormPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

struct MetricArgs {
    const double* d1[4];
    const double* d2[4];
    const double* rho;
    double* g11;
    double* g12;
    double* g22;
    double* ginv11;
    double* ginv12;
    double* ginv22;
    double* det_g;
    double* sqrt_det_g;
    double* lambda;
};

/// forms[0..2] are the Kahler forms, forms[3] the calibration.
struct PullbackArgs {
    const double* d1[4];
    const double* d2[4];
    const double* rho;
    const double* sqrt_det_g;
    double forms[4][6];
    double* n[3];
    double* eta[3];
    double* calibration_ratio;
};

/// dd[0..2] hold D11 f, D12 f, D22 f; a[0..2] the projected A_11, A_12, A_22.
struct CurvatureArgs {
    const double* d1[4];
    const double* d2[4];
    const double* dd[3][4];
    const double* ginv11;
    const double* ginv12;
    const double* ginv22;
    double* a[3][4];
    double* h[4];
    double* norm_sq_a;
    double* norm_sq_h;
};

/// v = lambda g^{ij} (D_j lambda) d_i f + lambda^2 H.
struct GradientVelocityArgs {
    const double* d1[4];
    const double* d2[4];
    const double* lambda;
    const double* dlambda[2];
    const double* ginv11;
    const double* ginv12;
    const double* ginv22;
    const double* h[4];
    double* v[4];
};

/// v = sum_a S_a (xi_a^1 d_1 f + xi_a^2 d_2 f) with S = (I, J, K).
struct HamiltonianVelocityArgs {
    const double* d1[4];
    const double* d2[4];
    const double* xi[3][2];
    double structures[3][4][4];
    double* v[4];
};

/// out = x + alpha * y
struct AxpyArgs {
    const double* x;
    const double* y;
    double alpha;
    double* out;
};

struct KernelTable {
    Isa isa;
    void (*metric)(const MetricArgs&, std::size_t begin, std::size_t end);
    void (*pullback)(const PullbackArgs&, std::size_t begin, std::size_t end);
    void (*curvature)(const CurvatureArgs&, std::size_t begin, std::size_t end);
    void (*gradient_velocity)(const GradientVelocityArgs&, std::size_t begin, std::size_t end);
    void (*hamiltonian_velocity)(const HamiltonianVelocityArgs&, std::size_t begin,
                                 std::size_t end);
    void (*axpy)(const AxpyArgs&, std::size_t begin, std::size_t end);
};

bool isa_supported(Isa isa);

/// Instruction sets usable on this CPU, scalar first.
std::vector<Isa> supported_isas();

/// Throws std::invalid_argument when the CPU lacks the instruction set.
const KernelTable& kernels(Isa isa);

/// Best supported table, honouring HFLOW_SIMD. Chosen once per process.
const KernelTable& active_kernels();

}  // namespace hflow::simd
