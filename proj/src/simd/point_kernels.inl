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

// Width-agnostic kernel bodies. Included inside an anonymous namespace by each
// instruction-set translation unit after it defines a lane policy L with
//   using V; static constexpr std::size_t width;
//   static V load(const double*); static void store(double*, V);
//   static V set1(double); static V sqrt(V);
// and arithmetic operators + - * / on V. Only these operations appear below,
// in a fixed order, so every policy evaluates the same expression tree.

template <class L>
inline void metric_block(const hflow::simd::MetricArgs& a, std::size_t i) {
    using V = typename L::V;
    V u[4], w[4];
    for (int c = 0; c < 4; ++c) {
        u[c] = L::load(a.d1[c] + i);
        w[c] = L::load(a.d2[c] + i);
    }
    const V g11 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3];
    const V g12 = u[0] * w[0] + u[1] * w[1] + u[2] * w[2] + u[3] * w[3];
    const V g22 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2] + w[3] * w[3];
    const V det = g11 * g22 - g12 * g12;
    const V root = L::sqrt(det);
    L::store(a.g11 + i, g11);
    L::store(a.g12 + i, g12);
    L::store(a.g22 + i, g22);
    L::store(a.ginv11 + i, g22 / det);
    L::store(a.ginv12 + i, (L::set1(0.0) - g12) / det);
    L::store(a.ginv22 + i, g11 / det);
    L::store(a.det_g + i, det);
    L::store(a.sqrt_det_g + i, root);
    L::store(a.lambda + i, root / L::load(a.rho + i));
}

template <class L>
inline void pullback_block(const hflow::simd::PullbackArgs& a, std::size_t i) {
    using V = typename L::V;
    V u[4], w[4];
    for (int c = 0; c < 4; ++c) {
        u[c] = L::load(a.d1[c] + i);
        w[c] = L::load(a.d2[c] + i);
    }
    // Pairwise wedge components u^a w^b - u^b w^a.
    V wedge[6];
    for (int p = 0; p < 6; ++p) {
        const int x = hflow::simd::kFormPairs[p][0];
        const int y = hflow::simd::kFormPairs[p][1];
        wedge[p] = u[x] * w[y] - u[y] * w[x];
    }
    const V rho = L::load(a.rho + i);
    const V root = L::load(a.sqrt_det_g + i);
    V value[4];
    for (int f = 0; f < 4; ++f) {
        V s = L::set1(a.forms[f][0]) * wedge[0];
        for (int p = 1; p < 6; ++p) s = s + L::set1(a.forms[f][p]) * wedge[p];
        value[f] = s;
    }
    for (int f = 0; f < 3; ++f) {
        L::store(a.n[f] + i, value[f] / rho);
        L::store(a.eta[f] + i, value[f] / root);
    }
    L::store(a.calibration_ratio + i, value[3] / root);
}

template <class L>
inline void curvature_block(const hflow::simd::CurvatureArgs& a, std::size_t i) {
    using V = typename L::V;
    V u[4], w[4];
    for (int c = 0; c < 4; ++c) {
        u[c] = L::load(a.d1[c] + i);
        w[c] = L::load(a.d2[c] + i);
    }
    const V gi11 = L::load(a.ginv11 + i);
    const V gi12 = L::load(a.ginv12 + i);
    const V gi22 = L::load(a.ginv22 + i);

    V second[3][4];
    for (int p = 0; p < 3; ++p) {
        V v[4];
        for (int c = 0; c < 4; ++c) v[c] = L::load(a.dd[p][c] + i);
        const V t1 = v[0] * u[0] + v[1] * u[1] + v[2] * u[2] + v[3] * u[3];
        const V t2 = v[0] * w[0] + v[1] * w[1] + v[2] * w[2] + v[3] * w[3];
        const V c1 = gi11 * t1 + gi12 * t2;
        const V c2 = gi12 * t1 + gi22 * t2;
        for (int c = 0; c < 4; ++c) {
            second[p][c] = v[c] - c1 * u[c] - c2 * w[c];
            L::store(a.a[p][c] + i, second[p][c]);
        }
    }

    const V twice12 = gi12 + gi12;
    V h2 = L::set1(0.0);
    for (int c = 0; c < 4; ++c) {
        const V hc = gi11 * second[0][c] + twice12 * second[1][c] + gi22 * second[2][c];
        L::store(a.h[c] + i, hc);
        h2 = h2 + hc * hc;
    }
    L::store(a.norm_sq_h + i, h2);

    // |A|^2 = g^{ik} g^{jl} <A_ij, A_kl>; A_ij lives in slot i + j.
    const V ginv[2][2] = {{gi11, gi12}, {gi12, gi22}};
    V inner[3][3];
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
            inner[p][q] = second[p][0] * second[q][0] + second[p][1] * second[q][1] +
                          second[p][2] * second[q][2] + second[p][3] * second[q][3];
    V a2 = L::set1(0.0);
    for (int ii = 0; ii < 2; ++ii)
        for (int jj = 0; jj < 2; ++jj)
            for (int kk = 0; kk < 2; ++kk)
                for (int ll = 0; ll < 2; ++ll)
                    a2 = a2 + ginv[ii][kk] * ginv[jj][ll] * inner[ii + jj][kk + ll];
    L::store(a.norm_sq_a + i, a2);
}

template <class L>
inline void gradient_velocity_block(const hflow::simd::GradientVelocityArgs& a, std::size_t i) {
    using V = typename L::V;
    const V lam = L::load(a.lambda + i);
    const V dl1 = L::load(a.dlambda[0] + i);
    const V dl2 = L::load(a.dlambda[1] + i);
    const V gi11 = L::load(a.ginv11 + i);
    const V gi12 = L::load(a.ginv12 + i);
    const V gi22 = L::load(a.ginv22 + i);
    const V w1 = lam * (gi11 * dl1 + gi12 * dl2);
    const V w2 = lam * (gi12 * dl1 + gi22 * dl2);
    const V lam2 = lam * lam;
    for (int c = 0; c < 4; ++c) {
        const V v = w1 * L::load(a.d1[c] + i) + w2 * L::load(a.d2[c] + i) +
                    lam2 * L::load(a.h[c] + i);
        L::store(a.v[c] + i, v);
    }
}

template <class L>
inline void hamiltonian_velocity_block(const hflow::simd::HamiltonianVelocityArgs& a,
                                       std::size_t i) {
    using V = typename L::V;
    V u[4], w[4];
    for (int c = 0; c < 4; ++c) {
        u[c] = L::load(a.d1[c] + i);
        w[c] = L::load(a.d2[c] + i);
    }
    V out[4] = {L::set1(0.0), L::set1(0.0), L::set1(0.0), L::set1(0.0)};
    for (int s = 0; s < 3; ++s) {
        const V x1 = L::load(a.xi[s][0] + i);
        const V x2 = L::load(a.xi[s][1] + i);
        V t[4];
        for (int c = 0; c < 4; ++c) t[c] = x1 * u[c] + x2 * w[c];
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) out[r] = out[r] + L::set1(a.structures[s][r][c]) * t[c];
    }
    for (int c = 0; c < 4; ++c) L::store(a.v[c] + i, out[c]);
}

template <class L>
inline void axpy_block(const hflow::simd::AxpyArgs& a, std::size_t i) {
    L::store(a.out + i, L::load(a.x + i) + L::set1(a.alpha) * L::load(a.y + i));
}

#define HFLOW_DEFINE_KERNEL_LOOP(NAME, ARGS)                                      \
    template <class L>                                                            \
    std::size_t NAME##_loop(const ARGS& a, std::size_t begin, std::size_t end) { \
        std::size_t i = begin;                                                    \
        for (; i + L::width <= end; i += L::width) NAME##_block<L>(a, i);          \
        return i;                                                                 \
    }

HFLOW_DEFINE_KERNEL_LOOP(metric, hflow::simd::MetricArgs)
HFLOW_DEFINE_KERNEL_LOOP(pullback, hflow::simd::PullbackArgs)
HFLOW_DEFINE_KERNEL_LOOP(curvature, hflow::simd::CurvatureArgs)
HFLOW_DEFINE_KERNEL_LOOP(gradient_velocity, hflow::simd::GradientVelocityArgs)
HFLOW_DEFINE_KERNEL_LOOP(hamiltonian_velocity, hflow::simd::HamiltonianVelocityArgs)
HFLOW_DEFINE_KERNEL_LOOP(axpy, hflow::simd::AxpyArgs)

#undef HFLOW_DEFINE_KERNEL_LOOP
