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

#include <memory>
#include <span>
#include <string_view>

#include "hflow/types.hpp"

namespace hflow {

enum class Scheme { central4, spectral };

std::string_view scheme_name(Scheme s);
/// Throws ConfigError on an unknown name.
Scheme parse_scheme(std::string_view name);

struct FirstDerivatives {
    ScalarField d1;
    ScalarField d2;
};

struct AllDerivatives {
    ScalarField d1, d2, d11, d12, d22;
};

/// Periodic differentiation on the unit square, componentwise on grid data.
///
/// spectral: Fourier differentiation (odd derivatives drop the Nyquist mode).
/// central4: fourth-order central differences; mixed partials are D1(D2 u).
///
/// Holds scratch buffers, so a single operator must not be shared between
/// threads; construct one per worker.
class DerivativeOperator {
public:
    DerivativeOperator(Grid grid, Scheme scheme);
    ~DerivativeOperator();
    DerivativeOperator(DerivativeOperator&&) noexcept;
    DerivativeOperator& operator=(DerivativeOperator&&) noexcept;

    const Grid& grid() const { return grid_; }
    Scheme scheme() const { return scheme_; }

    void first(std::span<const double> u, FirstDerivatives& out) const;
    void all(std::span<const double> u, AllDerivatives& out) const;

    ScalarField d1(std::span<const double> u) const;
    ScalarField d2(std::span<const double> u) const;

private:
    struct Spectral;

    Grid grid_;
    Scheme scheme_;
    std::unique_ptr<Spectral> spectral_;
};

}  // namespace hflow
