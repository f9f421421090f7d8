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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hflow/diagnostics.hpp"

namespace hflow {

struct MonotoneVerdict {
    std::string name;
    bool pass = true;
    double worst_violation = 0.0;  ///< largest step against the expected direction (0 if none)
};

struct TypeOneFit {
    double exponent = 0.0;    ///< p in sup|A|^2 ~ C (T - t)^{-p}
    double blowup_time = 0.0; ///< fitted T
    double log_constant = 0.0;
    double ssr = 0.0;         ///< residual sum of squares of the log-log fit
    std::size_t samples = 0;
};

struct SeriesTolerances {
    double energy_rel = 1e-10;  ///< per-record increase allowed, relative to E(0)
    double lambda_abs = 1e-8;   ///< per-record increase of max lambda
    double mu_abs = 1e-8;       ///< per-record decrease of min mu
    double lambda_band = 1e-6;  ///< slack on [min lambda(0), max lambda(0)]
};

struct SeriesReport {
    std::vector<MonotoneVerdict> verdicts;
    double int_a2_ratio = 0.0;  ///< int |A|^2 dmu at the end over its initial value
    std::optional<TypeOneFit> type_one;

    /// Throws std::out_of_range for an unknown verdict.
    const MonotoneVerdict& verdict(std::string_view name) const;
    bool all_pass() const;
};

/// Verdicts energy_decreasing and max_lambda_nonincreasing always; min_mu_nondecreasing and
/// lambda_within_initial_band when special. The Type-I fit runs when blowup is set.
/// Throws ConfigError for fewer than 10 records.
SeriesReport series_analysis(std::span<const DiagnosticsRecord> records, bool special, bool blowup,
                             const SeriesTolerances& tol = {});

/// Least-squares fit of log y = c - p log(T - t) over the last 20% of the samples, with T
/// chosen by golden-section search to minimise the residual. Throws ConfigError for fewer
/// than 5 usable samples or nonpositive y.
TypeOneFit fit_type_one_rate(std::span<const double> t, std::span<const double> y);

}  // namespace hflow
