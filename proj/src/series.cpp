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

#include "hflow/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hflow/error.hpp"

namespace hflow {

const MonotoneVerdict& SeriesReport::verdict(std::string_view name) const {
    for (const auto& v : verdicts)
        if (v.name == name) return v;
    throw std::out_of_range("no verdict named " + std::string(name));
}

bool SeriesReport::all_pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const MonotoneVerdict& v) { return v.pass; });
}

namespace {

// sign = +1 checks nonincreasing, -1 nondecreasing.
template <class Get>
MonotoneVerdict monotone(std::string name, std::span<const DiagnosticsRecord> r, Get get, double sign,
                         double tol) {
    MonotoneVerdict v{std::move(name), true, 0.0};
    for (std::size_t i = 1; i < r.size(); ++i)
        v.worst_violation = std::max(v.worst_violation, sign * (get(r[i]) - get(r[i - 1])));
    v.pass = v.worst_violation <= tol;
    return v;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double ssr = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxx > 0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        f.ssr += e * e;
    }
    return f;
}

}  // namespace

TypeOneFit fit_type_one_rate(std::span<const double> t, std::span<const double> y) {
    if (t.size() != y.size()) throw ConfigError("time and value series differ in length");
    const std::size_t n = t.size();
    const std::size_t first = n - std::max<std::size_t>(n / 5, std::min<std::size_t>(n, 5));
    if (n - first < 5) throw ConfigError("type-I fit needs at least 5 samples");
    std::vector<double> tt(t.begin() + first, t.end());
    std::vector<double> ly;
    for (std::size_t i = first; i < n; ++i) {
        if (!(y[i] > 0.0)) throw ConfigError("type-I fit needs positive values");
        ly.push_back(std::log(y[i]));
    }
    const double t_last = tt.back();
    const double width = t_last - tt.front();
    if (!(width > 0.0)) throw ConfigError("type-I fit needs increasing times");

    std::vector<double> x(tt.size());
    auto evaluate = [&](double big_t) {
        for (std::size_t i = 0; i < tt.size(); ++i) x[i] = -std::log(big_t - tt[i]);
        return fit_line(x, ly);
    };

    // Search T - t_last on a log scale between 1e-6 and 10 window widths.
    double lo = std::log(1e-6 * width), hi = std::log(10.0 * width);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    double fa = evaluate(t_last + std::exp(a)).ssr, fb = evaluate(t_last + std::exp(b)).ssr;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = evaluate(t_last + std::exp(a)).ssr;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = evaluate(t_last + std::exp(b)).ssr;
        }
    }
    const double big_t = t_last + std::exp(0.5 * (lo + hi));
    const LineFit f = evaluate(big_t);
    TypeOneFit out;
    out.exponent = f.slope;
    out.blowup_time = big_t;
    out.log_constant = f.intercept;
    out.ssr = f.ssr;
    out.samples = tt.size();
    return out;
}

SeriesReport series_analysis(std::span<const DiagnosticsRecord> r, bool special, bool blowup,
                             const SeriesTolerances& tol) {
    if (r.size() < 10) throw ConfigError("series analysis needs at least 10 records");
    SeriesReport rep;
    const DiagnosticsRecord& r0 = r.front();
    rep.verdicts.push_back(monotone("energy_decreasing", r, [](const auto& x) { return x.energy; }, 1.0,
                                    tol.energy_rel * r0.energy));
    rep.verdicts.push_back(monotone("max_lambda_nonincreasing", r,
                                    [](const auto& x) { return x.max_lambda; }, 1.0, tol.lambda_abs));
    if (special) {
        rep.verdicts.push_back(
            monotone("min_mu_nondecreasing", r, [](const auto& x) { return x.min_mu; }, -1.0, tol.mu_abs));
        MonotoneVerdict band{"lambda_within_initial_band", true, 0.0};
        for (const auto& x : r)
            band.worst_violation = std::max({band.worst_violation, r0.min_lambda - x.min_lambda,
                                             x.max_lambda - r0.max_lambda});
        band.pass = band.worst_violation <= tol.lambda_band;
        rep.verdicts.push_back(band);
    }
    rep.int_a2_ratio = r0.int_a_sq_dmu > 0.0 ? r.back().int_a_sq_dmu / r0.int_a_sq_dmu : 0.0;
    if (blowup) {
        std::vector<double> t, y;
        for (const auto& x : r) {
            t.push_back(x.t);
            y.push_back(x.max_norm_sq_a);
        }
        rep.type_one = fit_type_one_rate(t, y);
    }
    return rep;
}

}  // namespace hflow
