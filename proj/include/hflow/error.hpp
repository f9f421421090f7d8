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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hflow {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid scenario, parameters or inputs; raised before any computation.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The induced metric became (numerically) singular.
class ImmersionDegenerate : public Error {
public:
    ImmersionDegenerate(std::size_t i1, std::size_t i2, double det_g);

    std::size_t i1() const { return i1_; }
    std::size_t i2() const { return i2_; }
    double det_g() const { return det_g_; }

private:
    std::size_t i1_;
    std::size_t i2_;
    double det_g_;
};

/// sup |A|^2 crossed the configured blowup threshold.
class BlowupDetected : public Error {
public:
    BlowupDetected(double max_norm_sq_a, double threshold);

    double max_norm_sq_a() const { return value_; }

private:
    double value_;
};

/// A check that assumes f^*(omega_2 + i omega_3) = rho was handed a state outside that class.
class NotSpecial : public Error {
public:
    NotSpecial(double max_q, double gate);

    double max_q() const { return max_q_; }

private:
    double max_q_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace hflow
