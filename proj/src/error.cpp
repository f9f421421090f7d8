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

#include "hflow/error.hpp"

#include <sstream>

namespace hflow {

namespace {

std::string degenerate_message(std::size_t i1, std::size_t i2, double det_g) {
    std::ostringstream os;
    os << "immersion degenerate at grid point (" << i1 << ", " << i2 << "): det g = " << det_g;
    return os.str();
}

std::string blowup_message(double value, double threshold) {
    std::ostringstream os;
    os << "curvature blowup: sup |A|^2 = " << value << " exceeds " << threshold;
    return os.str();
}

std::string not_special_message(double max_q, double gate) {
    std::ostringstream os;
    os << "state is not in the special class: max Q = " << max_q << " > gate " << gate;
    return os.str();
}

}  // namespace

ImmersionDegenerate::ImmersionDegenerate(std::size_t i1, std::size_t i2, double det_g)
    : Error(degenerate_message(i1, i2, det_g)), i1_(i1), i2_(i2), det_g_(det_g) {}

BlowupDetected::BlowupDetected(double max_norm_sq_a, double threshold)
    : Error(blowup_message(max_norm_sq_a, threshold)), value_(max_norm_sq_a) {}

NotSpecial::NotSpecial(double max_q, double gate)
    : Error(not_special_message(max_q, gate)), max_q_(max_q) {}

}  // namespace hflow
