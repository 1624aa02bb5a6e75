// Copyright 2026 The bosonic-memory Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace bosonic_memory {

/// Entropy in nats of a single-mode thermal state holding x mean photons:
/// g(x) = (x+1) ln(x+1) - x ln x.
inline double g(double x) {
    if (!(x >= 0.0)) {
        throw std::invalid_argument("g: photon number must be >= 0, got " + std::to_string(x));
    }
    if (x == 0.0) return 0.0;
    // x ln x has a removable singularity at 0; the leading terms of the series
    // are exact to double precision here.
    if (x < 1e-12) return x * (1.0 - std::log(x));
    // (x+1) ln(x+1) - x ln x, rearranged so large x does not cancel.
    return std::log1p(x) + x * std::log1p(1.0 / x);
}

}  // namespace bosonic_memory
