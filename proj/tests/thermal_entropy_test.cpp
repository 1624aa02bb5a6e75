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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "bosonic_memory/thermal_entropy.hpp"

namespace bm = bosonic_memory;

namespace {

// Reference values from 30-digit arithmetic.
constexpr double kG1 = 1.38629436111989061883;        // 2 ln 2
constexpr double kTwoG07 = 2.30348097512560467766;    // 2 g(0.7)
constexpr double kG085MinusG015 = 0.83094029092572586315;

TEST(ThermalEntropy, ZeroIsZero) { EXPECT_EQ(bm::g(0.0), 0.0); }

TEST(ThermalEntropy, KnownValues) {
    EXPECT_NEAR(bm::g(1.0), kG1, 1e-14);
    EXPECT_NEAR(2.0 * bm::g(0.7), kTwoG07, 1e-14);
    EXPECT_NEAR(bm::g(0.85) - bm::g(0.15), kG085MinusG015, 1e-14);
}

TEST(ThermalEntropy, TinyArgumentsStayFinite) {
    for (double x : {1e-15, 1e-13, 1e-12, 1e-300, std::numeric_limits<double>::denorm_min()}) {
        const double v = bm::g(x);
        EXPECT_TRUE(std::isfinite(v)) << x;
        EXPECT_GE(v, 0.0) << x;
    }
    EXPECT_LT(bm::g(1e-15), 1e-12);
    // Both branches meet at the switch point.
    EXPECT_NEAR(bm::g(0.999999e-12), bm::g(1.000001e-12), 1e-15);
}

TEST(ThermalEntropy, RejectsNegativeAndNaN) {
    EXPECT_THROW(bm::g(-1e-9), std::invalid_argument);
    EXPECT_THROW(bm::g(std::nan("")), std::invalid_argument);
}

TEST(ThermalEntropy, LargeArgumentMatchesAsymptote) {
    // g(x) = ln x + 1 + 1/(2x) + O(1/x^2)
    const double x = 1e6;
    EXPECT_NEAR(bm::g(x), std::log(x) + 1.0 + 0.5 / x, 1e-11);
}

TEST(ThermalEntropy, MonotoneAndConcaveOnGrid) {
    double prev = bm::g(0.0);
    for (int i = 1; i <= 1000; ++i) {
        const double x = 10.0 * i / 1000.0;
        const double v = bm::g(x);
        EXPECT_GT(v, prev) << x;
        prev = v;
    }
    for (int i = 1; i < 1000; ++i) {
        const double h = 0.01;
        const double x = i * h;
        EXPECT_GE(2.0 * bm::g(x), bm::g(x - h) + bm::g(x + h) - 1e-13) << x;
    }
}

TEST(ThermalEntropy, MidpointConcavityRandom) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    for (int i = 0; i < 2000; ++i) {
        const double x = u(rng);
        const double y = u(rng);
        EXPECT_GE(bm::g(0.5 * (x + y)), 0.5 * (bm::g(x) + bm::g(y)) - 1e-13);
    }
}

}  // namespace
