// Copyright 2026 The balgap Authors
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

#include <cmath>
#include <stdexcept>

#include "balgap/density.hpp"
#include "doctest.h"

using namespace balgap;

namespace {

double closed_form(double eps) { return 2.0 * std::log((1 + eps / 2) / (1 - eps / 2)); }

}  // namespace

TEST_CASE("r = 2 closed form") {
    CHECK(c0(2, 0.0).value == 0.0);
    const auto r = c0(2, 0.1);
    CHECK(r.method == DensityMethod::closed_form);
    // Antiderivative ln(a / (1 - a)) between a1 = 0.475 and a2 = 0.525.
    CHECK(r.value == doctest::Approx(std::log(0.525 / 0.475) - std::log(0.475 / 0.525)).epsilon(1e-15));
    CHECK(r.value == doctest::Approx(0.2001669).epsilon(1e-7));
    CHECK(c0(2, 0.01).value == doctest::Approx(0.0200002).epsilon(1e-6));
}

TEST_CASE("quadrature reproduces the closed form") {
    for (const double eps : {0.01, 0.05, 0.1, 0.2, 0.3, 0.5}) {
        const auto q = c0_quadrature(2, eps, 0.0, 1e-13);
        CHECK(std::fabs(q.value - closed_form(eps)) <= 1e-10 * closed_form(eps));
    }
}

TEST_CASE("r = 3 quadrature") {
    // Frozen from a 30-digit quadrature of the analytically integrated inner
    // variable, split at the kink 1 - a1 - a2.
    struct Pinned {
        double eps, value;
    };
    for (const auto [eps, expected] : {Pinned{0.05, 0.00562646535666039902},
                                       Pinned{0.1, 0.0225234703676392984},
                                       Pinned{0.2, 0.0903771141954184222},
                                       Pinned{0.3, 0.204422725087846131}}) {
        const auto r = c0(3, eps);
        CHECK(r.method == DensityMethod::quadrature);
        CHECK(std::fabs(r.value - expected) <= 1e-9);
        CHECK(r.abs_error_estimate <= 1e-9);
    }
    CHECK(c0(3, 0.0).value == 0.0);
}

TEST_CASE("Monte Carlo agrees with quadrature for r = 3") {
    const auto q = c0(3, 0.1);
    const auto mc = c0_monte_carlo(3, 0.1, 100'000'000, 7, 1);
    CHECK(mc.method == DensityMethod::monte_carlo);
    CHECK(std::fabs(mc.value - q.value) <= 3 * mc.abs_error_estimate);
    CHECK(mc.abs_error_estimate < 1e-5);
}

TEST_CASE("Monte Carlo is deterministic across thread counts") {
    const auto a = c0_monte_carlo(4, 0.2, 200'000, 99, 1);
    const auto b = c0_monte_carlo(4, 0.2, 200'000, 99, 4);
    CHECK(a.value == b.value);
    CHECK(a.abs_error_estimate == b.abs_error_estimate);
    const auto c = c0_monte_carlo(4, 0.2, 200'000, 100, 1);
    CHECK(a.value != c.value);
}

TEST_CASE("Monte Carlo r = 2 matches the closed form") {
    const auto mc = c0_monte_carlo(2, 0.3, 2'000'000, 3);
    CHECK(std::fabs(mc.value - closed_form(0.3)) <= 4 * mc.abs_error_estimate);
}

TEST_CASE("upper bound") {
    CHECK(c0_upper_bound(2, 0.1) == doctest::Approx(0.2 / (0.95 * 0.95)).epsilon(1e-15));
    CHECK(c0_upper_bound(2, 0.1) == doctest::Approx(0.221607).epsilon(1e-6));
    CHECK(c0_upper_bound(3, 0.1) == doctest::Approx(0.03 / (0.95 * 0.95 * 0.95)).epsilon(1e-15));
    CHECK(c0_upper_bound(3, 1e-9) < 1e-17);
}

TEST_CASE("monotone in eps and below the bound") {
    for (const unsigned r : {2u, 3u}) {
        double prev = -1;
        for (int i = 1; i <= 20; ++i) {
            const double eps = 0.01 * i;
            const double v = c0(r, eps).value;
            CHECK(v > prev);
            CHECK(v <= c0_upper_bound(r, eps));
            prev = v;
        }
    }
}

TEST_CASE("tail sum") {
    const auto t = c0_tail_sum(0.05, 6);
    CHECK(t.terms.size() == 5);
    CHECK(t.sum + t.tail_bound < 0.15);
    CHECK(t.below_three_eps);

    const auto small = c0_tail_sum(0.01, 8);
    CHECK(small.sum == doctest::Approx(closed_form(0.01)).epsilon(2e-3));
    // r = 3 is already about one percent at eps = 0.01.
    CHECK(small.terms.front().value / small.sum > 0.98);

    CHECK(c0_tail_sum(1e-6, 3).sum < 1e-5);

    // Geometric tail matches explicit summation of the bound.
    double explicit_tail = 0;
    for (unsigned r = 7; r < 200; ++r) explicit_tail += c0_upper_bound(r, 0.05);
    CHECK(t.tail_bound == doctest::Approx(explicit_tail).epsilon(1e-12));
}

TEST_CASE("argument errors") {
    CHECK_THROWS_AS(c0(1, 0.1), std::domain_error);
    CHECK_THROWS_AS(c0(2, 1.0), std::domain_error);
    CHECK_THROWS_AS(c0(2, -0.1), std::domain_error);
    CHECK_THROWS_AS(c0_quadrature(4, 0.1, 1e-9), std::domain_error);
    CHECK_THROWS_AS(c0_tail_sum(0.1, 2), std::domain_error);
}
