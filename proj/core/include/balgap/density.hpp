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

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace balgap {

enum class DensityMethod { closed_form, quadrature, monte_carlo };

std::string_view to_string(DensityMethod method);

// Density constant of the star set relative to N / ln N:
//
//   C0(r, eps) = integral over [a1, a2]^(r-1) of
//                  d alpha / (alpha_1 ... alpha_{r-1} (1 - sum alpha))
//
// restricted to a1 <= 1 - sum alpha <= a2, so that the last prime factor also
// lands in the interval.
struct DensityResult {
    unsigned r = 0;
    double eps = 0.0;
    double value = 0.0;
    DensityMethod method = DensityMethod::closed_form;
    double abs_error_estimate = 0.0;
};

struct DensityOptions {
    double abs_tol = 1e-9;
    std::uint64_t mc_samples = std::uint64_t{1} << 22;
    std::uint64_t seed = 0x5eed'ba1a'2c3d'0001ULL;
    unsigned threads = 1;
};

// r = 2: closed form 2 ln((1 + eps/2) / (1 - eps/2)); r = 3: quadrature;
// r >= 4: Monte Carlo. Throws std::domain_error for r < 2 or eps outside
// [0, 1).
DensityResult c0(unsigned r, double eps, const DensityOptions& options = {});

// Iterated adaptive Gauss-Kronrod over the constrained region; r in {2, 3}.
DensityResult c0_quadrature(unsigned r, double eps, double abs_tol, double rel_tol = 0.0);

// Uniform sampling of the box with the constraint as an indicator. Samples
// are split into a fixed number of independently seeded shards and reduced
// in shard order, so the result does not depend on the thread count.
DensityResult c0_monte_carlo(unsigned r, double eps, std::uint64_t samples,
                             std::uint64_t seed, unsigned threads = 1);

// r eps^(r-1) / (1 - eps/2)^r.
double c0_upper_bound(unsigned r, double eps);

struct TailSum {
    double sum = 0.0;         // sum of C0(r, eps) for 2 <= r <= r_max
    double tail_bound = 0.0;  // sum of the upper bound over r > r_max
    bool below_three_eps = false;
    std::vector<DensityResult> terms;
};

TailSum c0_tail_sum(double eps, unsigned r_max, const DensityOptions& options = {});

}  // namespace balgap
