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

#include "balgap/density.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "balgap/compensated_sum.hpp"
#include "balgap/parallel.hpp"
#include "balgap/quadrature.hpp"

namespace balgap {

namespace {

constexpr std::size_t kMonteCarloShards = 64;

void check_args(unsigned r, double eps) {
    if (r < 2) throw std::domain_error("C0: r must be >= 2");
    if (!(eps >= 0.0 && eps < 1.0)) throw std::domain_error("C0: eps must lie in [0, 1)");
}

}  // namespace

std::string_view to_string(DensityMethod method) {
    switch (method) {
        case DensityMethod::closed_form: return "closed_form";
        case DensityMethod::quadrature: return "quadrature";
        case DensityMethod::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

DensityResult c0_quadrature(unsigned r, double eps, double abs_tol, double rel_tol) {
    check_args(r, eps);
    DensityResult out{r, eps, 0.0, DensityMethod::quadrature, 0.0};
    if (eps == 0.0) return out;

    const double a1 = (1.0 - eps / 2.0) / r;
    const double a2 = (1.0 + eps / 2.0) / r;

    if (r == 2) {
        // 1 - alpha lies in [a1, a2] for every alpha in the box.
        const auto q = integrate_adaptive(
            [](double a) { return 1.0 / (a * (1.0 - a)); }, a1, a2, abs_tol, rel_tol);
        out.value = q.value;
        out.abs_error_estimate = q.abs_error;
        return out;
    }
    if (r != 3) throw std::domain_error("C0 quadrature: only r = 2 and r = 3 are supported");

    // Inner variable alpha_2 ranges over [a1, a2] intersected with
    // [1 - a2 - alpha_1, 1 - a1 - alpha_1]; both clip points switch at
    // alpha_1 = 1 - a1 - a2, where the outer integrand has a kink.
    double inner_error = 0.0;
    auto inner = [&](double x) {
        const double lo = std::max(a1, 1.0 - a2 - x);
        const double hi = std::min(a2, 1.0 - a1 - x);
        if (hi <= lo) return 0.0;
        const auto q = integrate_adaptive(
            [x](double y) { return 1.0 / (x * y * (1.0 - x - y)); }, lo, hi,
            0.01 * abs_tol, 0.01 * rel_tol);
        inner_error = std::max(inner_error, q.abs_error);
        return q.value;
    };

    const double kink = 1.0 - a1 - a2;
    std::vector<double> cuts = {a1};
    if (kink > a1 && kink < a2) cuts.push_back(kink);
    cuts.push_back(a2);

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const auto q = integrate_adaptive(inner, cuts[i], cuts[i + 1], 0.5 * abs_tol,
                                          rel_tol);
        out.value += q.value;
        out.abs_error_estimate += q.abs_error;
    }
    out.abs_error_estimate += inner_error * (a2 - a1);
    return out;
}

DensityResult c0_monte_carlo(unsigned r, double eps, std::uint64_t samples,
                             std::uint64_t seed, unsigned threads) {
    check_args(r, eps);
    DensityResult out{r, eps, 0.0, DensityMethod::monte_carlo, 0.0};
    if (eps == 0.0) return out;
    if (samples < kMonteCarloShards) {
        throw std::invalid_argument("C0 Monte Carlo: need at least one sample per shard");
    }

    const double a1 = (1.0 - eps / 2.0) / r;
    const double a2 = (1.0 + eps / 2.0) / r;
    const unsigned dims = r - 1;
    const double volume = std::pow(a2 - a1, static_cast<double>(dims));

    struct Moments {
        double sum = 0.0;
        double sum_sq = 0.0;
    };
    std::vector<Moments> shards(kMonteCarloShards);

    parallel_for(kMonteCarloShards, threads, [&](std::size_t shard) {
        const std::uint64_t n = samples / kMonteCarloShards +
                                (shard < samples % kMonteCarloShards ? 1 : 0);
        std::seed_seq seq{static_cast<std::uint32_t>(seed),
                          static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(shard)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> uniform(a1, a2);
        CompensatedSum s, s2;
        for (std::uint64_t i = 0; i < n; ++i) {
            double prod = 1.0, total = 0.0;
            for (unsigned d = 0; d < dims; ++d) {
                const double a = uniform(rng);
                prod *= a;
                total += a;
            }
            const double last = 1.0 - total;
            if (last < a1 || last > a2) continue;
            const double v = 1.0 / (prod * last);
            s += v;
            s2 += v * v;
        }
        shards[shard] = {s.value(), s2.value()};
    });

    CompensatedSum sum, sum_sq;
    for (const auto& m : shards) {
        sum += m.sum;
        sum_sq += m.sum_sq;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum.value() / n;
    const double var = std::max(0.0, sum_sq.value() / n - mean * mean);
    out.value = volume * mean;
    out.abs_error_estimate = volume * std::sqrt(var / n);
    return out;
}

DensityResult c0(unsigned r, double eps, const DensityOptions& options) {
    check_args(r, eps);
    if (r == 2) {
        return {2, eps, 2.0 * std::log((1.0 + eps / 2.0) / (1.0 - eps / 2.0)),
                DensityMethod::closed_form, 0.0};
    }
    if (r == 3) return c0_quadrature(3, eps, options.abs_tol);
    return c0_monte_carlo(r, eps, options.mc_samples, options.seed, options.threads);
}

double c0_upper_bound(unsigned r, double eps) {
    if (r < 2) throw std::domain_error("C0 upper bound: r must be >= 2");
    return r * std::pow(eps, static_cast<double>(r - 1)) /
           std::pow(1.0 - eps / 2.0, static_cast<double>(r));
}

TailSum c0_tail_sum(double eps, unsigned r_max, const DensityOptions& options) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("C0 tail sum: eps must lie in (0, 1)");
    if (r_max < 3) throw std::domain_error("C0 tail sum: r_max must be >= 3");

    TailSum out;
    CompensatedSum sum;
    for (unsigned r = 2; r <= r_max; ++r) {
        out.terms.push_back(c0(r, eps, options));
        sum += out.terms.back().value;
    }
    out.sum = sum.value();

    // sum_{r > R} r x^(r-1) / (1 - eps/2) with x = eps / (1 - eps/2), using
    // sum_{r > R} r x^(r-1) = x^R ((R + 1) - R x) / (1 - x)^2.
    const double x = eps / (1.0 - eps / 2.0);
    if (x >= 1.0) throw std::domain_error("C0 tail sum: bound series diverges for eps >= 2/3");
    const double R = r_max;
    out.tail_bound = std::pow(x, R) * ((R + 1.0) - R * x) /
                     ((1.0 - x) * (1.0 - x) * (1.0 - eps / 2.0));
    out.below_three_eps = out.sum + out.tail_bound < 3.0 * eps;
    return out;
}

}  // namespace balgap
