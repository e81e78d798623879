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

#include "balgap/tuples.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "balgap/compensated_sum.hpp"
#include "balgap/density.hpp"
#include "balgap/sieve.hpp"

namespace balgap {

OffsetTuple::OffsetTuple(std::vector<std::uint64_t> offsets) : offsets_(std::move(offsets)) {
    if (offsets_.empty()) throw std::invalid_argument("OffsetTuple: empty tuple");
    for (std::size_t i = 1; i < offsets_.size(); ++i) {
        if (offsets_[i] <= offsets_[i - 1]) {
            throw std::invalid_argument("OffsetTuple: offsets must be strictly increasing");
        }
    }
}

bool OffsetTuple::contains(std::uint64_t h) const {
    return std::binary_search(offsets_.begin(), offsets_.end(), h);
}

OffsetTuple OffsetTuple::shifted(std::uint64_t c) const {
    std::vector<std::uint64_t> out(offsets_);
    for (auto& h : out) h += c;
    return OffsetTuple(std::move(out));
}

unsigned nu_p(const OffsetTuple& H, std::uint64_t p) {
    if (p < 2) throw std::invalid_argument("nu_p: p must be prime");
    if (p > H.k() && p > H.diameter()) {
        return static_cast<unsigned>(H.k());
    }
    std::vector<std::uint64_t> residues;
    residues.reserve(H.k());
    for (const auto h : H.offsets()) residues.push_back(h % p);
    std::sort(residues.begin(), residues.end());
    return static_cast<unsigned>(
        std::unique(residues.begin(), residues.end()) - residues.begin());
}

bool is_admissible(const OffsetTuple& H) {
    for (const auto p : primes_up_to(H.k())) {
        if (nu_p(H, p) >= p) return false;
    }
    return true;
}

SingularSeriesValue singular_series(const OffsetTuple& H, std::uint64_t p_max) {
    const std::uint64_t k = H.k();
    if (p_max < k) throw std::invalid_argument("singular_series: p_max must be >= k");

    SingularSeriesValue out;
    // Past max(2k, diameter) every factor has nu_p = k, and with t = k/p <= 1/2
    //   |ln((1 - k/p)(1 - 1/p)^-k)| <= sum_{j>=2} k^j / (j p^j)
    //                               <= (k/p)^2 / (2 (1 - k/p)) <= k^2 / p^2.
    // Summing k^2 / n^2 over odd n > P gives the bound below.
    out.p_max = std::max({p_max, 2 * k, H.diameter() + 1});
    if (!is_admissible(H)) {
        out.value = 0.0;
        out.tail_log_bound = 0.0;
        return out;
    }

    CompensatedSum log_value;
    const double kd = static_cast<double>(k);
    for (const auto p32 : primes_up_to(out.p_max)) {
        const double p = p32;
        const unsigned nu = nu_p(H, p32);
        log_value += std::log1p(-static_cast<double>(nu) / p) - kd * std::log1p(-1.0 / p);
    }
    out.value = std::exp(log_value.value());
    const double P = static_cast<double>(out.p_max) + 1.0;
    out.tail_log_bound = kd * kd * (1.0 / (2.0 * P) + 1.0 / (P * P));
    return out;
}

OffsetTuple generate_tuple(unsigned k) {
    if (k == 0) throw std::invalid_argument("generate_tuple: k must be >= 1");

    const auto primes = primes_up_to(k);
    std::uint64_t span = 4 * static_cast<std::uint64_t>(k) + 16;
    for (;;) {
        std::vector<std::uint64_t> survivors(span);
        for (std::uint64_t i = 0; i < span; ++i) survivors[i] = i;

        bool exhausted = false;
        for (const auto p : primes) {
            std::uint64_t best_class = 0;
            std::uint64_t best_width = UINT64_MAX;
            for (std::uint64_t c = 1; c < p; ++c) {
                std::size_t kept = 0;
                std::uint64_t width = UINT64_MAX;
                for (const auto x : survivors) {
                    if (x % p == c) continue;
                    if (++kept == k) {
                        width = x;
                        break;
                    }
                }
                if (width < best_width) {
                    best_width = width;
                    best_class = c;
                }
            }
            if (best_width == UINT64_MAX) {
                exhausted = true;
                break;
            }
            std::erase_if(survivors, [&](std::uint64_t x) { return x % p == best_class; });
        }
        if (!exhausted && survivors.size() >= k) {
            survivors.resize(k);
            return OffsetTuple(std::move(survivors));
        }
        span *= 2;
    }
}

GpyConstants gpy_constants(double theta) {
    if (!(theta > 0.5 && theta <= 1.0)) {
        throw std::domain_error("gpy_constants: theta must lie in (1/2, 1]");
    }
    GpyConstants out;
    out.theta = theta;
    out.delta = theta - 0.5;
    // theta = 1/2 + delta is usually typed as a decimal, so 1/(2 delta) can land
    // a few ulps above an integer; snap before taking the ceiling.
    const double x = 1.0 / (2.0 * out.delta);
    const double nearest = std::round(x);
    const double ceil_x = std::fabs(x - nearest) < 1e-9 * nearest ? nearest : std::ceil(x);
    const auto m = static_cast<std::uint64_t>(2 * ceil_x + 1);
    out.k0 = m * m;
    out.c_asymptotic = 2.0 / (out.delta * out.delta) * std::log(1.0 / out.delta);
    if (theta >= TabulatedConstants{}.theta) out.tabulated = TabulatedConstants{};
    return out;
}

double positivity_factor(unsigned k, unsigned l, double c0_value) {
    const double kd = k, ld = l;
    return kd / (kd + 2 * ld + 1) * (2 * ld + 1) / (2 * ld + 2) * (1.0 + c0_value) - 1.0;
}

MinKResult min_k_for_two_c0(double c0_value, unsigned k_cap) {
    if (c0_value < 0.0) throw std::domain_error("min_k_for_two: C0 must be non-negative");
    MinKResult out;
    out.c0 = c0_value;
    for (unsigned k = 1; k <= k_cap; ++k) {
        if (!out.k_optimal_l) {
            unsigned best_l = 0;
            double best = positivity_factor(k, 0, c0_value);
            for (unsigned l = 1; l <= k; ++l) {
                const double f = positivity_factor(k, l, c0_value);
                if (f > best) {
                    best = f;
                    best_l = l;
                }
            }
            if (best > 0.0) {
                out.k_optimal_l = k;
                out.l_optimal = best_l;
            }
        }
        if (!out.k_sqrt_l) {
            const auto l = static_cast<unsigned>(std::floor(std::sqrt(static_cast<double>(k)) / 2));
            if (positivity_factor(k, l, c0_value) > 0.0) {
                out.k_sqrt_l = k;
                out.l_sqrt = l;
            }
        }
        if (out.k_optimal_l && out.k_sqrt_l) break;
    }
    return out;
}

MinKResult min_k_for_two(unsigned r, double eps, unsigned k_cap) {
    if (r != 2 && r != 3) throw std::domain_error("min_k_for_two: r must be 2 or 3");
    if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("min_k_for_two: eps must lie in (0, 1)");
    return min_k_for_two_c0(c0(r, eps).value, k_cap);
}

}  // namespace balgap
