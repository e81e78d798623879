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

#include "balgap/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "balgap/parallel.hpp"

namespace balgap {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

}  // namespace

std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    if (limit >= FactorTable::kMaxHi) {
        throw std::invalid_argument("primes_up_to: limit must be below 2^32");
    }
    // Odd-only sieve: index i stands for 2i + 1.
    const std::size_t half = static_cast<std::size_t>((limit - 1) / 2);
    std::vector<bool> composite(half + 1, false);
    primes.push_back(2);
    for (std::size_t i = 1; i <= half; ++i) {
        if (composite[i]) continue;
        const std::uint64_t p = 2 * i + 1;
        primes.push_back(static_cast<std::uint32_t>(p));
        for (std::uint64_t j = (p * p - 1) / 2; j <= half; j += p) {
            composite[static_cast<std::size_t>(j)] = true;
        }
    }
    return primes;
}

std::vector<std::int8_t> mobius_up_to(std::uint64_t limit) {
    std::vector<std::int8_t> mu(static_cast<std::size_t>(limit) + 1, 0);
    if (limit == 0) return mu;
    mu[1] = 1;
    std::vector<std::uint32_t> primes;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (!composite[i]) {
            primes.push_back(static_cast<std::uint32_t>(i));
            mu[i] = -1;
        }
        for (const std::uint32_t p : primes) {
            const std::uint64_t m = i * p;
            if (m > limit) break;
            composite[m] = true;
            if (i % p == 0) {
                mu[m] = 0;
                break;
            }
            mu[m] = static_cast<std::int8_t>(-mu[i]);
        }
    }
    return mu;
}

FactorTable FactorTable::build(std::uint64_t lo, std::uint64_t hi,
                               const SieveOptions& options) {
    if (lo < 2) throw std::invalid_argument("FactorTable: window start must be >= 2");
    if (hi <= lo) throw std::invalid_argument("FactorTable: window end must exceed start");
    if (hi > kMaxHi) throw std::invalid_argument("FactorTable: window end must be <= 2^32");
    if (options.segment_size == 0) {
        throw std::invalid_argument("FactorTable: segment size must be positive");
    }

    FactorTable table;
    table.lo_ = lo;
    table.hi_ = hi;
    table.small_primes_ = primes_up_to(isqrt(hi - 1));

    const std::size_t length = static_cast<std::size_t>(hi - lo);
    table.spf_.assign(length, 0);
    table.p_plus_.assign(length, 0);
    table.omega_.assign(length, 0);

    const std::size_t seg = options.segment_size;
    const std::size_t segments = (length + seg - 1) / seg;

    parallel_for(segments, options.threads, [&](std::size_t s) {
        const std::size_t begin = s * seg;
        const std::size_t end = std::min(length, begin + seg);
        const std::uint64_t base = lo + begin;

        std::vector<std::uint32_t> rem(end - begin);
        std::vector<std::uint32_t> largest_small(end - begin, 0);
        for (std::size_t i = 0; i < rem.size(); ++i) {
            rem[i] = static_cast<std::uint32_t>(base + i);
        }
        std::uint32_t* spf = table.spf_.data() + begin;
        std::uint8_t* omega = table.omega_.data() + begin;

        for (const std::uint32_t p : table.small_primes_) {
            const std::uint64_t first = (base + p - 1) / p * p;
            for (std::uint64_t m = first; m < lo + end; m += p) {
                const std::size_t i = static_cast<std::size_t>(m - base);
                std::uint32_t r = rem[i];
                unsigned e = 0;
                do {
                    r /= p;
                    ++e;
                } while (r % p == 0);
                rem[i] = r;
                omega[i] = static_cast<std::uint8_t>(omega[i] + e);
                if (spf[i] == 0) spf[i] = p;
                largest_small[i] = p;
            }
        }

        std::uint32_t* p_plus = table.p_plus_.data() + begin;
        for (std::size_t i = 0; i < rem.size(); ++i) {
            if (rem[i] > 1) {
                omega[i] = static_cast<std::uint8_t>(omega[i] + 1);
                p_plus[i] = rem[i];
            } else {
                p_plus[i] = largest_small[i];
            }
        }
    });
    return table;
}

std::size_t FactorTable::index(std::uint64_t n) const {
    if (!contains(n)) {
        throw std::out_of_range("FactorTable: " + std::to_string(n) +
                                " outside window [" + std::to_string(lo_) + ", " +
                                std::to_string(hi_) + ")");
    }
    return static_cast<std::size_t>(n - lo_);
}

std::uint32_t FactorTable::spf_entry(std::uint64_t n) const { return spf_[index(n)]; }

unsigned FactorTable::big_omega(std::uint64_t n) const { return omega_[index(n)]; }

std::uint64_t FactorTable::p_minus(std::uint64_t n) const {
    const std::uint32_t p = spf_[index(n)];
    return p == 0 ? n : p;
}

std::uint64_t FactorTable::p_plus(std::uint64_t n) const { return p_plus_[index(n)]; }

FactorShape FactorTable::shape(std::uint64_t n) const {
    const std::size_t i = index(n);
    const std::uint32_t p = spf_[i];
    return FactorShape(n, omega_[i], p == 0 ? n : p, p_plus_[i]);
}

Factorization factorize(const FactorTable& table, std::uint64_t n) {
    const FactorShape shape = table.shape(n);
    Factorization f;
    f.n = n;
    f.omega_big = shape.omega_big;
    f.p_minus = shape.p_minus;
    f.p_plus = shape.p_plus;

    if (shape.omega_big == 1) {
        f.factors.push_back({n, 1});
        return f;
    }

    std::uint64_t m = n;
    unsigned remaining = shape.omega_big;
    auto divide_out = [&](std::uint64_t p) {
        unsigned e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e > 0) {
            f.factors.push_back({p, e});
            remaining -= e;
        }
    };

    const auto primes = table.small_primes();
    auto it = std::lower_bound(primes.begin(), primes.end(),
                               static_cast<std::uint32_t>(shape.p_minus));
    for (; it != primes.end() && remaining > 1; ++it) {
        const std::uint64_t p = *it;
        if (p * p > m) break;
        divide_out(p);
    }
    // Whatever is left is 1 or a single prime.
    if (m > 1) f.factors.push_back({m, 1});
    return f;
}

int mobius(const Factorization& f) {
    for (const auto& pe : f.factors) {
        if (pe.exponent >= 2) return 0;
    }
    return f.factors.size() % 2 == 0 ? 1 : -1;
}

std::uint64_t euler_phi(const Factorization& f) {
    if (f.n == 0) throw std::domain_error("euler_phi: n must be >= 1");
    std::uint64_t phi = f.n;
    for (const auto& pe : f.factors) {
        phi = phi / pe.prime * (pe.prime - 1);
    }
    return phi;
}

}  // namespace balgap
