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

#include "balgap/balanced.hpp"

#include <cmath>
#include <stdexcept>

#include "balgap/density.hpp"

namespace balgap {

namespace {

void require_window(const FactorTable& table, std::uint64_t lo, std::uint64_t hi) {
    if (table.lo() > lo || table.hi() < hi) {
        throw std::invalid_argument("factor table does not cover [N, 2N)");
    }
}

std::uint64_t factorial(unsigned n) {
    std::uint64_t f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

StarSetSpec::StarSetSpec(std::uint64_t N, unsigned r, double eps)
    : N_(N), r_(r), eps_(eps) {
    if (N < 2) throw std::invalid_argument("StarSetSpec: N must be >= 2");
    if (r < 1) throw std::invalid_argument("StarSetSpec: r must be >= 1");
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("StarSetSpec: eps must lie in (0, 1)");
    }
    a1_ = (1.0 - eps / 2.0) / r;
    a2_ = (1.0 + eps / 2.0) / r;
    const double lnN = std::log(static_cast<double>(N));
    log_lo_ = a1_ * lnN - kLogTieTolerance;
    log_hi_ = a2_ * lnN + kLogTieTolerance;
}

bool StarSetSpec::prime_in_interval(std::uint64_t p) const {
    const double lp = std::log(static_cast<double>(p));
    return lp >= log_lo_ && lp <= log_hi_;
}

bool is_eps_balanced(const FactorShape& f, double eps) {
    if (f.n < 2) throw std::domain_error("is_eps_balanced: n must be >= 2");
    if (!(eps >= 0.0 && eps < 1.0)) {
        throw std::domain_error("is_eps_balanced: eps must lie in [0, 1)");
    }
    if (f.p_minus == f.p_plus) return true;
    const double lo = std::log(static_cast<double>(f.p_minus));
    const double hi = std::log(static_cast<double>(f.p_plus));
    return (1.0 - eps) * hi <= lo + kLogTieTolerance;
}

BalanceClassification classify(const FactorShape& f) {
    if (f.n < 2) throw std::domain_error("classify: n must be >= 2");
    BalanceClassification c;
    c.n = f.n;
    c.omega_big = f.omega_big;
    c.is_prime = f.omega_big == 1;
    c.threshold = f.p_minus == f.p_plus
                      ? 0.0
                      : 1.0 - std::log(static_cast<double>(f.p_minus)) /
                                  std::log(static_cast<double>(f.p_plus));
    return c;
}

bool in_star_set(const FactorShape& f, const StarSetSpec& spec) {
    if (f.n < spec.window_lo() || f.n >= spec.window_hi()) return false;
    if (f.omega_big != spec.r()) return false;
    return spec.prime_in_interval(f.p_minus) && spec.prime_in_interval(f.p_plus);
}

bool in_ptilde(const FactorShape& f, const StarSetSpec& spec) {
    if (f.n < spec.window_lo() || f.n >= spec.window_hi()) return false;
    return f.is_prime() || in_star_set(f, spec);
}

StarCount count_star(const StarSetSpec& spec, const FactorTable& table) {
    require_window(table, spec.window_lo(), spec.window_hi());
    StarCount out;
    const unsigned r = spec.r();
    const std::uint64_t r_fact = factorial(r);
    for (std::uint64_t n = spec.window_lo(); n < spec.window_hi(); ++n) {
        const FactorShape s = table.shape(n);
        if (!in_star_set(s, spec)) continue;
        ++out.count;
        if (r == 1) {
            out.ordered_count += 1;
        } else if (s.p_minus == s.p_plus) {
            out.ordered_count += 1;
        } else {
            std::uint64_t arrangements = r_fact;
            for (const auto& pe : factorize(table, n).factors) {
                arrangements /= factorial(pe.exponent);
            }
            out.ordered_count += arrangements;
        }
    }
    if (r >= 2) {
        out.c0 = c0(r, spec.eps()).value;
        const double N = static_cast<double>(spec.N());
        out.predicted = out.c0 * N / std::log(N);
    }
    return out;
}

std::uint64_t count_eps_r(std::uint64_t N, unsigned r, double eps,
                          const FactorTable& table) {
    if (N < 2) throw std::invalid_argument("count_eps_r: N must be >= 2");
    require_window(table, N, 2 * N);
    std::uint64_t count = 0;
    for (std::uint64_t n = N; n < 2 * N; ++n) {
        const FactorShape s = table.shape(n);
        if (s.omega_big == r && is_eps_balanced(s, eps)) ++count;
    }
    return count;
}

}  // namespace balgap
