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

#include "balgap/sieve.hpp"

namespace balgap {

// Log-space comparisons p >= N^a are evaluated as ln p >= a ln N - tol, so
// values sitting exactly on an interval endpoint count as inside.
inline constexpr double kLogTieTolerance = 1e-12;

struct BalanceClassification {
    std::uint64_t n = 0;
    unsigned omega_big = 0;
    // Smallest eps for which n is eps-balanced: 1 - ln P-(n) / ln P+(n).
    double threshold = 0.0;
    bool is_prime = false;
};

// Parameters of the star set: integers in [N, 2N) with exactly r prime
// factors (with multiplicity), all of them in [N^a1, N^a2] where
// a1 = (1 - eps/2)/r and a2 = (1 + eps/2)/r.
class StarSetSpec {
public:
    StarSetSpec(std::uint64_t N, unsigned r, double eps);

    std::uint64_t N() const { return N_; }
    unsigned r() const { return r_; }
    double eps() const { return eps_; }
    double a1() const { return a1_; }
    double a2() const { return a2_; }

    // Window [N, 2N).
    std::uint64_t window_lo() const { return N_; }
    std::uint64_t window_hi() const { return 2 * N_; }

    // True when ln p lies in [a1 ln N, a2 ln N] up to the tie tolerance.
    bool prime_in_interval(std::uint64_t p) const;

private:
    std::uint64_t N_;
    unsigned r_;
    double eps_;
    double a1_;
    double a2_;
    double log_lo_;
    double log_hi_;
};

// eps-balanced test for n >= 2: (1 - eps) ln P+(n) <= ln P-(n) + tol.
// Throws std::domain_error for n < 2 or eps outside [0, 1).
bool is_eps_balanced(const FactorShape& f, double eps);

BalanceClassification classify(const FactorShape& f);

bool in_star_set(const FactorShape& f, const StarSetSpec& spec);

// Prime in [N, 2N) or member of the star set.
bool in_ptilde(const FactorShape& f, const StarSetSpec& spec);

struct StarCount {
    std::uint64_t count = 0;
    // C0(r, eps) N / ln N.
    double predicted = 0.0;
    // Number of ordered r-tuples of primes from [N^a1, N^a2] whose product
    // lies in [N, 2N); each member n contributes its multinomial coefficient.
    std::uint64_t ordered_count = 0;
    double c0 = 0.0;
};

// Exact count of the star set by scanning [N, 2N). The table must cover the
// window; throws std::invalid_argument otherwise.
StarCount count_star(const StarSetSpec& spec, const FactorTable& table);

// #{N <= n < 2N : n eps-balanced, Omega(n) = r}.
std::uint64_t count_eps_r(std::uint64_t N, unsigned r, double eps,
                          const FactorTable& table);

}  // namespace balgap
