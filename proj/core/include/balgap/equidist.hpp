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
#include <optional>
#include <vector>

#include "balgap/balanced.hpp"
#include "balgap/sieve.hpp"

namespace balgap {

enum class DiscrepancyTarget { primes_le_N, star_set_window };

struct DiscrepancyConfig {
    std::uint64_t N = 0;
    std::uint64_t q_max = 1;
    DiscrepancyTarget target = DiscrepancyTarget::primes_le_N;
    std::optional<StarSetSpec> spec;
};

// floor(sqrt(N) / ln^C N), clamped to at least 1.
std::uint64_t derived_q_max(std::uint64_t N, double C);

struct ModulusRow {
    std::uint64_t q = 0;
    std::uint64_t worst_a = 0;  // smallest a attaining the maximum
    double max_abs_dev = 0.0;
    double main_term = 0.0;
    // Star target only: deviation against C0 (Li(2N) - Li(N)) / phi(q).
    double max_abs_dev_window = 0.0;
    double main_term_window = 0.0;
    // Members in classes coprime to q, and in the remaining classes.
    std::uint64_t coprime_count = 0;
    std::uint64_t other_count = 0;
};

struct DiscrepancyReport {
    std::vector<ModulusRow> per_q;  // ascending q
    double total = 0.0;
    double total_window = 0.0;
    // Li(N) for primes, C0 Li(N) for the star set, sum f(m) Li(N/m) weighted.
    double main_term_used = 0.0;
    std::uint64_t set_size = 0;
};

// Primes p <= N; the table must cover [2, N]. Throws std::invalid_argument
// for q_max >= N or a mismatched target.
DiscrepancyReport bv_prime_discrepancy(const DiscrepancyConfig& cfg, const FactorTable& table);

// Star-set members in [N, 2N); the table must cover the window.
DiscrepancyReport bv_star_discrepancy(const DiscrepancyConfig& cfg, const FactorTable& table);

// For each q, max over coprime a of
//   | sum_{m <= N^(1-alpha)} f(m) (#{p : mp <= N, mp = a mod q} - Li(N/m)/phi(q)) |.
// weights[m] holds f(m) for 1 <= m < weights.size() (index 0 ignored);
// m beyond the table contributes nothing. The table must cover [2, N].
// Throws std::invalid_argument when some |f(m)| > 1 or alpha outside (0, 1).
DiscrepancyReport weighted_discrepancy(const DiscrepancyConfig& cfg, double alpha,
                                       const std::vector<double>& weights,
                                       const FactorTable& table);

}  // namespace balgap
