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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "balgap/balanced.hpp"
#include "balgap/sieve.hpp"
#include "balgap/tuples.hpp"

namespace balgap {

// Parameters of the truncated divisor-sum weight
//
//   Lambda_R(n; H, l) = 1/(k+l)! * sum_{d | P_H(n), d <= R} mu(d) ln^(k+l)(R/d),
//   P_H(n) = prod_i (n + h_i).
struct WeightConfig {
    OffsetTuple H;
    unsigned l = 0;
    double R = 2.0;

    // Throws std::invalid_argument for R < 2.
    WeightConfig(OffsetTuple tuple, unsigned l_, double R_);

    unsigned k() const { return static_cast<unsigned>(H.k()); }
    unsigned power() const { return k() + l; }
};

// Largest R the residue-class plan will enumerate.
inline constexpr double kMaxWeightLevel = 1u << 26;

// Reference evaluation: factor every n + h_i, collect the distinct primes
// <= R, and enumerate squarefree products d <= R depth first. The table must
// cover n + h for all h in H.
double lambda_r_naive(std::uint64_t n, const WeightConfig& cfg, const FactorTable& table);

// Precomputed squarefree d <= R (ascending) with mu(d), the term
// mu(d) ln^(k+l)(R/d) / (k+l)!, and the residue classes c mod d with
// P_H(c) = 0 mod d, assembled by CRT from the roots -h mod p.
class WeightPlan {
public:
    explicit WeightPlan(const WeightConfig& cfg);

    const WeightConfig& config() const { return cfg_; }
    std::size_t divisor_count() const { return divisors_.size(); }
    std::uint64_t divisor(std::size_t i) const { return divisors_[i]; }
    double term(std::size_t i) const { return terms_[i]; }
    std::span<const std::uint32_t> classes(std::size_t i) const;
    std::size_t total_classes() const { return classes_.size(); }

    // Weights for n in [lo, lo + out.size()); each entry sums its terms in
    // increasing d with compensated summation.
    void evaluate(std::uint64_t lo, std::span<double> out) const;

private:
    WeightConfig cfg_;
    std::vector<std::uint32_t> divisors_;
    std::vector<double> terms_;
    std::vector<std::size_t> class_offsets_;
    std::vector<std::uint32_t> classes_;
};

// Weights for every n in [lo, hi). Throws std::invalid_argument when R
// exceeds kMaxWeightLevel or hi <= lo.
std::vector<double> lambda_r_batch(std::uint64_t lo, std::uint64_t hi, const WeightConfig& cfg);

enum class MomentVariant { lemma1, lemma2, lemma3, s_statistic };

std::string_view to_string(MomentVariant variant);

struct StarParams {
    unsigned r = 0;
    double eps = 0.0;
    double c0 = 0.0;
};

struct MomentReport {
    MomentVariant variant = MomentVariant::lemma1;
    std::uint64_t N = 0;
    std::vector<std::uint64_t> H;
    unsigned k = 0;
    unsigned l = 0;
    double R = 0.0;

    double empirical = 0.0;
    double predicted_main_term = 0.0;
    // empirical / predicted_main_term, or 0 when the prediction vanishes.
    double ratio = 0.0;
    double singular_series = 0.0;

    std::optional<std::uint64_t> h;
    std::optional<StarParams> star;
    // n whose indicator fired (lemma2/lemma3), or n with at least two hits
    // among n + h_i (s_statistic).
    std::uint64_t hits = 0;
    bool degenerate = false;
    std::vector<std::string> warnings;
};

struct MomentOptions {
    unsigned threads = 1;
    std::size_t chunk = std::size_t{1} << 18;
    std::uint64_t singular_p_max = 1'000'000;
    // Exponent C in the range checks R <= sqrt(N)/ln^C N and R <= N^(1/4)/ln^C N.
    double log_power = 1.0;
};

// Main terms as functions of (N, k, l, R, singular series).
double lemma1_main_term(std::uint64_t N, unsigned k, unsigned l, double R, double sing);
double lemma2_main_term(std::uint64_t N, unsigned k, unsigned l, double R, double sing);

// sum_{N <= n < 2N} Lambda^2.
MomentReport moment_lemma1(std::uint64_t N, const WeightConfig& cfg,
                           const MomentOptions& options = {});

// sum Lambda^2 chi_P(n + h) over all primes P. The table must cover
// [N, 2N + max h).
MomentReport moment_lemma2(std::uint64_t N, const WeightConfig& cfg, std::uint64_t h,
                           const FactorTable& table, const MomentOptions& options = {});

// sum Lambda^2 chi(n + h) for the union of primes in [N, 2N) and the star set.
MomentReport moment_lemma3(std::uint64_t N, const WeightConfig& cfg, std::uint64_t h,
                           const StarSetSpec& spec, const FactorTable& table,
                           const MomentOptions& options = {});

// S = sum (sum_i chi(n + h_i) - 1) Lambda^2 with the same indicator as lemma3.
MomentReport s_statistic(std::uint64_t N, const WeightConfig& cfg, const StarSetSpec& spec,
                         const FactorTable& table, const MomentOptions& options = {});

}  // namespace balgap
