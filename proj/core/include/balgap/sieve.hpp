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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace balgap {

struct PrimePower {
    std::uint64_t prime = 0;
    unsigned exponent = 0;

    bool operator==(const PrimePower&) const = default;
};

// Complete prime factorization of one integer. For n = 1 the factor list is
// empty, omega_big is 0, and p_minus = p_plus = 1.
struct Factorization {
    std::uint64_t n = 1;
    std::vector<PrimePower> factors;
    unsigned omega_big = 0;
    std::uint64_t p_minus = 1;
    std::uint64_t p_plus = 1;
};

// The part of a factorization the classification code needs: Omega(n), the
// least and the greatest prime factor. FactorTable produces these in O(1)
// without materializing the factor list.
struct FactorShape {
    std::uint64_t n = 1;
    unsigned omega_big = 0;
    std::uint64_t p_minus = 1;
    std::uint64_t p_plus = 1;

    FactorShape() = default;
    FactorShape(std::uint64_t n_, unsigned omega, std::uint64_t lo_prime,
                std::uint64_t hi_prime)
        : n(n_), omega_big(omega), p_minus(lo_prime), p_plus(hi_prime) {}
    FactorShape(const Factorization& f)  // NOLINT(google-explicit-constructor)
        : n(f.n), omega_big(f.omega_big), p_minus(f.p_minus), p_plus(f.p_plus) {}

    bool is_prime() const { return omega_big == 1; }
};

struct SieveOptions {
    std::size_t segment_size = std::size_t{1} << 22;
    unsigned threads = 1;
};

// Smallest-prime-factor index over the half-open window [lo, hi), together
// with Omega(n) and the greatest prime factor of every entry. Immutable after
// construction. Values are stored in 32 bits, so hi may not exceed 2^32.
class FactorTable {
public:
    static constexpr std::uint64_t kMaxHi = std::uint64_t{1} << 32;

    static FactorTable build(std::uint64_t lo, std::uint64_t hi,
                             const SieveOptions& options = {});

    std::uint64_t lo() const { return lo_; }
    std::uint64_t hi() const { return hi_; }
    std::size_t size() const { return static_cast<std::size_t>(hi_ - lo_); }
    bool contains(std::uint64_t n) const { return n >= lo_ && n < hi_; }

    // Recorded smallest prime factor, or 0 when n has no prime factor
    // <= sqrt(hi - 1), i.e. n itself is prime.
    std::uint32_t spf_entry(std::uint64_t n) const;

    bool is_prime(std::uint64_t n) const { return big_omega(n) == 1; }
    unsigned big_omega(std::uint64_t n) const;
    std::uint64_t p_minus(std::uint64_t n) const;
    std::uint64_t p_plus(std::uint64_t n) const;
    FactorShape shape(std::uint64_t n) const;

    // Primes up to sqrt(hi - 1), ascending.
    std::span<const std::uint32_t> small_primes() const { return small_primes_; }

private:
    FactorTable() = default;
    std::size_t index(std::uint64_t n) const;

    std::uint64_t lo_ = 0;
    std::uint64_t hi_ = 0;
    std::vector<std::uint32_t> small_primes_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint32_t> p_plus_;
    std::vector<std::uint8_t> omega_;
};

// Throws std::out_of_range unless table.contains(n).
Factorization factorize(const FactorTable& table, std::uint64_t n);

int mobius(const Factorization& f);
std::uint64_t euler_phi(const Factorization& f);

// All primes <= limit, ascending.
std::vector<std::uint32_t> primes_up_to(std::uint64_t limit);

// mu(0..limit) by a linear sieve; entry 0 is unused and set to 0.
std::vector<std::int8_t> mobius_up_to(std::uint64_t limit);

// Offset logarithmic integral Li(x) = integral from 2 to x of dt / ln t.
// Throws std::domain_error for x < 2.
double log_integral(double x);

}  // namespace balgap
