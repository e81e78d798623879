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
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace balgap {

// A set of distinct non-negative offsets h_1 < ... < h_k. Admissibility is a
// property queried with is_admissible(), not a construction requirement.
class OffsetTuple {
public:
    // Throws std::invalid_argument unless offsets are strictly increasing
    // and non-empty.
    explicit OffsetTuple(std::vector<std::uint64_t> offsets);

    std::span<const std::uint64_t> offsets() const { return offsets_; }
    std::size_t k() const { return offsets_.size(); }
    std::uint64_t diameter() const { return offsets_.back() - offsets_.front(); }
    std::uint64_t max_offset() const { return offsets_.back(); }
    bool contains(std::uint64_t h) const;
    OffsetTuple shifted(std::uint64_t c) const;

    bool operator==(const OffsetTuple&) const = default;

private:
    std::vector<std::uint64_t> offsets_;
};

// Number of residue classes mod p occupied by the tuple.
unsigned nu_p(const OffsetTuple& H, std::uint64_t p);

// nu_p(H) < p for every prime p <= k.
bool is_admissible(const OffsetTuple& H);

struct SingularSeriesValue {
    double value = 0.0;
    // Largest prime bound actually used; at least the requested p_max and
    // large enough that every omitted factor has nu_p = k and p >= 2k.
    std::uint64_t p_max = 0;
    // Bound on |ln(full product / value)|.
    double tail_log_bound = 0.0;
};

// Truncated Euler product prod_p (1 - nu_p/p)(1 - 1/p)^(-k). Exactly 0 for
// inadmissible tuples. Throws std::invalid_argument if p_max < k.
SingularSeriesValue singular_series(const OffsetTuple& H, std::uint64_t p_max);

// Admissible k-tuple starting at 0, built greedily: for each prime p <= k in
// turn, remove the nonzero residue class mod p whose removal leaves the
// narrowest set of k survivors (ties go to the smaller class).
OffsetTuple generate_tuple(unsigned k);

struct TabulatedConstants {
    double theta = 0.971;
    std::uint64_t k0 = 6;
    std::uint64_t gap = 16;
};

struct GpyConstants {
    double theta = 0.0;
    double delta = 0.0;
    // (2 ceil(1 / (2 delta)) + 1)^2.
    std::uint64_t k0 = 0;
    // 2 delta^-2 ln(1 / delta); an asymptotic expression as delta -> 0+, not
    // an exact constant.
    double c_asymptotic = 0.0;
    // Published values at the level theta = 0.971, attached when theta >= 0.971.
    std::optional<TabulatedConstants> tabulated;
};

// Throws std::domain_error unless 1/2 < theta <= 1.
GpyConstants gpy_constants(double theta);

// k/(k + 2l + 1) * (2l + 1)/(2l + 2) * (1 + c0) - 1.
double positivity_factor(unsigned k, unsigned l, double c0_value);

struct MinKResult {
    double c0 = 0.0;
    // Smallest k <= cap with positivity_factor(k, l, c0) > 0 for some l <= k,
    // and the l maximizing the factor there (smallest l on ties).
    std::optional<unsigned> k_optimal_l;
    unsigned l_optimal = 0;
    // Same search restricted to l = floor(sqrt(k) / 2).
    std::optional<unsigned> k_sqrt_l;
    unsigned l_sqrt = 0;
};

MinKResult min_k_for_two_c0(double c0_value, unsigned k_cap);

// Throws std::domain_error unless r in {2, 3} and eps in (0, 1).
MinKResult min_k_for_two(unsigned r, double eps, unsigned k_cap);

// Tuple files: one tuple per line, comma-separated offsets, '#' starts a
// comment. Offsets may appear in any order; duplicates are rejected.
std::vector<OffsetTuple> read_tuples(std::istream& in);
void write_tuples(std::ostream& out, std::span<const OffsetTuple> tuples);
OffsetTuple parse_tuple(std::string_view text);

}  // namespace balgap
