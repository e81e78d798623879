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


// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "balgap/balanced.hpp"
#include "balgap/density.hpp"
#include "balgap/equidist.hpp"
#include "balgap/sieve.hpp"
#include "balgap/tuples.hpp"
#include "balgap/weights.hpp"
#include "oracles.hpp"

#ifdef BALGAP_HAVE_CLI
#include "balgap/cli.hpp"
#include "json.hpp"
#endif

using namespace balgap;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

// 1. is_eps_balanced(n, 0) iff n is a prime power, every n in [2, 1e6].
Verdict zero_balanced() {
    constexpr std::uint64_t kHi = 1'000'000;
    const auto table = FactorTable::build(2, kHi + 1);
    std::uint64_t mismatches = 0, powers = 0;
    for (std::uint64_t n = 2; n <= kHi; ++n) {
        const bool power = oracle::trial_factor(n).size() == 1;
        powers += power;
        mismatches += is_eps_balanced(table.shape(n), 0.0) != power;
    }
    return {mismatches == 0, std::to_string(powers) + " prime powers, " +
                                 std::to_string(mismatches) + " mismatches"};
}

// 2. Quadrature against 2 ln((1 + eps/2) / (1 - eps/2)), 1e-10 relative.
Verdict closed_form() {
    double worst = 0;
    for (const double eps : {0.01, 0.05, 0.1, 0.2, 0.3, 0.5}) {
        const double exact = 2 * std::log((1 + eps / 2) / (1 - eps / 2));
        const double q = c0_quadrature(2, eps, 1e-15, 1e-13).value;
        worst = std::max(worst, std::fabs(q - exact) / exact);
    }
    return {worst <= 1e-10, fmt("max relative error %.3g", worst)};
}

// 3. C0(r, eps) <= r eps^(r-1) / (1 - eps/2)^r on a 20-point grid.
Verdict upper_bound() {
    int violations = 0;
    double tightest = 0;
    for (const unsigned r : {2u, 3u}) {
        for (int j = 1; j <= 20; ++j) {
            const double eps = 0.01 * j;
            const double v = c0(r, eps).value;
            const double b = c0_upper_bound(r, eps);
            violations += !(v <= b);
            tightest = std::max(tightest, v / b);
        }
    }
    return {violations == 0, std::to_string(violations) + " violations of 40, max C0/bound " +
                                 fmt("%.4f", tightest)};
}

// 4. sum_{r >= 2} C0(r, eps) < 3 eps, summed to r = 8 plus the bound tail.
Verdict tail_sum() {
    bool ok = true;
    std::string detail;
    for (const double eps : {0.01, 0.02, 0.05}) {
        const auto t = c0_tail_sum(eps, 8);
        const double total = t.sum + t.tail_bound;
        ok = ok && total < 3 * eps && t.below_three_eps;
        detail += fmt("eps=%.2f: %.6f < %.2f; ", eps, total, 3 * eps);
    }
    detail.resize(detail.size() - 2);
    return {ok, detail};
}

// 5. Exact star-set count at N = 1e7 within 15% of C0 N / ln N, and closer
// to the prediction than at N = 1e4.
Verdict star_density() {
    constexpr std::uint64_t kSmall = 10'000, kLarge = 10'000'000;
    constexpr std::uint64_t kPinnedSmall = 217, kPinnedLarge = 147'144;
    auto ratio_at = [](std::uint64_t N, std::uint64_t& count) {
        const auto table = FactorTable::build(N, 2 * N);
        const auto sc = count_star(StarSetSpec(N, 2, 0.3), table);
        count = sc.count;
        return double(sc.count) / sc.predicted;
    };
    std::uint64_t small = 0, large = 0;
    const double r_small = ratio_at(kSmall, small);
    const double r_large = ratio_at(kLarge, large);
    const bool pinned = small == kPinnedSmall && large == kPinnedLarge;
    const bool within = std::fabs(r_large - 1) <= 0.15;
    const bool trend = std::fabs(r_large - 1) < std::fabs(r_small - 1);
    std::ostringstream d;
    d << "count(1e7)=" << large << " ratio " << fmt("%.4f", r_large) << (within ? "" : " (outside +-15%)")
      << ", count(1e4)=" << small << " ratio " << fmt("%.4f", r_small)
      << (trend ? ", trend ok" : ", trend wrong") << (pinned ? "" : ", regression mismatch");
    return {pinned && within && trend, d.str()};
}

// 6. Singular series truncation and degenerate tuples.
Verdict singular() {
    const OffsetTuple twin({0, 2});
    const auto a = singular_series(twin, 1'000'000);
    const auto b = singular_series(twin, 10'000'000);
    const double drift = std::fabs(std::log(a.value) - std::log(b.value));
    const bool zero = singular_series(OffsetTuple({0, 1}), 1'000'000).value == 0.0;
    const bool one = singular_series(OffsetTuple({0}), 1'000'000).value == 1.0;
    return {drift <= a.tail_log_bound && zero && one,
            fmt("S(0,2)=%.15f, |log drift| %.3g <= bound %.3g", a.value, drift, a.tail_log_bound) +
                (zero ? ", S(0,1)=0" : ", S(0,1)!=0") + (one ? ", S(0)=1" : ", S(0)!=1")};
}

// 7. Batch weights against the per-n divisor sum, 1e-9 relative.
Verdict weight_oracle() {
    constexpr std::uint64_t kLo = 100'000, kHi = 110'000;
    struct Case {
        std::vector<std::uint64_t> H;
        unsigned l;
        double R;
    };
    const std::vector<Case> cases{{{0, 2}, 1, 1e3}, {{0, 2, 6}, 1, 1e3}, {{0, 2, 6, 8}, 2, 1e4}};
    std::uint64_t bad = 0;
    double worst = 0;
    for (const auto& c : cases) {
        const WeightConfig cfg(OffsetTuple(c.H), c.l, c.R);
        const auto table = FactorTable::build(kLo, kHi + c.H.back());
        const auto batch = lambda_r_batch(kLo, kHi, cfg);
        for (std::uint64_t n = kLo; n < kHi; ++n) {
            const double naive = lambda_r_naive(n, cfg, table);
            const double scale = std::max(std::fabs(naive), std::fabs(batch[n - kLo]));
            const double err = scale == 0 ? 0 : std::fabs(batch[n - kLo] - naive) / scale;
            worst = std::max(worst, err);
            bad += err > 1e-9;
        }
    }
    return {bad == 0, std::to_string(bad) + " of 30000 entries off, max relative error " +
                          fmt("%.3g", worst)};
}

// 8. Plain second moment against its main term, R = N^(1/4).
Verdict second_moment_trend() {
    constexpr double kPinnedSmall = 0.310681901023139, kPinnedLarge = 0.735221686341587;
    auto ratio_at = [](std::uint64_t N) {
        const WeightConfig cfg(OffsetTuple({0, 2, 6}), 1, std::pow(double(N), 0.25));
        return moment_lemma1(N, cfg).ratio;
    };
    const double small = ratio_at(10'000);
    const double large = ratio_at(10'000'000);
    const bool in_range = small >= 0.5 && small <= 2.0 && large >= 0.5 && large <= 2.0;
    const bool trend = std::fabs(large - 1) < std::fabs(small - 1);
    const bool pinned = std::fabs(small - kPinnedSmall) <= 1e-9 * kPinnedSmall &&
                        std::fabs(large - kPinnedLarge) <= 1e-9 * kPinnedLarge;
    return {in_range && trend && pinned,
            fmt("ratio(1e4)=%.15g, ratio(1e7)=%.15g", small, large) +
                (in_range ? "" : ", outside [0.5, 2]") + (trend ? "" : ", trend wrong") +
                (pinned ? "" : ", regression mismatch")};
}

// 9. Star-set weighted moment against the prime one at N = 1e6, h = 0.
Verdict star_moment_structure() {
    constexpr std::uint64_t N = 1'000'000;
    const WeightConfig cfg(OffsetTuple({0, 2, 6}), 1, std::pow(double(N), 0.25));
    const auto table = FactorTable::build(N, 2 * N + 6);
    const auto base = moment_lemma2(N, cfg, 0, table);
    const auto thin = moment_lemma3(N, cfg, 0, StarSetSpec(N, 2, 1e-3), table);
    const auto wide = moment_lemma3(N, cfg, 0, StarSetSpec(N, 2, 0.3), table);
    const double rel = std::fabs(thin.empirical - base.empirical) / base.empirical;
    const bool ok = rel <= 1e-3 && wide.empirical >= base.empirical;
    return {ok, fmt("|star(1e-3) - prime| / prime = %.3g; star(0.3)=%.6g >= prime=%.6g",
                    rel, wide.empirical, base.empirical)};
}

// Independent scan for the smallest k <= cap with a positive factor.
unsigned scan_min_k(double c0_value, unsigned cap) {
    for (unsigned k = 1; k <= cap; ++k) {
        for (unsigned l = 0; l <= k; ++l) {
            const double v = double(k) / (k + 2.0 * l + 1) * (2.0 * l + 1) / (2.0 * l + 2) *
                             (1 + c0_value);
            if (v > 1.0) return k;
        }
    }
    return 0;
}

// 10. Positivity calculus.
Verdict positivity() {
    std::uint64_t nonneg = 0;
    for (unsigned k = 1; k <= 1000; ++k) {
        for (unsigned l = 0; l <= k; ++l) nonneg += !(positivity_factor(k, l, 0.0) < 0);
    }
    std::vector<unsigned> ks;
    bool found = true;
    for (const double eps : {0.05, 0.1, 0.2, 0.3}) {
        const auto m = min_k_for_two(2, eps, 1000);
        found = found && m.k_optimal_l.has_value();
        ks.push_back(m.k_optimal_l.value_or(0));
    }
    const bool monotone = std::is_sorted(ks.rbegin(), ks.rend());
    const unsigned oracle_k = scan_min_k(2 * std::log(1.1 / 0.9), 200);
    const bool match = found && ks[2] == oracle_k;
    std::ostringstream d;
    d << nonneg << " nonnegative factors at C0=0; min k over eps {.05,.1,.2,.3} = " << ks[0] << ","
      << ks[1] << "," << ks[2] << "," << ks[3] << "; scan at eps=0.2 gives " << oracle_k;
    return {nonneg == 0 && found && monotone && match, d.str()};
}

// 11. Residue classes partition the target set for every q <= 100.
Verdict partition() {
    constexpr std::uint64_t N = 100'000;
    const auto low = FactorTable::build(2, N + 1);
    const auto window = FactorTable::build(N, 2 * N);
    DiscrepancyConfig pcfg{N, 100, DiscrepancyTarget::primes_le_N, std::nullopt};
    const auto primes = bv_prime_discrepancy(pcfg, low);
    const StarSetSpec spec(N, 2, 0.3);
    DiscrepancyConfig scfg{N, 100, DiscrepancyTarget::star_set_window, spec};
    const auto star = bv_star_discrepancy(scfg, window);

    const auto prime_total = oracle::primes_by_trial(N).size();
    const auto star_total = count_star(spec, window).count;
    std::uint64_t broken = 0;
    for (const auto* rep : {&primes, &star}) {
        const std::uint64_t want = rep == &primes ? prime_total : star_total;
        broken += rep->per_q.size() != 100 || rep->set_size != want;
        for (const auto& row : rep->per_q) broken += row.coprime_count + row.other_count != want;
    }
    return {broken == 0, std::to_string(prime_total) + " primes, " + std::to_string(star_total) +
                             " star members, " + std::to_string(broken) + " broken partitions"};
}

// 12. Constants through the command-line front end.
Verdict constants() {
#ifdef BALGAP_HAVE_CLI
    auto query = [](const std::string& theta, nlohmann::json& j) {
        std::ostringstream out, err;
        const int code = cli::run({"constants", "--theta", theta, "--format", "json",
                                   "--timestamp", "1970-01-01T00:00:00Z"},
                                  out, err);
        if (code == 0) j = nlohmann::json::parse(out.str());
        return code == 0;
    };
    nlohmann::json tab, formula;
    if (!query("0.971", tab) || !query("0.55", formula)) return {false, "cli run failed"};
    const auto& t = tab["summary"]["tabulated"];
    const bool ok = !t.is_null() && t["k0"] == 6 && t["gap"] == 16 &&
                    formula["summary"]["formula"]["k0"] == 441;
    return {ok, "theta=0.971: k0=" + (t.is_null() ? "null" : t["k0"].dump()) + ", C=" +
                    (t.is_null() ? "null" : t["gap"].dump()) + "; delta=0.05 formula k0=" +
                    formula["summary"]["formula"]["k0"].dump()};
#else
    return {false, "built without the command-line front end"};
#endif
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"0-balanced iff prime power on [2, 1e6]", zero_balanced},
        {"C0(2, eps) quadrature matches closed form", closed_form},
        {"C0 upper bound on the eps grid", upper_bound},
        {"tail sum of C0 below 3 eps", tail_sum},
        {"star-set count at N = 1e7 within 15%", star_density},
        {"singular series truncation and degenerate tuples", singular},
        {"batch weights match divisor-sum weights", weight_oracle},
        {"second moment ratio trend with R = N^(1/4)", second_moment_trend},
        {"star-set moment against prime moment at N = 1e6", star_moment_structure},
        {"positivity calculus", positivity},
        {"residue classes partition the target set", partition},
        {"constants for theta = 0.971", constants},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !v.pass;
        std::printf("%s %2zu %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    v.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
