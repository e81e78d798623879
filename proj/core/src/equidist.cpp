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

#include "balgap/equidist.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "balgap/compensated_sum.hpp"
#include "balgap/density.hpp"

namespace balgap {

namespace {

std::uint64_t totient(std::uint64_t q) {
    std::uint64_t phi = q, m = q;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        while (m % p == 0) m /= p;
        phi = phi / p * (p - 1);
    }
    if (m > 1) phi = phi / m * (m - 1);
    return phi;
}

struct ClassScan {
    std::uint64_t worst_a = 0;
    double max_dev = 0.0;
    std::uint64_t coprime = 0;
    std::uint64_t other = 0;
};

// Max over a coprime to q of |count[a] - expected|, ties to the smallest a.
template <class Count>
ClassScan scan_classes(std::uint64_t q, const std::vector<Count>& counts, double expected) {
    ClassScan s;
    bool first = true;
    for (std::uint64_t a = 0; a < q; ++a) {
        const double c = static_cast<double>(counts[a]);
        if (std::gcd(a, q) != 1) {
            s.other += static_cast<std::uint64_t>(c);
            continue;
        }
        s.coprime += static_cast<std::uint64_t>(c);
        const double dev = std::fabs(c - expected);
        if (first || dev > s.max_dev) {
            s.max_dev = dev;
            s.worst_a = a;
            first = false;
        }
    }
    return s;
}

void check_common(const DiscrepancyConfig& cfg) {
    if (cfg.N < 2) throw std::invalid_argument("discrepancy: N must be >= 2");
    if (cfg.q_max < 1) throw std::invalid_argument("discrepancy: q_max must be >= 1");
}

std::vector<std::uint64_t> primes_from_table(const FactorTable& table, std::uint64_t N) {
    if (table.lo() > 2 || table.hi() <= N) {
        throw std::invalid_argument("discrepancy: factor table must cover [2, N]");
    }
    std::vector<std::uint64_t> primes;
    for (std::uint64_t n = 2; n <= N; ++n) {
        if (table.is_prime(n)) primes.push_back(n);
    }
    return primes;
}

void total_up(DiscrepancyReport& report) {
    CompensatedSum total, total_window;
    for (const auto& row : report.per_q) {
        total += row.max_abs_dev;
        total_window += row.max_abs_dev_window;
    }
    report.total = total.value();
    report.total_window = total_window.value();
}

}  // namespace

std::uint64_t derived_q_max(std::uint64_t N, double C) {
    const double n = static_cast<double>(N);
    const double q = std::floor(std::sqrt(n) / std::pow(std::log(n), C));
    return q < 1.0 ? 1 : static_cast<std::uint64_t>(q);
}

DiscrepancyReport bv_prime_discrepancy(const DiscrepancyConfig& cfg, const FactorTable& table) {
    check_common(cfg);
    if (cfg.target != DiscrepancyTarget::primes_le_N) {
        throw std::invalid_argument("bv_prime_discrepancy: target must be primes_le_N");
    }
    if (cfg.q_max >= cfg.N) throw std::invalid_argument("bv_prime_discrepancy: q_max must be < N");

    const auto primes = primes_from_table(table, cfg.N);
    DiscrepancyReport report;
    report.set_size = primes.size();
    report.main_term_used = log_integral(static_cast<double>(cfg.N));
    report.per_q.resize(cfg.q_max);

    for (std::uint64_t q = 1; q <= cfg.q_max; ++q) {
        std::vector<std::uint64_t> counts(q, 0);
        for (const auto p : primes) ++counts[p % q];
        ModulusRow& row = report.per_q[q - 1];
        row.q = q;
        row.main_term = report.main_term_used / static_cast<double>(totient(q));
        const ClassScan s = scan_classes(q, counts, row.main_term);
        row.worst_a = s.worst_a;
        row.max_abs_dev = s.max_dev;
        row.coprime_count = s.coprime;
        row.other_count = s.other;
    }
    total_up(report);
    return report;
}

DiscrepancyReport bv_star_discrepancy(const DiscrepancyConfig& cfg, const FactorTable& table) {
    check_common(cfg);
    if (cfg.target != DiscrepancyTarget::star_set_window || !cfg.spec) {
        throw std::invalid_argument("bv_star_discrepancy: star-set parameters missing");
    }
    const StarSetSpec& spec = *cfg.spec;
    if (spec.N() != cfg.N) throw std::invalid_argument("bv_star_discrepancy: spec N differs");
    if (table.lo() > spec.window_lo() || table.hi() < spec.window_hi()) {
        throw std::invalid_argument("bv_star_discrepancy: factor table must cover [N, 2N)");
    }
    if (spec.r() < 2) throw std::invalid_argument("bv_star_discrepancy: r must be >= 2");

    std::vector<std::uint64_t> members;
    for (std::uint64_t n = spec.window_lo(); n < spec.window_hi(); ++n) {
        if (in_star_set(table.shape(n), spec)) members.push_back(n);
    }

    const double c0_value = c0(spec.r(), spec.eps()).value;
    const double n = static_cast<double>(cfg.N);
    const double li_n = log_integral(n);
    const double li_window = log_integral(2.0 * n) - li_n;

    DiscrepancyReport report;
    report.set_size = members.size();
    report.main_term_used = c0_value * li_n;
    report.per_q.resize(cfg.q_max);
    for (std::uint64_t q = 1; q <= cfg.q_max; ++q) {
        std::vector<std::uint64_t> counts(q, 0);
        for (const auto m : members) ++counts[m % q];
        ModulusRow& row = report.per_q[q - 1];
        const double phi = static_cast<double>(totient(q));
        row.q = q;
        row.main_term = report.main_term_used / phi;
        row.main_term_window = c0_value * li_window / phi;
        const ClassScan s = scan_classes(q, counts, row.main_term);
        row.worst_a = s.worst_a;
        row.max_abs_dev = s.max_dev;
        row.coprime_count = s.coprime;
        row.other_count = s.other;
        row.max_abs_dev_window = scan_classes(q, counts, row.main_term_window).max_dev;
    }
    total_up(report);
    return report;
}

DiscrepancyReport weighted_discrepancy(const DiscrepancyConfig& cfg, double alpha,
                                       const std::vector<double>& weights,
                                       const FactorTable& table) {
    check_common(cfg);
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("weighted_discrepancy: alpha must lie in (0, 1)");
    }
    if (cfg.q_max >= cfg.N) throw std::invalid_argument("weighted_discrepancy: q_max must be < N");

    const double n = static_cast<double>(cfg.N);
    auto m_max = static_cast<std::uint64_t>(std::floor(std::pow(n, 1.0 - alpha)));
    while (std::pow(static_cast<double>(m_max + 1), 1.0 / (1.0 - alpha)) <= n * (1 + 1e-12)) {
        ++m_max;
    }
    while (m_max > 1 && std::pow(static_cast<double>(m_max), 1.0 / (1.0 - alpha)) > n * (1 + 1e-12)) {
        --m_max;
    }
    m_max = std::max<std::uint64_t>(1, std::min<std::uint64_t>(m_max, weights.empty() ? 0 : weights.size() - 1));

    struct Term {
        std::uint64_t m;
        double f;
    };
    std::vector<Term> terms;
    CompensatedSum main;
    for (std::uint64_t m = 1; m < weights.size() && m <= m_max; ++m) {
        const double f = weights[m];
        if (!std::isfinite(f) || std::fabs(f) > 1.0) {
            throw std::invalid_argument("weighted_discrepancy: |f(" + std::to_string(m) +
                                        ")| exceeds 1");
        }
        // No prime p >= 2 has mp <= N once N/m < 2, and Li(N/m) is taken as 0.
        if (f == 0.0 || n / static_cast<double>(m) < 2.0) continue;
        terms.push_back({m, f});
        main += f * log_integral(n / static_cast<double>(m));
    }

    const auto primes = primes_from_table(table, cfg.N);
    DiscrepancyReport report;
    report.main_term_used = main.value();
    report.per_q.resize(cfg.q_max);
    for (std::uint64_t q = 1; q <= cfg.q_max; ++q) {
        std::vector<CompensatedSum> acc(q);
        std::uint64_t members = 0;
        for (const auto& t : terms) {
            const std::uint64_t bound = cfg.N / t.m;
            const std::uint64_t mq = t.m % q;
            for (const auto p : primes) {
                if (p > bound) break;
                acc[mq * (p % q) % q] += t.f;
                ++members;
            }
        }
        std::vector<double> sums(q);
        for (std::uint64_t a = 0; a < q; ++a) sums[a] = acc[a].value();
        ModulusRow& row = report.per_q[q - 1];
        row.q = q;
        row.main_term = report.main_term_used / static_cast<double>(totient(q));
        ClassScan s;
        bool first = true;
        for (std::uint64_t a = 0; a < q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            const double dev = std::fabs(sums[a] - row.main_term);
            if (first || dev > s.max_dev) {
                s.max_dev = dev;
                s.worst_a = a;
                first = false;
            }
        }
        row.worst_a = s.worst_a;
        row.max_abs_dev = s.max_dev;
        report.set_size = members;
    }
    total_up(report);
    return report;
}

}  // namespace balgap
