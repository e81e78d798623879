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

#include "balgap/weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "balgap/compensated_sum.hpp"
#include "balgap/density.hpp"
#include "balgap/parallel.hpp"

namespace balgap {

namespace {

double factorial(unsigned n) {
    double f = 1.0;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

double binomial(unsigned n, unsigned m) {
    double b = 1.0;
    for (unsigned i = 1; i <= m; ++i) b = b * (n - m + i) / i;
    return b;
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t p) {
    // Extended Euclid; a and p coprime.
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a % p);
    while (new_r != 0) {
        const std::int64_t q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

double weight_term(int mu, double R, double d, unsigned power, double norm) {
    return mu * std::pow(std::log(R / d), static_cast<double>(power)) / norm;
}

std::string describe(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

WeightConfig::WeightConfig(OffsetTuple tuple, unsigned l_, double R_)
    : H(std::move(tuple)), l(l_), R(R_) {
    if (!(R >= 2.0)) throw std::invalid_argument("WeightConfig: R must be >= 2");
}

double lambda_r_naive(std::uint64_t n, const WeightConfig& cfg, const FactorTable& table) {
    std::vector<std::uint64_t> primes;
    for (const auto h : cfg.H.offsets()) {
        for (const auto& pe : factorize(table, n + h).factors) {
            if (static_cast<double>(pe.prime) <= cfg.R) primes.push_back(pe.prime);
        }
    }
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());

    const unsigned power = cfg.power();
    const double norm = factorial(power);
    CompensatedSum sum;
    std::function<void(std::size_t, std::uint64_t, int)> walk =
        [&](std::size_t from, std::uint64_t d, int mu) {
            sum += weight_term(mu, cfg.R, static_cast<double>(d), power, norm);
            for (std::size_t i = from; i < primes.size(); ++i) {
                const std::uint64_t next = d * primes[i];
                if (static_cast<double>(next) > cfg.R) break;
                walk(i + 1, next, -mu);
            }
        };
    walk(0, 1, 1);
    return sum.value();
}

WeightPlan::WeightPlan(const WeightConfig& cfg) : cfg_(cfg) {
    if (cfg.R > kMaxWeightLevel) {
        throw std::invalid_argument("WeightPlan: R=" + describe(cfg.R) +
                                    " exceeds the divisor enumeration budget");
    }
    const auto D = static_cast<std::uint64_t>(std::floor(cfg.R));
    const auto mu = mobius_up_to(D);
    const auto primes = primes_up_to(D);

    std::vector<std::uint32_t> spf(D + 1, 0);
    for (const auto p : primes) {
        for (std::uint64_t m = p; m <= D; m += p) {
            if (spf[m] == 0) spf[m] = p;
        }
    }

    // Roots of P_H(n) = 0 mod p, per prime index.
    std::vector<std::size_t> root_offsets{0};
    std::vector<std::uint32_t> roots;
    for (const auto p : primes) {
        const std::size_t first = roots.size();
        for (const auto h : cfg.H.offsets()) {
            roots.push_back(static_cast<std::uint32_t>((p - h % p) % p));
        }
        std::sort(roots.begin() + first, roots.end());
        roots.erase(std::unique(roots.begin() + first, roots.end()), roots.end());
        root_offsets.push_back(roots.size());
    }
    auto roots_of = [&](std::uint32_t p) {
        const auto idx = static_cast<std::size_t>(
            std::lower_bound(primes.begin(), primes.end(), p) - primes.begin());
        return std::span<const std::uint32_t>(roots.data() + root_offsets[idx],
                                              root_offsets[idx + 1] - root_offsets[idx]);
    };

    const unsigned power = cfg.power();
    const double norm = factorial(power);
    class_offsets_.push_back(0);
    std::vector<std::uint64_t> current, next;
    for (std::uint64_t d = 1; d <= D; ++d) {
        if (mu[d] == 0) continue;
        current.assign(1, 0);
        std::uint64_t modulus = 1;
        for (std::uint64_t rest = d; rest > 1;) {
            const std::uint32_t p = spf[rest];
            rest /= p;
            const std::uint64_t inv = mod_inverse(modulus % p, p);
            next.clear();
            for (const auto c : current) {
                for (const auto rho : roots_of(p)) {
                    const std::uint64_t t = ((rho + p - c % p) % p) * inv % p;
                    next.push_back(c + modulus * t);
                }
            }
            modulus *= p;
            current.swap(next);
        }
        std::sort(current.begin(), current.end());
        divisors_.push_back(static_cast<std::uint32_t>(d));
        terms_.push_back(weight_term(mu[d], cfg.R, static_cast<double>(d), power, norm));
        for (const auto c : current) classes_.push_back(static_cast<std::uint32_t>(c));
        class_offsets_.push_back(classes_.size());
    }
}

std::span<const std::uint32_t> WeightPlan::classes(std::size_t i) const {
    return {classes_.data() + class_offsets_[i], class_offsets_[i + 1] - class_offsets_[i]};
}

void WeightPlan::evaluate(std::uint64_t lo, std::span<double> out) const {
    const std::size_t len = out.size();
    std::fill(out.begin(), out.end(), 0.0);
    std::vector<double> comp(len, 0.0);
    for (std::size_t i = 0; i < divisors_.size(); ++i) {
        const std::uint64_t d = divisors_[i];
        const double term = terms_[i];
        const std::uint64_t lo_mod = lo % d;
        for (const auto c : classes(i)) {
            std::uint64_t j = (c + d - lo_mod) % d;
            for (; j < len; j += d) {
                double& s = out[j];
                const double t = s + term;
                comp[j] += std::fabs(s) >= std::fabs(term) ? (s - t) + term : (term - t) + s;
                s = t;
            }
        }
    }
    for (std::size_t j = 0; j < len; ++j) out[j] += comp[j];
}

std::vector<double> lambda_r_batch(std::uint64_t lo, std::uint64_t hi, const WeightConfig& cfg) {
    if (hi <= lo) throw std::invalid_argument("lambda_r_batch: empty range");
    const WeightPlan plan(cfg);
    std::vector<double> out(static_cast<std::size_t>(hi - lo));
    plan.evaluate(lo, out);
    return out;
}

std::string_view to_string(MomentVariant variant) {
    switch (variant) {
        case MomentVariant::lemma1: return "lemma1";
        case MomentVariant::lemma2: return "lemma2";
        case MomentVariant::lemma3: return "lemma3";
        case MomentVariant::s_statistic: return "s_statistic";
    }
    return "unknown";
}

double lemma1_main_term(std::uint64_t N, unsigned k, unsigned l, double R, double sing) {
    return binomial(2 * l, l) * static_cast<double>(N) *
           std::pow(std::log(R), static_cast<double>(k + 2 * l)) * sing / factorial(k + 2 * l);
}

double lemma2_main_term(std::uint64_t N, unsigned k, unsigned l, double R, double sing) {
    const double n = static_cast<double>(N);
    return binomial(2 * l + 2, l + 1) * n *
           std::pow(std::log(R), static_cast<double>(k + 2 * l + 1)) * sing /
           (factorial(k + 2 * l + 1) * std::log(n));
}

namespace {

struct ChunkTotals {
    CompensatedSum sum;
    std::uint64_t hits = 0;
};

// Runs visit(n, lambda^2, totals) for every n in [N, 2N), chunk by chunk.
// Chunks are fixed by options.chunk and reduced in order.
template <class Visit>
ChunkTotals scan_window(std::uint64_t N, const WeightPlan& plan, const MomentOptions& options,
                        Visit&& visit) {
    const std::size_t chunk = std::max<std::size_t>(1, options.chunk);
    const std::size_t chunks = static_cast<std::size_t>((N + chunk - 1) / chunk);
    std::vector<ChunkTotals> partial(chunks);
    parallel_for(chunks, options.threads, [&](std::size_t c) {
        const std::uint64_t lo = N + c * chunk;
        const std::uint64_t hi = std::min<std::uint64_t>(2 * N, lo + chunk);
        std::vector<double> w(static_cast<std::size_t>(hi - lo));
        plan.evaluate(lo, w);
        ChunkTotals& t = partial[c];
        for (std::size_t j = 0; j < w.size(); ++j) visit(lo + j, w[j] * w[j], t);
    });
    ChunkTotals total;
    for (const auto& p : partial) {
        total.sum += p.sum;
        total.hits += p.hits;
    }
    return total;
}

MomentReport start_report(MomentVariant variant, std::uint64_t N, const WeightConfig& cfg,
                          const MomentOptions& options) {
    if (N < 2) throw std::invalid_argument("moment: N must be >= 2");
    MomentReport r;
    r.variant = variant;
    r.N = N;
    r.H.assign(cfg.H.offsets().begin(), cfg.H.offsets().end());
    r.k = cfg.k();
    r.l = cfg.l;
    r.R = cfg.R;
    r.singular_series = singular_series(cfg.H, std::max<std::uint64_t>(
                                                   options.singular_p_max, cfg.H.k()))
                            .value;
    r.degenerate = r.singular_series == 0.0;
    if (r.degenerate) r.warnings.push_back("inadmissible tuple: singular series vanishes");

    const double lnN = std::log(static_cast<double>(N));
    if (N < 10'000) r.warnings.push_back("N below 10^4: asymptotic comparison is not meaningful");
    if (static_cast<double>(cfg.H.max_offset()) > 50.0 * lnN) {
        r.warnings.push_back("max offset exceeds 50 ln N");
    }
    const double level = variant == MomentVariant::lemma1
                             ? std::sqrt(static_cast<double>(N))
                             : std::pow(static_cast<double>(N), 0.25);
    if (cfg.R > level / std::pow(lnN, options.log_power)) {
        r.warnings.push_back(std::string("R=") + describe(cfg.R) + " exceeds the " +
                             (variant == MomentVariant::lemma1 ? "N^(1/2)" : "N^(1/4)") +
                             "/ln^C N range");
    }
    return r;
}

void finish_report(MomentReport& r) {
    r.ratio = r.predicted_main_term != 0.0 ? r.empirical / r.predicted_main_term : 0.0;
}

void require_table(const FactorTable& table, std::uint64_t N, const WeightConfig& cfg) {
    if (table.lo() > N || table.hi() < 2 * N + cfg.H.max_offset()) {
        throw std::invalid_argument("moment: factor table must cover [N, 2N + max h)");
    }
}

StarParams star_params(const StarSetSpec& spec, std::uint64_t N) {
    if (spec.r() != 2 && spec.r() != 3) throw std::domain_error("moment: r must be 2 or 3");
    if (spec.N() != N) throw std::invalid_argument("moment: star-set N differs from window N");
    return {spec.r(), spec.eps(), c0(spec.r(), spec.eps()).value};
}

// With R < N^a1 every star-set member has all prime factors above R, the
// property that lets the star set stand in for primes. Returns whether the
// per-element check applies.
bool star_check_applies(const StarSetSpec& spec, double R, MomentReport& r) {
    const bool applies = std::log(R) < spec.a1() * std::log(static_cast<double>(spec.N()));
    if (!applies) r.warnings.push_back("R >= N^a1: star-set members may have prime factors <= R");
    return applies;
}

void assert_no_small_factor(const FactorShape& s, double R) {
    if (!s.is_prime() && static_cast<double>(s.p_minus) <= R) {
        throw std::logic_error("star-set member " + std::to_string(s.n) +
                               " has a prime factor <= R");
    }
}

}  // namespace

MomentReport moment_lemma1(std::uint64_t N, const WeightConfig& cfg,
                           const MomentOptions& options) {
    MomentReport r = start_report(MomentVariant::lemma1, N, cfg, options);
    const WeightPlan plan(cfg);
    const auto totals =
        scan_window(N, plan, options, [](std::uint64_t, double w2, ChunkTotals& t) { t.sum += w2; });
    r.empirical = totals.sum.value();
    r.predicted_main_term = lemma1_main_term(N, cfg.k(), cfg.l, cfg.R, r.singular_series);
    finish_report(r);
    return r;
}

MomentReport moment_lemma2(std::uint64_t N, const WeightConfig& cfg, std::uint64_t h,
                           const FactorTable& table, const MomentOptions& options) {
    if (!cfg.H.contains(h)) throw std::invalid_argument("moment_lemma2: h is not in H");
    require_table(table, N, cfg);
    MomentReport r = start_report(MomentVariant::lemma2, N, cfg, options);
    r.h = h;
    if (static_cast<double>(N) <= cfg.R) {
        r.warnings.push_back("N <= R: primes n + h may have prime divisors <= R");
    }
    const WeightPlan plan(cfg);
    const auto totals = scan_window(N, plan, options, [&](std::uint64_t n, double w2, ChunkTotals& t) {
        if (table.is_prime(n + h)) {
            t.sum += w2;
            ++t.hits;
        }
    });
    r.empirical = totals.sum.value();
    r.hits = totals.hits;
    r.predicted_main_term = lemma2_main_term(N, cfg.k(), cfg.l, cfg.R, r.singular_series);
    finish_report(r);
    return r;
}

MomentReport moment_lemma3(std::uint64_t N, const WeightConfig& cfg, std::uint64_t h,
                           const StarSetSpec& spec, const FactorTable& table,
                           const MomentOptions& options) {
    if (!cfg.H.contains(h)) throw std::invalid_argument("moment_lemma3: h is not in H");
    require_table(table, N, cfg);
    const StarParams star = star_params(spec, N);
    MomentReport r = start_report(MomentVariant::lemma3, N, cfg, options);
    r.h = h;
    r.star = star;
    const bool check = star_check_applies(spec, cfg.R, r);
    const WeightPlan plan(cfg);
    const auto totals = scan_window(N, plan, options, [&](std::uint64_t n, double w2, ChunkTotals& t) {
        const FactorShape s = table.shape(n + h);
        if (!in_ptilde(s, spec)) return;
        if (check) assert_no_small_factor(s, cfg.R);
        t.sum += w2;
        ++t.hits;
    });
    r.empirical = totals.sum.value();
    r.hits = totals.hits;
    r.predicted_main_term =
        lemma2_main_term(N, cfg.k(), cfg.l, cfg.R, r.singular_series) * (1.0 + star.c0);
    finish_report(r);
    return r;
}

MomentReport s_statistic(std::uint64_t N, const WeightConfig& cfg, const StarSetSpec& spec,
                         const FactorTable& table, const MomentOptions& options) {
    require_table(table, N, cfg);
    const StarParams star = star_params(spec, N);
    MomentReport r = start_report(MomentVariant::s_statistic, N, cfg, options);
    r.star = star;
    const bool check = star_check_applies(spec, cfg.R, r);
    const WeightPlan plan(cfg);
    const auto offsets = cfg.H.offsets();
    const auto totals = scan_window(N, plan, options, [&](std::uint64_t n, double w2, ChunkTotals& t) {
        int hits = 0;
        for (const auto h : offsets) {
            const FactorShape s = table.shape(n + h);
            if (!in_ptilde(s, spec)) continue;
            if (check) assert_no_small_factor(s, cfg.R);
            ++hits;
        }
        if (hits >= 2) ++t.hits;
        t.sum += (hits - 1) * w2;
    });
    r.empirical = totals.sum.value();
    r.hits = totals.hits;
    r.predicted_main_term = lemma1_main_term(N, cfg.k(), cfg.l, cfg.R, r.singular_series) *
                            positivity_factor(cfg.k(), cfg.l, star.c0);
    finish_report(r);
    return r;
}

}  // namespace balgap
