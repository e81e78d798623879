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


#include "balgap/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "balgap/balanced.hpp"
#include "balgap/density.hpp"
#include "balgap/equidist.hpp"
#include "balgap/sieve.hpp"
#include "balgap/tuples.hpp"
#include "balgap/weights.hpp"
#include "output.hpp"

#ifndef BALGAP_VERSION
#define BALGAP_VERSION "unknown"
#endif

namespace balgap::cli {
namespace {

// Bad flag combinations found after parsing; reported like parse errors.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultSeed = 0x5eed'ba1a'2c3d'0001ULL;

struct Flags {
    // shared
    std::string out;
    std::string format = "csv";
    unsigned threads = 1;
    std::uint64_t seed = kDefaultSeed;
    std::string timestamp;

    std::optional<std::uint64_t> n;
    std::optional<std::uint64_t> n_window;
    std::vector<unsigned> r_list;
    std::vector<double> eps_list;
    std::optional<unsigned> r;
    std::optional<double> eps;

    std::string method = "auto";
    std::string weight_method = "batch";
    std::uint64_t samples = std::uint64_t{1} << 22;
    double abs_tol = 1e-9;
    std::optional<unsigned> tail_r_max;

    std::optional<unsigned> k;
    std::string tuple;
    std::string tuple_file;
    std::string tuple_out;
    std::uint64_t p_max = 1'000'000;

    std::optional<double> theta;
    unsigned k_cap = 1000;

    unsigned l = 1;
    std::optional<double> big_r;
    std::optional<std::uint64_t> lo;
    std::uint64_t count = 100;
    std::string variant = "lemma1";
    std::optional<std::uint64_t> h;
    double log_power = 1.0;

    std::optional<std::uint64_t> q_max;
    double alpha = 0.5;
    std::string f = "mobius";
};

std::string utc_now() {
    std::time_t t = std::time(nullptr);
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) t = std::strtoll(sde, nullptr, 10);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string offsets_text(const OffsetTuple& t) {
    std::string s;
    for (auto h : t.offsets()) s += (s.empty() ? "" : ",") + std::to_string(h);
    return s;
}

std::vector<OffsetTuple> tuples_from(const Flags& fl) {
    const int sources = !fl.tuple.empty() + !fl.tuple_file.empty() + fl.k.has_value();
    if (sources != 1) throw UsageError("give exactly one of --tuple, --tuple-file, --k");
    if (!fl.tuple.empty()) return {parse_tuple(fl.tuple)};
    if (fl.k) return {generate_tuple(*fl.k)};
    std::ifstream in(fl.tuple_file);
    if (!in) throw std::runtime_error("cannot open tuple file " + fl.tuple_file);
    auto tuples = read_tuples(in);
    if (tuples.empty()) throw std::runtime_error("tuple file " + fl.tuple_file + " holds no tuples");
    return tuples;
}

OffsetTuple single_tuple(const Flags& fl) {
    auto tuples = tuples_from(fl);
    if (tuples.size() != 1) throw UsageError("this subcommand takes a single tuple");
    return tuples.front();
}

std::uint64_t need(const std::optional<std::uint64_t>& v, const char* flag) {
    if (!v) throw UsageError(std::string(flag) + " is required");
    return *v;
}

template <class T>
T need_value(const std::optional<T>& v, const char* flag) {
    if (!v) throw UsageError(std::string(flag) + " is required");
    return *v;
}

SieveOptions sieve_opts(const Flags& fl) {
    SieveOptions o;
    o.threads = fl.threads;
    return o;
}

// ---------------------------------------------------------------- classify

Output cmd_classify(const Flags& fl) {
    if (fl.n.has_value() == fl.n_window.has_value()) {
        throw UsageError("give exactly one of --n, --n-window");
    }
    const std::uint64_t lo = fl.n ? *fl.n : *fl.n_window;
    const std::uint64_t hi = fl.n ? lo + 1 : 2 * lo;
    const auto table = FactorTable::build(lo, hi, sieve_opts(fl));

    Output o;
    o.table.columns = {"n", "omega", "threshold", "is_prime", "p_minus", "p_plus"};
    if (fl.eps) o.table.columns.emplace_back("eps_balanced");
    std::uint64_t balanced = 0;
    for (std::uint64_t n = lo; n < hi; ++n) {
        const auto s = table.shape(n);
        if (fl.r && s.omega_big != *fl.r) continue;
        const auto c = classify(s);
        std::vector<Cell> row{n, std::uint64_t{c.omega_big}, c.threshold, c.is_prime,
                              s.p_minus, s.p_plus};
        if (fl.eps) {
            const bool b = is_eps_balanced(s, *fl.eps);
            balanced += b;
            row.emplace_back(b);
        }
        o.table.add(std::move(row));
    }
    o.summary["lo"] = lo;
    o.summary["hi"] = hi;
    o.summary["rows"] = o.table.rows.size();
    if (fl.eps) o.summary["eps_balanced"] = balanced;
    return o;
}

// -------------------------------------------------------------- count-star

Output cmd_count_star(const Flags& fl) {
    const std::uint64_t N = need(fl.n_window, "--n-window");
    const unsigned r = fl.r.value_or(2);
    const double eps = need_value(fl.eps, "--eps");
    const StarSetSpec spec(N, r, eps);
    const auto table = FactorTable::build(N, 2 * N, sieve_opts(fl));
    const auto sc = count_star(spec, table);
    const auto balanced = count_eps_r(N, r, eps, table);
    const double ratio = sc.predicted > 0 ? double(sc.count) / sc.predicted : 0.0;
    const double ordered_ratio = sc.predicted > 0 ? double(sc.ordered_count) / sc.predicted : 0.0;

    Output o;
    o.table.columns = {"N",     "r",         "eps",           "a1",
                       "a2",    "count",     "predicted",     "ratio",
                       "c0",    "ordered_count", "ordered_ratio", "eps_balanced_count"};
    o.table.add({N, std::uint64_t{r}, eps, spec.a1(), spec.a2(), sc.count, sc.predicted, ratio,
                 sc.c0, sc.ordered_count, ordered_ratio, balanced});
    for (std::size_t i = 0; i < o.table.columns.size(); ++i) {
        o.summary[o.table.columns[i]] = to_json(o.table.rows[0][i]);
    }
    return o;
}

// ----------------------------------------------------------------- density

Output cmd_density(const Flags& fl) {
    if (fl.eps_list.empty()) throw UsageError("--eps is required");
    const std::vector<unsigned> rs = fl.r_list.empty() ? std::vector<unsigned>{2} : fl.r_list;
    DensityOptions opts;
    opts.abs_tol = fl.abs_tol;
    opts.mc_samples = fl.samples;
    opts.seed = fl.seed;
    opts.threads = fl.threads;

    Output o;
    o.table.columns = {"r", "eps", "c0", "method", "error", "upper_bound"};
    for (const unsigned r : rs) {
        for (const double eps : fl.eps_list) {
            DensityResult d;
            if (fl.method == "auto") {
                d = c0(r, eps, opts);
            } else if (fl.method == "quadrature") {
                d = c0_quadrature(r, eps, fl.abs_tol);
            } else {
                d = c0_monte_carlo(r, eps, fl.samples, fl.seed, fl.threads);
            }
            o.table.add({std::uint64_t{r}, eps, d.value, std::string(to_string(d.method)),
                         d.abs_error_estimate, c0_upper_bound(r, eps)});
        }
    }
    if (o.table.rows.size() == 1) {
        const auto& row = o.table.rows[0];
        o.summary["value"] = to_json(row[2]);
        o.summary["method"] = to_json(row[3]);
        o.summary["error"] = to_json(row[4]);
    }
    if (fl.tail_r_max) {
        Json tails = Json::array();
        for (const double eps : fl.eps_list) {
            const auto t = c0_tail_sum(eps, *fl.tail_r_max, opts);
            tails.push_back({{"eps", eps},
                             {"r_max", *fl.tail_r_max},
                             {"sum", t.sum},
                             {"tail_bound", t.tail_bound},
                             {"total", t.sum + t.tail_bound},
                             {"three_eps", 3 * eps},
                             {"below_three_eps", t.below_three_eps}});
        }
        o.summary["tail_sums"] = std::move(tails);
    }
    return o;
}

// ------------------------------------------------------------------- tuple

Output cmd_tuple(const Flags& fl) {
    const auto tuples = tuples_from(fl);
    if (!fl.tuple_out.empty()) {
        std::ofstream f(fl.tuple_out);
        if (!f) throw std::runtime_error("cannot write " + fl.tuple_out);
        write_tuples(f, tuples);
    }
    Output o;
    o.table.columns = {"index", "k", "diameter", "admissible", "offsets"};
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        const auto& t = tuples[i];
        o.table.add({std::uint64_t{i}, std::uint64_t{t.k()}, t.diameter(), is_admissible(t),
                     offsets_text(t)});
    }
    o.summary["tuples"] = tuples.size();
    return o;
}

// --------------------------------------------------------- singular-series

Output cmd_singular_series(const Flags& fl) {
    const auto tuples = tuples_from(fl);
    Output o;
    o.table.columns = {"offsets", "k", "admissible", "value", "p_max", "tail_log_bound"};
    for (const auto& t : tuples) {
        const auto s = singular_series(t, fl.p_max);
        o.table.add({offsets_text(t), std::uint64_t{t.k()}, is_admissible(t), s.value, s.p_max,
                     s.tail_log_bound});
    }
    if (tuples.size() == 1) {
        o.summary["value"] = to_json(o.table.rows[0][3]);
        o.summary["tail_log_bound"] = to_json(o.table.rows[0][5]);
    }
    return o;
}

// --------------------------------------------------------------- constants

Output cmd_constants(const Flags& fl) {
    const double theta = need_value(fl.theta, "--theta");
    const auto g = gpy_constants(theta);
    Output o;
    o.table.columns = {"source", "theta", "delta", "k0", "l", "C"};
    o.table.add({std::string("formula"), g.theta, g.delta, g.k0, std::string(""), g.c_asymptotic});
    Json formula{{"k0", g.k0}, {"c_asymptotic", g.c_asymptotic}, {"c_is_asymptotic", true}};
    o.summary["theta"] = g.theta;
    o.summary["delta"] = g.delta;
    o.summary["formula"] = formula;
    if (g.tabulated) {
        o.table.add({std::string("tabulated"), g.tabulated->theta, g.tabulated->theta - 0.5,
                     g.tabulated->k0, std::string(""), double(g.tabulated->gap)});
        o.summary["tabulated"] = {{"theta", g.tabulated->theta},
                                  {"k0", g.tabulated->k0},
                                  {"gap", g.tabulated->gap}};
    } else {
        o.summary["tabulated"] = nullptr;
    }
    if (fl.r || fl.eps) {
        const unsigned r = need_value(fl.r, "--r");
        const double eps = need_value(fl.eps, "--eps");
        const auto mk = min_k_for_two(r, eps, fl.k_cap);
        Json j{{"r", r}, {"eps", eps}, {"c0", mk.c0}, {"k_cap", fl.k_cap}};
        j["k_optimal_l"] = mk.k_optimal_l ? Json(*mk.k_optimal_l) : Json(nullptr);
        j["l_optimal"] = mk.l_optimal;
        j["k_sqrt_l"] = mk.k_sqrt_l ? Json(*mk.k_sqrt_l) : Json(nullptr);
        j["l_sqrt"] = mk.l_sqrt;
        o.summary["min_k"] = j;
        if (mk.k_optimal_l) {
            o.table.add({std::string("min_k_optimal_l"), theta, g.delta,
                         std::uint64_t{*mk.k_optimal_l}, std::uint64_t{mk.l_optimal},
                         std::string("")});
        }
        if (mk.k_sqrt_l) {
            o.table.add({std::string("min_k_sqrt_l"), theta, g.delta, std::uint64_t{*mk.k_sqrt_l},
                         std::uint64_t{mk.l_sqrt}, std::string("")});
        }
        if (!mk.k_optimal_l) o.warnings.push_back("no k <= k_cap gives a positive factor");
    }
    return o;
}

// ----------------------------------------------------------------- weights

Output cmd_weights(const Flags& fl) {
    const auto H = single_tuple(fl);
    const double R = need_value(fl.big_r, "--big-r");
    const WeightConfig cfg(H, fl.l, R);
    const std::uint64_t lo = need(fl.lo, "--lo");
    const std::uint64_t hi = lo + fl.count;
    if (fl.count == 0) throw UsageError("--count must be positive");

    std::vector<double> batch;
    std::optional<FactorTable> table;
    if (fl.weight_method != "naive") batch = lambda_r_batch(lo, hi, cfg);
    if (fl.weight_method != "batch") {
        table = FactorTable::build(std::max<std::uint64_t>(lo, 2), hi + H.max_offset(),
                                   sieve_opts(fl));
    }
    Output o;
    o.table.columns = {"n"};
    if (!batch.empty()) o.table.columns.emplace_back("lambda");
    if (table) o.table.columns.emplace_back("lambda_naive");
    if (fl.weight_method == "both") o.table.columns.emplace_back("rel_diff");
    double worst = 0;
    for (std::uint64_t n = lo; n < hi; ++n) {
        std::vector<Cell> row{n};
        double b = 0, v = 0;
        if (!batch.empty()) row.emplace_back(b = batch[n - lo]);
        if (table) row.emplace_back(v = lambda_r_naive(n, cfg, *table));
        if (fl.weight_method == "both") {
            const double rel = std::abs(b - v) / std::max(1.0, std::abs(v));
            worst = std::max(worst, rel);
            row.emplace_back(rel);
        }
        o.table.add(std::move(row));
    }
    o.summary["H"] = offsets_text(H);
    o.summary["l"] = fl.l;
    o.summary["R"] = R;
    o.summary["lo"] = lo;
    o.summary["hi"] = hi;
    if (fl.weight_method == "both") o.summary["max_rel_diff"] = worst;
    return o;
}

// ------------------------------------------------------- moments / s-stat

Json report_json(const MomentReport& m) {
    Json j{{"variant", std::string(to_string(m.variant))},
           {"N", m.N},
           {"H", m.H},
           {"k", m.k},
           {"l", m.l},
           {"R", m.R},
           {"empirical", m.empirical},
           {"predicted_main_term", m.predicted_main_term},
           {"ratio", m.ratio},
           {"singular_series", m.singular_series}};
    j["h"] = m.h ? Json(*m.h) : Json(nullptr);
    if (m.star) {
        j["star"] = {{"r", m.star->r}, {"eps", m.star->eps}, {"c0", m.star->c0}};
    } else {
        j["star"] = nullptr;
    }
    j["hits"] = m.hits;
    j["degenerate"] = m.degenerate;
    j["warnings"] = m.warnings;
    return j;
}

Output moment_output(const MomentReport& m) {
    Output o;
    o.table.columns = {"N",     "variant", "empirical",       "predicted", "ratio",
                       "k",     "l",       "R",               "singular_series", "hits"};
    o.table.add({m.N, std::string(to_string(m.variant)), m.empirical, m.predicted_main_term,
                 m.ratio, std::uint64_t{m.k}, std::uint64_t{m.l}, m.R, m.singular_series,
                 m.hits});
    o.summary = report_json(m);
    o.warnings = m.warnings;
    return o;
}

struct MomentSetup {
    std::uint64_t N;
    WeightConfig cfg;
    MomentOptions opts;
};

MomentSetup moment_setup(const Flags& fl) {
    const std::uint64_t N = need(fl.n_window, "--n-window");
    const auto H = single_tuple(fl);
    const double R = fl.big_r.value_or(std::pow(static_cast<double>(N), 0.25));
    MomentOptions opts;
    opts.threads = fl.threads;
    opts.singular_p_max = fl.p_max;
    opts.log_power = fl.log_power;
    return {N, WeightConfig(H, fl.l, R), opts};
}

Output cmd_moments(const Flags& fl) {
    auto s = moment_setup(fl);
    if (fl.variant == "lemma1") return moment_output(moment_lemma1(s.N, s.cfg, s.opts));
    const std::uint64_t h = fl.h.value_or(s.cfg.H.offsets().front());
    const auto table =
        FactorTable::build(s.N, 2 * s.N + s.cfg.H.max_offset(), sieve_opts(fl));
    if (fl.variant == "lemma2") return moment_output(moment_lemma2(s.N, s.cfg, h, table, s.opts));
    const StarSetSpec spec(s.N, fl.r.value_or(2), need_value(fl.eps, "--eps"));
    return moment_output(moment_lemma3(s.N, s.cfg, h, spec, table, s.opts));
}

Output cmd_s_stat(const Flags& fl) {
    auto s = moment_setup(fl);
    const auto table =
        FactorTable::build(s.N, 2 * s.N + s.cfg.H.max_offset(), sieve_opts(fl));
    const StarSetSpec spec(s.N, fl.r.value_or(2), need_value(fl.eps, "--eps"));
    auto o = moment_output(s_statistic(s.N, s.cfg, spec, table, s.opts));
    o.summary["witnesses"] = o.summary["hits"];
    return o;
}

// ---------------------------------------------------------------------- bv

Output discrepancy_output(const DiscrepancyReport& rep, bool window) {
    Output o;
    o.table.columns = {"q", "worst_a", "max_abs_dev", "main_term", "coprime_count", "other_count"};
    if (window) {
        o.table.columns.emplace_back("max_abs_dev_window");
        o.table.columns.emplace_back("main_term_window");
    }
    for (const auto& row : rep.per_q) {
        std::vector<Cell> cells{row.q, row.worst_a, row.max_abs_dev, row.main_term,
                                row.coprime_count, row.other_count};
        if (window) {
            cells.emplace_back(row.max_abs_dev_window);
            cells.emplace_back(row.main_term_window);
        }
        o.table.add(std::move(cells));
    }
    o.summary["total"] = rep.total;
    if (window) o.summary["total_window"] = rep.total_window;
    o.summary["main_term_used"] = rep.main_term_used;
    o.summary["set_size"] = rep.set_size;
    o.summary["moduli"] = rep.per_q.size();
    return o;
}

DiscrepancyConfig bv_config(const Flags& fl) {
    DiscrepancyConfig cfg;
    cfg.N = need(fl.n_window, "--n-window");
    cfg.q_max = need(fl.q_max, "--q-max");
    return cfg;
}

Output cmd_bv(const Flags& fl) {
    auto cfg = bv_config(fl);
    const auto table = FactorTable::build(2, cfg.N + 1, sieve_opts(fl));
    return discrepancy_output(bv_prime_discrepancy(cfg, table), false);
}

Output cmd_bv_star(const Flags& fl) {
    auto cfg = bv_config(fl);
    cfg.target = DiscrepancyTarget::star_set_window;
    cfg.spec = StarSetSpec(cfg.N, fl.r.value_or(2), need_value(fl.eps, "--eps"));
    const auto table = FactorTable::build(cfg.N, 2 * cfg.N, sieve_opts(fl));
    return discrepancy_output(bv_star_discrepancy(cfg, table), true);
}

std::vector<double> weights_for(const std::string& f, std::uint64_t m_max) {
    std::vector<double> w(m_max + 1, 0.0);
    if (f == "const1") {
        for (std::uint64_t m = 1; m <= m_max; ++m) w[m] = 1.0;
    } else if (f == "mobius") {
        const auto mu = mobius_up_to(m_max);
        for (std::uint64_t m = 1; m <= m_max; ++m) w[m] = mu[m];
    } else {
        std::ifstream in(f);
        if (!in) throw std::runtime_error("--f: not const1, mobius or a readable file: " + f);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            for (char& ch : line) {
                if (ch == ',') ch = ' ';
            }
            std::istringstream ls(line);
            std::uint64_t m;
            double v;
            if (!(ls >> m)) continue;
            if (!(ls >> v) || m == 0) {
                throw std::runtime_error(f + ":" + std::to_string(line_no) + ": expected 'm f(m)'");
            }
            if (m <= m_max) w[m] = v;
        }
    }
    return w;
}

Output cmd_bv_weighted(const Flags& fl) {
    auto cfg = bv_config(fl);
    if (!(fl.alpha > 0 && fl.alpha < 1)) throw UsageError("--alpha must lie in (0, 1)");
    const auto m_max = static_cast<std::uint64_t>(std::pow(double(cfg.N), 1.0 - fl.alpha)) + 2;
    const auto table = FactorTable::build(2, cfg.N + 1, sieve_opts(fl));
    auto o = discrepancy_output(weighted_discrepancy(cfg, fl.alpha, weights_for(fl.f, m_max), table),
                                false);
    o.summary["alpha"] = fl.alpha;
    o.summary["f"] = fl.f;
    return o;
}

// ------------------------------------------------------------- plumbing

std::string option_value(const CLI::Option* opt) {
    if (opt->count() == 0) return opt->get_default_str();
    std::string v;
    for (const auto& s : opt->results()) v += (v.empty() ? "" : ",") + s;
    return v;
}

void collect(const CLI::App* app, std::map<std::string, std::string>& params) {
    for (const CLI::Option* opt : app->get_options()) {
        if (opt->get_lnames().empty()) continue;
        const std::string name = opt->get_lnames().front();
        if (name == "help" || name == "out" || name == "seed" || name == "timestamp") continue;
        const std::string v = option_value(opt);
        if (!v.empty()) params[name] = v;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Flags fl;
    CLI::App app{"Balanced numbers, star sets and GPY weight experiments", "balgap"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.add_option("--out", fl.out, "Write results to this file instead of stdout");
    app.add_option("--format", fl.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", fl.threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", fl.seed, "Monte Carlo seed");
    app.add_option("--timestamp", fl.timestamp,
                   "Manifest timestamp (default: SOURCE_DATE_EPOCH or now)");

    using Handler = std::function<Output(const Flags&)>;
    std::vector<std::pair<CLI::App*, Handler>> commands;
    auto add = [&](const char* name, const char* help, Handler h) {
        CLI::App* sub = app.add_subcommand(name, help);
        commands.emplace_back(sub, std::move(h));
        return sub;
    };

    auto* classify_cmd = add("classify", "Factor shape and balance threshold", cmd_classify);
    classify_cmd->add_option("--n", fl.n, "Single integer >= 2");
    classify_cmd->add_option("--n-window", fl.n_window, "Scan [N, 2N)");
    classify_cmd->add_option("--r", fl.r, "Keep only Omega(n) = r");
    classify_cmd->add_option("--eps", fl.eps, "Also test eps-balance");

    auto* star_cmd = add("count-star", "Exact star-set count against C0 N / ln N", cmd_count_star);
    star_cmd->add_option("--n-window", fl.n_window, "Window [N, 2N)");
    star_cmd->add_option("--r", fl.r, "Number of prime factors (default 2)");
    star_cmd->add_option("--eps", fl.eps, "Star-set width");

    auto* density_cmd = add("density", "Density constant C0(r, eps)", cmd_density);
    density_cmd->add_option("--r", fl.r_list, "One or more r (default 2)");
    density_cmd->add_option("--eps", fl.eps_list, "One or more eps");
    density_cmd->add_option("--method", fl.method)
        ->check(CLI::IsMember({"auto", "quadrature", "monte-carlo"}));
    density_cmd->add_option("--samples", fl.samples, "Monte Carlo samples");
    density_cmd->add_option("--abs-tol", fl.abs_tol, "Quadrature tolerance");
    density_cmd->add_option("--tail-r-max", fl.tail_r_max, "Also report the tail sum to r_max");

    auto add_tuple_flags = [&](CLI::App* sub) {
        sub->add_option("--tuple", fl.tuple, "Offsets, e.g. 0,2,6");
        sub->add_option("--tuple-file", fl.tuple_file, "File of tuples, one per line");
        sub->add_option("--k", fl.k, "Use the generated admissible k-tuple");
    };
    auto* tuple_cmd = add("tuple", "Generate or check admissible tuples", cmd_tuple);
    add_tuple_flags(tuple_cmd);
    tuple_cmd->add_option("--tuple-out", fl.tuple_out, "Also write the tuples in tuple-file form");

    auto* sing_cmd = add("singular-series", "Truncated singular series", cmd_singular_series);
    add_tuple_flags(sing_cmd);
    sing_cmd->add_option("--p-max", fl.p_max, "Prime cutoff");

    auto* const_cmd = add("constants", "k0 and gap constants for a level theta", cmd_constants);
    const_cmd->add_option("--theta", fl.theta, "Level of distribution");
    const_cmd->add_option("--r", fl.r, "With --eps: smallest k giving two hits");
    const_cmd->add_option("--eps", fl.eps);
    const_cmd->add_option("--k-cap", fl.k_cap, "Search bound for k");

    auto* weights_cmd = add("weights", "GPY weights on [lo, lo + count)", cmd_weights);
    add_tuple_flags(weights_cmd);
    weights_cmd->add_option("--l", fl.l);
    weights_cmd->add_option("--big-r", fl.big_r, "Sieve level R");
    weights_cmd->add_option("--lo", fl.lo, "First n");
    weights_cmd->add_option("--count", fl.count, "Number of n");
    weights_cmd->add_option("--method", fl.weight_method)
        ->check(CLI::IsMember({"batch", "naive", "both"}));

    auto add_moment_flags = [&](CLI::App* sub) {
        add_tuple_flags(sub);
        sub->add_option("--n-window", fl.n_window, "Window [N, 2N)");
        sub->add_option("--l", fl.l);
        sub->add_option("--big-r", fl.big_r, "Sieve level R (default N^(1/4))");
        sub->add_option("--r", fl.r, "Star-set r (default 2)");
        sub->add_option("--eps", fl.eps, "Star-set eps");
        sub->add_option("--p-max", fl.p_max, "Singular series cutoff");
        sub->add_option("--log-power", fl.log_power, "Log exponent in the R range warnings");
    };
    auto* moments_cmd = add("moments", "Weighted moments against their main terms", cmd_moments);
    add_moment_flags(moments_cmd);
    moments_cmd->add_option("--variant", fl.variant)
        ->check(CLI::IsMember({"lemma1", "lemma2", "lemma3"}));
    moments_cmd->add_option("--shift", fl.h, "The h in H for lemma2/lemma3 (default min H)");

    auto* s_cmd = add("s-stat", "Sum of (hits - 1) Lambda^2", cmd_s_stat);
    add_moment_flags(s_cmd);

    auto add_bv_flags = [&](CLI::App* sub) {
        sub->add_option("--n-window", fl.n_window, "N");
        sub->add_option("--q-max", fl.q_max, "Largest modulus");
    };
    auto* bv_cmd = add("bv", "Prime discrepancy over moduli q <= q_max", cmd_bv);
    add_bv_flags(bv_cmd);
    auto* bvs_cmd = add("bv-star", "Star-set discrepancy over [N, 2N)", cmd_bv_star);
    add_bv_flags(bvs_cmd);
    bvs_cmd->add_option("--r", fl.r, "Default 2");
    bvs_cmd->add_option("--eps", fl.eps);
    auto* bvw_cmd = add("bv-weighted", "Weighted discrepancy over mp <= N", cmd_bv_weighted);
    add_bv_flags(bvw_cmd);
    bvw_cmd->add_option("--alpha", fl.alpha, "m <= N^(1 - alpha)");
    bvw_cmd->add_option("--f", fl.f, "const1, mobius, or a file of 'm f(m)' lines");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "balgap: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    CLI::App* chosen = nullptr;
    Handler handler;
    for (auto& [sub, h] : commands) {
        if (sub->parsed()) {
            chosen = sub;
            handler = h;
        }
    }

    RunManifest manifest;
    manifest.subcommand = chosen->get_name();
    collect(&app, manifest.parameters);
    collect(chosen, manifest.parameters);
    manifest.seed = fl.seed;
    manifest.artifact_version = BALGAP_VERSION;
    manifest.timestamp = fl.timestamp.empty() ? utc_now() : fl.timestamp;

    try {
        const Output result = handler(fl);
        std::ostringstream text;
        if (fl.format == "json") {
            write_json(text, manifest, result);
        } else {
            write_csv(text, manifest, result);
        }
        for (const auto& w : result.warnings) err << "balgap: warning: " << w << '\n';
        if (fl.out.empty()) {
            out << text.str();
        } else {
            std::ofstream f(fl.out, std::ios::binary);
            if (!(f << text.str())) throw std::runtime_error("cannot write " + fl.out);
        }
    } catch (const UsageError& e) {
        err << "balgap " << manifest.subcommand << ": " << e.what() << "\n\n" << chosen->help();
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "balgap " << manifest.subcommand << ": " << e.what() << '\n';
        return kExitComputation;
    }
    return kExitOk;
}

}  // namespace balgap::cli
