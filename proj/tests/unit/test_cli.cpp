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


#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "balgap/cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "output.hpp"

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = balgap::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Run& r) {
    REQUIRE(r.code == 0);
    return nlohmann::json::parse(r.out);
}

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> lines;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    }
    return lines;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("balgap_test_" + name);
}

}  // namespace

TEST_CASE("classify a prime square") {
    const auto r = run({"classify", "--n", "49", "--timestamp", "T"});
    REQUIRE(r.code == 0);
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "n,omega,threshold,is_prime,p_minus,p_plus");
    CHECK(lines[1] == "49,2,0,false,7,7");
}

TEST_CASE("density json") {
    const auto j = json_of(run({"density", "--r", "2", "--eps", "0.1", "--format", "json"}));
    CHECK(j["summary"]["value"].get<double>() ==
          doctest::Approx(2 * std::log(1.05 / 0.95)).epsilon(1e-12));
    CHECK(j["manifest"]["subcommand"] == "density");
    CHECK(j["manifest"]["parameters"]["eps"] == "0.1");
    CHECK(j["rows"].size() == 1);
}

TEST_CASE("constants report the tabulated pair and the formula") {
    const auto j = json_of(run({"constants", "--theta", "0.971", "--format", "json"}));
    CHECK(j["summary"]["tabulated"]["k0"] == 6);
    CHECK(j["summary"]["tabulated"]["gap"] == 16);
    CHECK(j["summary"]["formula"]["c_is_asymptotic"] == true);

    const auto f = json_of(run({"constants", "--theta", "0.55", "--format", "json"}));
    CHECK(f["summary"]["formula"]["k0"] == 441);
    CHECK(f["summary"]["tabulated"].is_null());

    const auto m = json_of(
        run({"constants", "--theta", "0.55", "--r", "2", "--eps", "0.2", "--format", "json"}));
    CHECK(m["summary"]["min_k"]["k_optimal_l"] == 30);
}

TEST_CASE("reruns are byte identical") {
    const std::vector<std::string> args{"density", "--r", "4", "--eps", "0.2",
                                        "--samples", "65536", "--timestamp", "2026-01-01T00:00:00Z"};
    const auto a = run(args);
    const auto b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);

    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "3"});
    const auto c = run(threaded);
    REQUIRE(c.code == 0);
    CHECK(data_lines(a.out) == data_lines(c.out));
}

TEST_CASE("manifest is embedded in csv") {
    const auto r = run({"density", "--eps", "0.2", "--seed", "7", "--timestamp", "T0"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# schema: balgap-output/1\n") == 0);
    CHECK(r.out.find("# subcommand: density\n") != std::string::npos);
    CHECK(r.out.find("# seed: 7\n") != std::string::npos);
    CHECK(r.out.find("# timestamp: T0\n") != std::string::npos);
    CHECK(r.out.find("# param eps: 0.2\n") != std::string::npos);
}

TEST_CASE("exit codes") {
    auto r = run({"no-such-command"});
    CHECK(r.code == balgap::cli::kExitUsage);
    CHECK(r.err.find("Usage") != std::string::npos);

    r = run({"density", "--bogus", "1"});
    CHECK(r.code == balgap::cli::kExitUsage);

    r = run({"classify"});
    CHECK(r.code == balgap::cli::kExitUsage);

    r = run({"density", "--eps", "1.5"});
    CHECK(r.code == balgap::cli::kExitComputation);
    CHECK(r.out.empty());

    r = run({"--help"});
    CHECK(r.code == 0);
}

TEST_CASE("non-finite numbers never reach output") {
    CHECK_THROWS_AS(balgap::cli::format_number(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(balgap::cli::format_number(HUGE_VAL), std::domain_error);
    CHECK(balgap::cli::format_number(0.1) == "0.1");
    CHECK(balgap::cli::format_number(1.0 / 3.0) == "0.333333333333333");

    balgap::cli::Json j{{"a", {{"b", std::nan("")}}}};
    CHECK_THROWS_AS(balgap::cli::require_finite(j), std::domain_error);
}

TEST_CASE("tuple files round trip through the cli") {
    const auto path = temp_path("tuples.txt");
    auto r = run({"tuple", "--k", "5", "--tuple-out", path.string()});
    REQUIRE(r.code == 0);
    {
        std::ofstream app(path, std::ios::app);
        app << "# twin pair\n0, 2\n0,1\n";
    }
    r = run({"singular-series", "--tuple-file", path.string(), "--p-max", "1000"});
    REQUIRE(r.code == 0);
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 4);
    CHECK(lines[2].rfind("\"0,2\",2,true,", 0) == 0);
    CHECK(lines[3].rfind("\"0,1\",2,false,0,", 0) == 0);
    std::filesystem::remove(path);
}

TEST_CASE("out flag writes the file") {
    const auto path = temp_path("out.csv");
    const auto r = run({"count-star", "--n-window", "10000", "--r", "2", "--eps", "0.3",
                        "--out", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto lines = data_lines(ss.str());
    REQUIRE(lines.size() == 2);
    CHECK(lines[1].rfind("10000,2,0.3,", 0) == 0);
    CHECK(lines[1].find(",217,") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("discrepancy partition") {
    for (const char* cmd : {"bv", "bv-star"}) {
        std::vector<std::string> args{cmd, "--n-window", "20000", "--q-max", "12", "--format", "json"};
        if (std::string(cmd) == "bv-star") args.insert(args.end(), {"--eps", "0.3"});
        const auto j = json_of(run(args));
        const auto size = j["summary"]["set_size"].get<std::uint64_t>();
        CHECK(j["rows"].size() == 12);
        for (const auto& row : j["rows"]) {
            CHECK(row["coprime_count"].get<std::uint64_t>() + row["other_count"].get<std::uint64_t>() ==
                  size);
        }
    }
    const auto w = json_of(run({"bv-weighted", "--n-window", "20000", "--q-max", "10", "--alpha",
                                "0.5", "--f", "mobius", "--format", "json"}));
    CHECK(w["summary"]["f"] == "mobius");
}

TEST_CASE("weights and moments") {
    const auto w = json_of(run({"weights", "--tuple", "0,2,6", "--l", "1", "--big-r", "100",
                                "--lo", "100000", "--count", "50", "--method", "both",
                                "--format", "json"}));
    CHECK(w["summary"]["max_rel_diff"].get<double>() < 1e-9);
    CHECK(w["rows"].size() == 50);

    const auto m = json_of(run({"moments", "--variant", "lemma2", "--tuple", "0,2,6",
                                "--n-window", "20000", "--shift", "2", "--format", "json"}));
    for (const char* key : {"variant", "N", "H", "k", "l", "R", "empirical", "predicted_main_term",
                            "ratio", "singular_series", "h", "star", "hits", "degenerate",
                            "warnings"}) {
        CHECK(m["summary"].contains(key));
    }
    CHECK(m["summary"]["h"] == 2);

    const auto bad_h = run({"moments", "--variant", "lemma2", "--tuple", "0,2,6",
                            "--n-window", "20000", "--shift", "3"});
    CHECK(bad_h.code == balgap::cli::kExitComputation);

    const auto s = json_of(run({"s-stat", "--tuple", "0,2,6", "--n-window", "20000", "--eps",
                                "0.3", "--format", "json"}));
    CHECK(s["summary"]["witnesses"] == s["summary"]["hits"]);
}
