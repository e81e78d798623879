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


// Result tables and the manifest every output file carries.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace balgap::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "balgap-output/1";

struct RunManifest {
    std::string subcommand;
    std::map<std::string, std::string> parameters;
    std::uint64_t seed = 0;
    std::string artifact_version;
    std::string timestamp;
};

using Cell = std::variant<std::string, std::int64_t, std::uint64_t, double, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

struct Output {
    Json summary = Json::object();
    Table table;
    std::vector<std::string> warnings;
};

// %.15g; throws std::domain_error for NaN or infinity.
std::string format_number(double v);

// Throws std::domain_error if any number in the tree is not finite.
void require_finite(const Json& j, const std::string& where = "output");

Json to_json(const Cell& c);

void write_csv(std::ostream& os, const RunManifest& m, const Output& o);
void write_json(std::ostream& os, const RunManifest& m, const Output& o);

}  // namespace balgap::cli
