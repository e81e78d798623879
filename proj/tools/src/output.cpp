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


#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace balgap::cli {

void Table::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("table row width mismatch");
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    if (!std::isfinite(v)) throw std::domain_error("refusing to write a non-finite value");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

void require_finite(const Json& j, const std::string& where) {
    if (j.is_number_float() && !std::isfinite(j.get<double>())) {
        throw std::domain_error("non-finite value in " + where);
    }
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) require_finite(v, where + "." + k);
    } else if (j.is_array()) {
        for (const auto& v : j) require_finite(v, where);
    }
}

Json to_json(const Cell& c) {
    return std::visit([](const auto& v) { return Json(v); }, c);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + '"';
}

std::string cell_text(const Cell& c) {
    struct {
        std::string operator()(const std::string& s) const { return csv_field(s); }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(std::uint64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
    } visitor;
    return std::visit(visitor, c);
}

Json manifest_json(const RunManifest& m) {
    Json params = Json::object();
    for (const auto& [k, v] : m.parameters) params[k] = v;
    return Json{{"schema", kSchema},
                {"subcommand", m.subcommand},
                {"parameters", params},
                {"seed", m.seed},
                {"artifact_version", m.artifact_version},
                {"timestamp", m.timestamp}};
}

}  // namespace

void write_csv(std::ostream& os, const RunManifest& m, const Output& o) {
    // Render fully before writing so a bad value leaves no partial file.
    std::string text = "# schema: " + std::string(kSchema) + "\n";
    text += "# subcommand: " + m.subcommand + "\n";
    for (const auto& [k, v] : m.parameters) text += "# param " + k + ": " + v + "\n";
    text += "# seed: " + std::to_string(m.seed) + "\n";
    text += "# artifact_version: " + m.artifact_version + "\n";
    text += "# timestamp: " + m.timestamp + "\n";
    for (const auto& w : o.warnings) text += "# warning: " + w + "\n";
    for (std::size_t i = 0; i < o.table.columns.size(); ++i) {
        text += (i ? "," : "") + csv_field(o.table.columns[i]);
    }
    text += '\n';
    for (const auto& row : o.table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + cell_text(row[i]);
        text += '\n';
    }
    os << text;
}

void write_json(std::ostream& os, const RunManifest& m, const Output& o) {
    Json rows = Json::array();
    for (const auto& row : o.table.rows) {
        Json obj = Json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[o.table.columns[i]] = to_json(row[i]);
        rows.push_back(std::move(obj));
    }
    Json doc{{"manifest", manifest_json(m)},
             {"summary", o.summary},
             {"warnings", o.warnings},
             {"rows", std::move(rows)}};
    require_finite(doc);
    os << doc.dump(2) << '\n';
}

}  // namespace balgap::cli
