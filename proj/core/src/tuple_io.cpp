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

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "balgap/tuples.hpp"

namespace balgap {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

OffsetTuple parse_tuple(std::string_view text) {
    std::vector<std::uint64_t> offsets;
    while (true) {
        const auto comma = text.find(',');
        const std::string_view field = trim(text.substr(0, comma));
        std::uint64_t value = 0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
            throw std::invalid_argument("tuple: bad offset '" + std::string(field) + "'");
        }
        offsets.push_back(value);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    std::sort(offsets.begin(), offsets.end());
    if (std::adjacent_find(offsets.begin(), offsets.end()) != offsets.end()) {
        throw std::invalid_argument("tuple: duplicate offset");
    }
    return OffsetTuple(std::move(offsets));
}

std::vector<OffsetTuple> read_tuples(std::istream& in) {
    std::vector<OffsetTuple> tuples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view body(line);
        body = trim(body.substr(0, body.find('#')));
        if (body.empty()) continue;
        try {
            tuples.push_back(parse_tuple(body));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return tuples;
}

void write_tuples(std::ostream& out, std::span<const OffsetTuple> tuples) {
    for (const auto& t : tuples) {
        const auto offs = t.offsets();
        for (std::size_t i = 0; i < offs.size(); ++i) {
            if (i) out << ',';
            out << offs[i];
        }
        out << '\n';
    }
}

}  // namespace balgap
