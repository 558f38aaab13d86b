// Copyright 2026 The rydcnot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "rydcnot/common.hpp"

/// \file
/// Minimal CSV table: header names carry units, doubles are written in
/// shortest round-trip form so re-parsed values are bit-identical.

namespace rydcnot {

using CsvCell = std::variant<double, std::int64_t, std::string>;

inline std::string format_cell(const CsvCell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) {
        char buf[64];
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, *d);
        return std::string(buf, ptr);
    }
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
    return std::get<std::string>(cell);
}

class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<CsvCell> row) {
        if (row.size() != header_.size())
            throw ContractViolation("CsvTable: row width does not match header");
        rows_.push_back(std::move(row));
    }

    const std::vector<std::string>& header() const { return header_; }
    std::size_t rows() const { return rows_.size(); }

    void write(std::ostream& os) const {
        for (std::size_t k = 0; k < header_.size(); ++k) os << (k ? "," : "") << header_[k];
        os << '\n';
        for (const auto& row : rows_) {
            for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << format_cell(row[k]);
            os << '\n';
        }
    }

    std::string str() const {
        std::ostringstream os;
        write(os);
        return os.str();
    }

    void save(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        write(out);
    }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<CsvCell>> rows_;
};

/// Parsed CSV: header plus string cells.
struct CsvData {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t k = 0; k < header.size(); ++k)
            if (header[k] == name) return k;
        throw ContractViolation("CsvData: no column '" + name + "'");
    }

    double number(std::size_t row, const std::string& name) const {
        const std::string& s = rows.at(row).at(column(name));
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{}) throw ContractViolation("CsvData: not a number: " + s);
        return v;
    }
};

inline CsvData parse_csv(std::istream& in) {
    auto split = [](const std::string& line) {
        std::vector<std::string> out;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) out.push_back(cell);
        if (!line.empty() && line.back() == ',') out.emplace_back();
        return out;
    };
    CsvData d;
    std::string line;
    if (std::getline(in, line)) d.header = split(line);
    while (std::getline(in, line))
        if (!line.empty()) d.rows.push_back(split(line));
    return d;
}

inline CsvData read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return parse_csv(in);
}

}  // namespace rydcnot
