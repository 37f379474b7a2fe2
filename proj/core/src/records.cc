// Copyright 2026 The qlsim Authors
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

#include "qlsim/records.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qlsim {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_record_csv_header(std::ostream &out) {
    out << kRecordCsvHeader << '\n';
}

void write_record_csv_row(std::ostream &out, const TrialRecord &r) {
    out << r.trial_id << ',' << r.protocol << ',';
    if (r.phi_a) {
        out << format_double(*r.phi_a);
    }
    out << ',' << to_string(r.atom_outcome) << ',' << to_string(r.mol_outcome) << ',' << r.photon_counts << ','
        << r.herald_attempts << ',' << (r.valid ? 1 : 0) << '\n';
}

void write_records_csv(std::ostream &out, const std::vector<TrialRecord> &records) {
    write_record_csv_header(out);
    for (const auto &r : records) {
        write_record_csv_row(out, r);
    }
}

namespace {

template <typename T>
T parse_integer(const std::string &text, std::size_t line, const char *column) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw std::runtime_error("records:" + std::to_string(line) + ": bad " + column + " '" + text + "'");
    }
    return value;
}

}  // namespace

std::vector<TrialRecord> read_records_csv(std::istream &in) {
    std::vector<TrialRecord> out;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw std::runtime_error("records: empty input");
    }
    line_no++;
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kRecordCsvHeader) {
        throw std::runtime_error("records:1: unexpected header '" + line + "'");
    }
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cols;
        std::stringstream ss(line);
        for (std::string col; std::getline(ss, col, ',');) {
            cols.push_back(col);
        }
        if (line.back() == ',') {
            cols.emplace_back();
        }
        if (cols.size() != 8) {
            throw std::runtime_error("records:" + std::to_string(line_no) + ": expected 8 columns, got " +
                                     std::to_string(cols.size()));
        }
        TrialRecord r;
        r.trial_id = parse_integer<std::uint64_t>(cols[0], line_no, "trial_id");
        r.protocol = cols[1];
        if (!cols[2].empty()) {
            std::size_t used = 0;
            try {
                r.phi_a = std::stod(cols[2], &used);
            } catch (const std::exception &) {
                used = 0;
            }
            if (used != cols[2].size()) {
                throw std::runtime_error("records:" + std::to_string(line_no) + ": bad phi_a_rad '" + cols[2] + "'");
            }
        }
        auto atom = parse_atom_level(cols[3]);
        if (!atom) {
            throw std::runtime_error("records:" + std::to_string(line_no) + ": bad atom_outcome '" + cols[3] + "'");
        }
        r.atom_outcome = *atom;
        auto mol = parse_mol_outcome(cols[4]);
        if (!mol) {
            throw std::runtime_error("records:" + std::to_string(line_no) + ": bad mol_outcome '" + cols[4] + "'");
        }
        r.mol_outcome = *mol;
        r.photon_counts = parse_integer<std::uint32_t>(cols[5], line_no, "photon_counts");
        r.herald_attempts = parse_integer<std::uint32_t>(cols[6], line_no, "herald_attempts");
        auto valid = parse_integer<int>(cols[7], line_no, "valid");
        if (valid != 0 && valid != 1) {
            throw std::runtime_error("records:" + std::to_string(line_no) + ": valid must be 0 or 1");
        }
        r.valid = valid == 1;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<TrialRecord> read_records_csv_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open records file '" + path + "'");
    }
    return read_records_csv(in);
}

std::optional<Qubit> qubit_of_protocol(std::string_view protocol) {
    if (protocol.ends_with("_L")) {
        return Qubit::Low;
    }
    if (protocol.ends_with("_H")) {
        return Qubit::High;
    }
    return std::nullopt;
}

}  // namespace qlsim
