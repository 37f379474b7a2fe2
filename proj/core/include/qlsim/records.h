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

#ifndef QLSIM_RECORDS_H
#define QLSIM_RECORDS_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qlsim/hilbert.h"
#include "qlsim/measurement.h"

namespace qlsim {

/// One experimental shot.
struct TrialRecord {
    std::uint64_t trial_id = 0;
    std::string protocol;
    /// Absent for population runs.
    std::optional<double> phi_a;
    AtomLevel atom_outcome = AtomLevel::D;
    MolOutcome mol_outcome = MolOutcome::Other;
    std::uint32_t photon_counts = 0;
    std::uint32_t herald_attempts = 0;
    bool valid = true;

    bool operator==(const TrialRecord &) const = default;
};

inline constexpr const char *kRecordCsvHeader =
    "trial_id,protocol,phi_a_rad,atom_outcome,mol_outcome,photon_counts,herald_attempts,valid";

void write_record_csv_header(std::ostream &out);
void write_record_csv_row(std::ostream &out, const TrialRecord &record);
void write_records_csv(std::ostream &out, const std::vector<TrialRecord> &records);

/// Parses the CSV written by write_records_csv. Throws std::runtime_error
/// naming the line on malformed input.
std::vector<TrialRecord> read_records_csv(std::istream &in);
std::vector<TrialRecord> read_records_csv_file(const std::string &path);

/// %.17g, the format used for every double in CSV and report output.
std::string format_double(double value);

/// Qubit implied by a protocol name ("parity_scan_L" -> low, "..._H" -> high).
std::optional<Qubit> qubit_of_protocol(std::string_view protocol);

}  // namespace qlsim

#endif
