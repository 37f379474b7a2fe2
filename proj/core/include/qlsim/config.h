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

#ifndef QLSIM_CONFIG_H
#define QLSIM_CONFIG_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qlsim/comb.h"
#include "qlsim/measurement.h"
#include "qlsim/noise.h"
#include "qlsim/protocols.h"

namespace qlsim {

enum class ProtocolKind : std::uint8_t {
    Prepare,
    PsiL,
    PsiH,
    ParityScanL,
    ParityScanH,
    PopulationL,
    PopulationH,
};

std::string_view to_string(ProtocolKind kind);
std::optional<ProtocolKind> parse_protocol(std::string_view text);
/// Qubit of every protocol except prepare.
std::optional<Qubit> qubit_of(ProtocolKind kind);
bool is_scan(ProtocolKind kind);

/// Classical distribution of the molecule entering each herald cycle.
struct MoleculePrior {
    double minus32 = 0.5;
    double minus52 = 0.5;
    double leaked = 0;
};

struct CombSection {
    Frequency f_rep;
    Frequency f_aom;
    std::int64_t n = 0;
    int sign = 1;
    double b_rot_hz = 0;
};

struct ExperimentConfig {
    ProtocolKind protocol = ProtocolKind::ParityScanL;
    /// Analysis phases of a scan; empty otherwise.
    std::vector<double> phi_a;
    /// Per-phi targets for scans, a single entry otherwise.
    std::vector<std::uint64_t> targets;
    /// Extra population trials recorded after a scan (for the fidelity report).
    std::uint64_t population_trials = 0;
    NoiseConfig noise;
    ProtocolPulses pulses = ProtocolPulses::defaults();
    HeraldConfig herald;
    MoleculePrior prior;
    std::uint64_t seed = 1;
    std::size_t n_max = kDefaultNMax;
    /// 0 selects 10x the summed targets.
    std::uint64_t budget = 0;
    std::uint32_t detect_threshold = kDefaultDetectThreshold;
    /// Free evolution between creation and analysis.
    double analysis_wait_us = 0;
    /// 0 disables the bootstrap in the fit report.
    std::size_t bootstrap_resamples = 1000;
    std::optional<CombSection> comb;

    /// Requested valid trials over all phases plus population trials.
    std::uint64_t total_target() const;
    std::uint64_t effective_budget() const;
};

/// Parses the sectioned key = value format. Throws ConfigError with the line and
/// field of the first problem; unknown sections and keys are rejected.
ExperimentConfig parse_config(std::istream &in);
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig load_config(const std::string &path);

/// Cross-field checks (also run by parse_config). `line` is 0 in diagnostics.
void validate_config(const ExperimentConfig &cfg);

/// Angle expression: a product/quotient of numbers and `pi`, e.g.
/// "0.25", "-pi/2", "3*pi/6". Returns nullopt on malformed text.
std::optional<double> parse_angle(std::string_view text);

/// Writes a config that parse_config reads back to an equal configuration.
void write_config(std::ostream &out, const ExperimentConfig &cfg);

}  // namespace qlsim

#endif
