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

#ifndef QLSIM_CAMPAIGN_H
#define QLSIM_CAMPAIGN_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qlsim/config.h"
#include "qlsim/measurement.h"
#include "qlsim/records.h"

namespace qlsim {

/// Contiguous run of trials following one successful herald.
struct Block {
    /// Index into phi_a, or npos for population trials.
    std::size_t slot;
    std::uint64_t herald_attempts;
    std::uint64_t trials;
    /// Ended by a failed manifold verification (otherwise target reached or
    /// budget exhausted, i.e. censored).
    bool broken;
};

struct CampaignSummary {
    ProtocolKind protocol = ProtocolKind::ParityScanL;
    std::vector<double> phi_a;
    std::vector<std::uint64_t> targets;
    std::vector<std::uint64_t> valid_counts;
    std::vector<std::uint64_t> invalid_counts;
    std::uint64_t population_target = 0;
    std::uint64_t population_valid = 0;
    std::uint64_t population_invalid = 0;

    std::uint64_t herald_cycles = 0;
    std::uint64_t herald_successes = 0;
    std::uint64_t herald_aborted = 0;
    std::uint64_t herald_attempts = 0;
    std::uint64_t herald_attempts_successful = 0;

    std::uint64_t trials_valid = 0;
    std::uint64_t trials_invalid = 0;
    /// Trials in which the molecule left the manifold (per-trial or per-pulse).
    std::uint64_t leak_trials = 0;
    std::uint64_t budget = 0;
    std::uint64_t budget_used = 0;
    bool budget_exhausted = false;

    /// Mean |<target|state>|^2 after creation (psi_L / psi_H only).
    double mean_creation_fidelity = 0;

    std::vector<Block> blocks;
    std::vector<TrialRecord> records;
};

/// Everything a single trial needs beyond its index.
struct TrialRequest {
    std::uint64_t trial_id;
    std::optional<double> phi_a;
};

struct TrialResult {
    TrialRecord record;
    bool leaked = false;
    double creation_fidelity = 0;
};

/// One heralded trial of the configured protocol (not prepare): start state
/// from the preparation error model, creation, dephasing plus analysis for
/// scans, joint detection, manifold verification. Depends only on the config
/// and the request.
TrialResult run_trial(const ExperimentConfig &cfg, const TrialRequest &request);

/// Heralded campaign: after each successful herald the protocol repeats at
/// the current phi_a until the manifold check fails (a new phi_a is drawn
/// uniformly among incomplete values) or the target is reached (next
/// incomplete value in order). Stops when all targets are met or the budget
/// runs out; `workers` > 1 evaluates fixed-phi trials in parallel with
/// identical results.
CampaignSummary run_campaign(const ExperimentConfig &cfg, std::size_t workers = 1);

/// Population-only campaign for the configured qubit (no analysis pulses).
PopulationEstimate run_population(const ExperimentConfig &cfg, std::size_t workers = 1);

/// Writes records.csv, summary.txt, blocks.csv and the protocol's analysis
/// outputs (fit.txt, fringe.csv, populations.txt, fidelity.txt, state.txt,
/// comb.txt) into `dir`, creating it if needed.
void write_outputs(const std::filesystem::path &dir, const ExperimentConfig &cfg, const CampaignSummary &summary);

void write_summary(std::ostream &out, const CampaignSummary &summary);
void write_populations(std::ostream &out, const PopulationEstimate &pop);

}  // namespace qlsim

#endif
