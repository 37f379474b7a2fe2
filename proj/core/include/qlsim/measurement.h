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

#ifndef QLSIM_MEASUREMENT_H
#define QLSIM_MEASUREMENT_H

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "qlsim/hilbert.h"
#include "qlsim/noise.h"

namespace qlsim {

class TrialContext;

enum class Qubit : std::uint8_t { Low, High };

std::string_view to_string(Qubit qubit);
std::optional<Qubit> parse_qubit(std::string_view text);

inline constexpr std::uint32_t kDefaultDetectThreshold = 6;

struct AtomDetection {
    /// Level the state was projected onto (Born rule).
    AtomLevel projected;
    /// Level reported after thresholding the photon count.
    AtomLevel outcome;
    std::uint32_t photon_counts;
};

/// Born-rule projection of the atom followed by a Poisson photon count
/// (bright mean if projected to S, dark mean otherwise); counts >= threshold
/// report S. Collapses `state` in place.
AtomDetection detect_atom(StateVector &state, const NoiseConfig &cfg, std::uint32_t threshold, Rng &rng);

/// Poisson draw that returns 0 for a zero mean.
std::uint32_t sample_photon_counts(double mean, Rng &rng);

/// Traces out atom and motion by sampling a projective (atom, n) outcome, then
/// re-prepares |D>|new_n> with the molecule's conditional state.
void reset_atom_and_motion(StateVector &state, std::size_t new_n, Rng &rng);

enum class MolOutcome : std::uint8_t { Minus32, Minus52, J0, Other };

std::string_view to_string(MolOutcome outcome);
std::optional<MolOutcome> parse_mol_outcome(std::string_view text);

/// Sequential QLS identification after the atom was read out: -3/2 first,
/// then -5/2 (low qubit), or the comb-mapped |0> route then -5/2 (high
/// qubit). Returns the first positive identification; collapse is cumulative.
MolOutcome detect_molecule_after_atom(StateVector &state, Qubit qubit, TrialContext &ctx);

/// Populations over the designated four-state subspace of one qubit plus an
/// "other" bucket, normalized over all trials.
struct PopulationEstimate {
    /// Slot order of `p`, `counts`, `stderr_`.
    static constexpr std::size_t kSlots = 5;
    enum Slot : std::size_t { SPlus = 0, DPlus = 1, SMinus = 2, DMinus = 3, OtherSlot = 4 };

    Qubit qubit = Qubit::Low;
    std::array<double, kSlots> p{};
    std::array<std::uint64_t, kSlots> counts{};
    std::array<double, kSlots> stderr_{};
    std::uint64_t total = 0;

    /// Builds probabilities and binomial standard errors sqrt(p(1-p)/N).
    static PopulationEstimate from_counts(Qubit qubit, const std::array<std::uint64_t, kSlots> &counts);

    double get(AtomLevel atom, MolLevel mol) const;
    double error(AtomLevel atom, MolLevel mol) const;
};

/// Slot of a joint outcome for the qubit's subspace.
///
/// Low: SPlus=(S,-5/2), DPlus=(D,-3/2), SMinus=(S,-3/2), DMinus=(D,-5/2).
/// High: SPlus=(S,0), DPlus=(D,2), SMinus=(S,2), DMinus=(D,0).
/// "Plus" slots enter the parity with + sign.
std::size_t population_slot(Qubit qubit, AtomLevel atom, MolOutcome mol);

/// Per-trial parity value: +1, -1, or 0 for outcomes outside the subspace.
int trial_parity(Qubit qubit, AtomLevel atom, MolOutcome mol);

/// Low: P(S,-5/2) + P(D,-3/2) - P(S,-3/2) - P(D,-5/2).
/// High: P(S,0) + P(D,2) - P(S,2) - P(D,0).
/// Throws std::invalid_argument if `pop` was built for the other qubit.
double parity(const PopulationEstimate &pop, Qubit qubit);

/// Exact populations of a state over the qubit subspace (no sampling). Leaked
/// states put everything in the other bucket.
std::array<double, PopulationEstimate::kSlots> exact_populations(const StateVector &state, Qubit qubit);
double exact_parity(const StateVector &state, Qubit qubit);

}  // namespace qlsim

#endif
