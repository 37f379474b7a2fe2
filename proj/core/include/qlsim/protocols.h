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

#ifndef QLSIM_PROTOCOLS_H
#define QLSIM_PROTOCOLS_H

#include <cstdint>
#include <string_view>
#include <vector>

#include "qlsim/hilbert.h"
#include "qlsim/measurement.h"
#include "qlsim/noise.h"
#include "qlsim/pulse.h"

namespace qlsim {

/// Every pulse the protocols use, by role. Defaults carry the creation phases
/// that make the noiseless outputs equal the literal target states.
struct ProtocolPulses {
    /// -5/2|n+1> <-> -3/2|n>, pi/2: Psi_0 -> Psi_I.
    PulseSpec create_mol_sideband;
    /// S|n+1> <-> D|n>, pi: moves the motional qubit onto the atom.
    PulseSpec create_atom_sideband;
    /// Comb carrier pi, -3/2 -> |0>.
    PulseSpec comb_map;
    /// 1051 nm carrier pi, -5/2 -> -3/2.
    PulseSpec raman_map;
    PulseSpec analysis_atom;
    PulseSpec analysis_mol;
    PulseSpec analysis_comb;
    /// D|0> -> S|1>; unhide is its inverse.
    PulseSpec hide;
    /// S|n+1> <-> D|n>, pi: herald pumping.
    PulseSpec atom_pump;
    /// D|n+1> <-> S|n>, pi: QLS readout.
    PulseSpec atom_readout;
    /// -5/2|n+1> <-> -3/2|n>, pi.
    PulseSpec mol_pump;
    /// -3/2|n+1> <-> -5/2|n>, pi.
    PulseSpec mol_pump_mirror;

    static ProtocolPulses defaults();

    static std::span<const std::string_view> names();
    PulseSpec *find(std::string_view name);
    const PulseSpec *find(std::string_view name) const;
};

inline constexpr double kAtomSidebandUs = 45;
inline constexpr double kAtomCarrierUs = 10;
inline constexpr double kRamanPulseUs = 162.5 + 2 * 300;
inline constexpr double kCombPulseUs = 50;

/// Per-trial execution context: noise realization, pulse set, and the trial's
/// random stream. Every pulse goes through pulse() so molecular pulses can
/// leak.
class TrialContext {
   public:
    TrialContext(const NoiseConfig &noise, const ProtocolPulses &pulses, Rng &rng, std::size_t n_max = kDefaultNMax,
                 std::uint32_t detect_threshold = kDefaultDetectThreshold)
        : noise_(noise), pulses_(pulses), rng_(rng), n_max_(n_max), threshold_(detect_threshold) {
    }

    const NoiseConfig &noise() const {
        return noise_;
    }
    const ProtocolPulses &pulses() const {
        return pulses_;
    }
    Rng &rng() {
        return rng_;
    }
    std::size_t n_max() const {
        return n_max_;
    }
    std::uint32_t threshold() const {
        return threshold_;
    }

    void pulse(StateVector &state, const PulseSpec &spec);
    AtomDetection detect(StateVector &state);
    /// Atom/motion reset to |D> with a freshly sampled thermal n.
    void reset(StateVector &state);

    TrialNoise record;

   private:
    const NoiseConfig &noise_;
    const ProtocolPulses &pulses_;
    Rng &rng_;
    std::size_t n_max_;
    std::uint32_t threshold_;
    std::size_t pulse_index_ = 0;
};

struct HeraldConfig {
    std::size_t max_attempts = 50;
    /// Consecutive positive QLS -3/2 confirmations required after an S outcome.
    std::size_t confirmations = 1;
    /// Attempt k uses the -3/2 variant when k % period < minus32_run.
    std::size_t schedule_period = 2;
    std::size_t minus32_run = 1;
};

struct ProtocolResult {
    StateVector final_state;
    std::vector<bool> herald_outcomes;
    std::size_t attempts = 0;
    bool success = false;
    bool aborted = false;
    bool leaked = false;
    /// False if a herald the protocol depends on failed.
    bool valid = true;
};

/// Molecular state with atom in |D> and motion in |0>.
StateVector molecule_state(MolLevel mol, std::size_t n_max = kDefaultNMax);

/// Heralded preparation of -3/2. Pumping attempts alternate between the -3/2
/// and -5/2 variants; an S outcome on a -3/2 attempt is accepted after
/// `confirmations` positive QLS checks, each followed by the restoring pump.
ProtocolResult herald_prepare_minus32(StateVector state, const HeraldConfig &cfg, TrialContext &ctx);

/// One pumping attempt: atom D|0> -> S|1>, molecular sideband pi, atom
/// S|1> -> D|0>, detection. Returns true for an S outcome.
bool herald_pump_attempt(StateVector &state, bool target_minus32, TrialContext &ctx);

StateVector create_psi_L(StateVector state, TrialContext &ctx);
StateVector create_psi_L(StateVector state, const ProtocolPulses &pulses = ProtocolPulses::defaults());

/// Psi_I -> psi_H: comb pi, 1051 nm carrier pi, atomic sideband pi.
StateVector create_psi_H(StateVector state, TrialContext &ctx);
StateVector create_psi_H(StateVector state, const ProtocolPulses &pulses = ProtocolPulses::defaults());

/// Psi_0 -> Psi_I (the shared first step of both creation sequences).
StateVector create_psi_I(StateVector state, TrialContext &ctx);
StateVector create_psi_I(StateVector state, const ProtocolPulses &pulses = ProtocolPulses::defaults());

/// Low: atom carrier pi/2 at +phi_a then 1051 nm carrier pi/2 at -phi_a.
/// High: hide, comb pi/2 at +phi_a, unhide, atom carrier pi/2 at +phi_a.
StateVector analysis_pulses(StateVector state, Qubit qubit, double phi_a, TrialContext &ctx);
StateVector analysis_pulses(StateVector state, Qubit qubit, double phi_a,
                            const ProtocolPulses &pulses = ProtocolPulses::defaults());

enum class HideDirection : std::uint8_t { Hide, Unhide };
StateVector hide_unhide(StateVector state, HideDirection direction, TrialContext &ctx);
StateVector hide_unhide(StateVector state, HideDirection direction,
                        const ProtocolPulses &pulses = ProtocolPulses::defaults());

/// Reset atom/motion, molecular sideband pi -3/2|0> -> -5/2|1>, atom
/// D|1> -> S|0>, detect. True iff the atom reads S; the molecule is left in
/// -5/2 on a positive result.
bool qls_detect_minus32(StateVector &state, TrialContext &ctx);
/// Mirror of qls_detect_minus32; a positive result leaves the molecule in -3/2.
bool qls_detect_minus52(StateVector &state, TrialContext &ctx);

/// Post-trial check that the molecule is still in {-3/2, -5/2}; a positive
/// result returns it to -3/2.
bool verify_manifold(StateVector &state, TrialContext &ctx);

/// Time over which each oscillator's superposition accrues phase before its
/// analysis pulse: half of the creating pulse, every pulse in between, the
/// configured wait, and half of the analysis pulse.
struct CoherenceWindows {
    double atom_us = 0;
    double comb_us = 0;
};
CoherenceWindows coherence_windows(const ProtocolPulses &pulses, Qubit qubit, double wait_us);

}  // namespace qlsim

#endif
