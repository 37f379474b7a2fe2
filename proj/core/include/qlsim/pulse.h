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

#ifndef QLSIM_PULSE_H
#define QLSIM_PULSE_H

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "qlsim/hilbert.h"

namespace qlsim {

enum class TransitionKind : std::uint8_t {
    AtomCarrier,
    AtomSideband,
    MolRamanCarrier,
    MolRamanSideband,
    CombCarrier,
};

/// Which pair of levels a pulse couples.
///
/// Carriers couple |lower>|n> <-> |upper>|n> for every n. Sidebands couple
/// |lower>|n+1> <-> |upper>|n>; the opposite sideband is the same kind with
/// the pair swapped. The lower member plays the |a> role of the rotation.
class TransitionSelector {
   public:
    static TransitionSelector atom(TransitionKind kind, AtomLevel lower, AtomLevel upper);
    static TransitionSelector molecule(TransitionKind kind, MolLevel lower, MolLevel upper);

    /// S|n> <-> D|n>.
    static TransitionSelector atom_carrier();
    /// S|n+1> <-> D|n>.
    static TransitionSelector atom_sideband();
    /// D|n+1> <-> S|n>.
    static TransitionSelector atom_sideband_swapped();
    /// -5/2|n> <-> -3/2|n>.
    static TransitionSelector raman_carrier();
    /// -5/2|n+1> <-> -3/2|n>.
    static TransitionSelector raman_sideband();
    /// -3/2|n+1> <-> -5/2|n>.
    static TransitionSelector raman_sideband_swapped();
    /// J0|n> <-> -3/2|n>.
    static TransitionSelector comb_carrier();

    TransitionKind kind() const {
        return kind_;
    }
    bool is_sideband() const {
        return kind_ == TransitionKind::AtomSideband || kind_ == TransitionKind::MolRamanSideband;
    }
    bool acts_on_atom() const {
        return kind_ == TransitionKind::AtomCarrier || kind_ == TransitionKind::AtomSideband;
    }
    std::uint8_t lower() const {
        return lower_;
    }
    std::uint8_t upper() const {
        return upper_;
    }

    bool operator==(const TransitionSelector &) const = default;

   private:
    TransitionSelector(TransitionKind kind, std::uint8_t lower, std::uint8_t upper)
        : kind_(kind), lower_(lower), upper_(upper) {
    }

    TransitionKind kind_;
    std::uint8_t lower_;
    std::uint8_t upper_;
};

/// Config keyword for a selector ("atom_bsb", "mol_raman_bsb_swapped", ...).
std::string_view selector_keyword(const TransitionSelector &selector);
std::optional<TransitionSelector> parse_selector_keyword(std::string_view keyword);

struct PulseSpec {
    TransitionSelector selector;
    /// Pulse area in radians, exact on the calibration transition.
    double theta;
    double phi = 0;
    /// Sidebands only: theta is exact on |lower>|n+1> <-> |upper>|n> at this n.
    std::size_t calibration_n = 0;
    /// Metadata for dephasing accrual. Does not enter the unitary.
    double duration_us = 0;

    /// Inverse rotation: same area, phase shifted by pi.
    PulseSpec inverse() const;
    PulseSpec with_phase(double new_phi) const;
};

/// Rotation angle actually applied to the pair whose upper member has Fock number n.
double effective_theta(const PulseSpec &pulse, std::size_t n);

/// Applies the pulse in place. On a leaked state the pulse is skipped and
/// recorded on the state. Throws TruncationError if a sideband would move
/// amplitude from n = n_max - 1 into n_max.
void apply_pulse_in_place(StateVector &state, const PulseSpec &pulse);

StateVector apply_pulse(StateVector state, const PulseSpec &pulse);
StateVector sequence(StateVector state, std::span<const PulseSpec> pulses);

/// "<selector> <theta/pi> <phi rad> <duration us> [calibration_n]".
std::string format_pulse_spec(const PulseSpec &pulse);
/// Throws std::invalid_argument with a reason on malformed text.
PulseSpec parse_pulse_spec(std::string_view text);

}  // namespace qlsim

#endif
