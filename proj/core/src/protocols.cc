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

#include "qlsim/protocols.h"

#include <array>
#include <numbers>

namespace qlsim {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<std::string_view, 12> kPulseNames = {
    "create_mol_sideband", "create_atom_sideband", "comb_map",     "raman_map",
    "analysis_atom",       "analysis_mol",         "analysis_comb", "hide",
    "atom_pump",           "atom_readout",         "mol_pump",      "mol_pump_mirror",
};

template <typename Self>
auto find_pulse(Self &self, std::string_view name) -> decltype(&self.hide) {
    if (name == "create_mol_sideband") return &self.create_mol_sideband;
    if (name == "create_atom_sideband") return &self.create_atom_sideband;
    if (name == "comb_map") return &self.comb_map;
    if (name == "raman_map") return &self.raman_map;
    if (name == "analysis_atom") return &self.analysis_atom;
    if (name == "analysis_mol") return &self.analysis_mol;
    if (name == "analysis_comb") return &self.analysis_comb;
    if (name == "hide") return &self.hide;
    if (name == "atom_pump") return &self.atom_pump;
    if (name == "atom_readout") return &self.atom_readout;
    if (name == "mol_pump") return &self.mol_pump;
    if (name == "mol_pump_mirror") return &self.mol_pump_mirror;
    return nullptr;
}

// Shared driver for the pure overloads: ideal noise never draws randomness.
template <typename F>
StateVector run_noiseless(StateVector state, const ProtocolPulses &pulses, F &&body) {
    static const NoiseConfig kIdeal = NoiseConfig::ideal();
    Rng rng(0);
    TrialContext ctx(kIdeal, pulses, rng, state.n_max());
    return body(std::move(state), ctx);
}

}  // namespace

ProtocolPulses ProtocolPulses::defaults() {
    using TS = TransitionSelector;
    return ProtocolPulses{
        .create_mol_sideband = {TS::raman_sideband(), kPi / 2, -kPi / 2, 0, kRamanPulseUs},
        .create_atom_sideband = {TS::atom_sideband(), kPi, kPi / 2, 0, kAtomSidebandUs},
        .comb_map = {TS::comb_carrier(), kPi, -kPi / 2, 0, kCombPulseUs},
        .raman_map = {TS::raman_carrier(), kPi, kPi / 2, 0, kRamanPulseUs},
        .analysis_atom = {TS::atom_carrier(), kPi / 2, 0, 0, kAtomCarrierUs},
        .analysis_mol = {TS::raman_carrier(), kPi / 2, 0, 0, kRamanPulseUs},
        .analysis_comb = {TS::comb_carrier(), kPi / 2, 0, 0, kCombPulseUs},
        .hide = {TS::atom_sideband(), kPi, 0, 0, kAtomSidebandUs},
        .atom_pump = {TS::atom_sideband(), kPi, 0, 0, kAtomSidebandUs},
        .atom_readout = {TS::atom_sideband_swapped(), kPi, 0, 0, kAtomSidebandUs},
        .mol_pump = {TS::raman_sideband(), kPi, 0, 0, kRamanPulseUs},
        .mol_pump_mirror = {TS::raman_sideband_swapped(), kPi, 0, 0, kRamanPulseUs},
    };
}

std::span<const std::string_view> ProtocolPulses::names() {
    return kPulseNames;
}

PulseSpec *ProtocolPulses::find(std::string_view name) {
    return find_pulse(*this, name);
}

const PulseSpec *ProtocolPulses::find(std::string_view name) const {
    return find_pulse(*this, name);
}

void TrialContext::pulse(StateVector &state, const PulseSpec &spec) {
    if (!spec.selector.acts_on_atom() && !state.leaked() && sample_event(noise_.leak_per_pulse, rng_)) {
        state.mark_leaked();
        record.leak_events.push_back(pulse_index_);
    }
    pulse_index_++;
    apply_pulse_in_place(state, spec);
}

AtomDetection TrialContext::detect(StateVector &state) {
    return detect_atom(state, noise_, threshold_, rng_);
}

void TrialContext::reset(StateVector &state) {
    reset_atom_and_motion(state, sample_initial_motion(noise_, rng_, n_max_), rng_);
}

StateVector molecule_state(MolLevel mol, std::size_t n_max) {
    if (mol == MolLevel::Leaked) {
        StateVector state = StateVector::basis_state({AtomLevel::D, MolLevel::M_minus32, 0}, n_max);
        state.mark_leaked();
        return state;
    }
    return StateVector::basis_state({AtomLevel::D, mol, 0}, n_max);
}

bool herald_pump_attempt(StateVector &state, bool target_minus32, TrialContext &ctx) {
    const ProtocolPulses &p = ctx.pulses();
    ctx.reset(state);
    ctx.pulse(state, p.atom_pump);
    ctx.pulse(state, target_minus32 ? p.mol_pump : p.mol_pump_mirror);
    ctx.pulse(state, p.atom_pump);
    return ctx.detect(state).outcome == AtomLevel::S;
}

ProtocolResult herald_prepare_minus32(StateVector state, const HeraldConfig &cfg, TrialContext &ctx) {
    if (cfg.schedule_period == 0 || cfg.minus32_run == 0) {
        throw std::invalid_argument("herald schedule needs a positive period and -3/2 run");
    }
    ProtocolResult result;
    while (result.attempts < cfg.max_attempts) {
        bool minus32 = result.attempts % cfg.schedule_period < cfg.minus32_run;
        bool bright = herald_pump_attempt(state, minus32, ctx);
        result.attempts++;
        result.herald_outcomes.push_back(bright);
        if (!minus32 || !bright) {
            continue;
        }
        bool confirmed = true;
        for (std::size_t k = 0; k < cfg.confirmations && confirmed; k++) {
            confirmed = qls_detect_minus32(state, ctx) && herald_pump_attempt(state, true, ctx);
        }
        if (confirmed) {
            result.success = true;
            break;
        }
    }
    result.aborted = !result.success;
    result.leaked = state.leaked();
    result.valid = result.success;
    result.final_state = std::move(state);
    return result;
}

StateVector create_psi_I(StateVector state, TrialContext &ctx) {
    ctx.pulse(state, ctx.pulses().create_mol_sideband);
    return state;
}

StateVector create_psi_I(StateVector state, const ProtocolPulses &pulses) {
    return run_noiseless(std::move(state), pulses, [](StateVector s, TrialContext &ctx) {
        return create_psi_I(std::move(s), ctx);
    });
}

StateVector create_psi_L(StateVector state, TrialContext &ctx) {
    ctx.pulse(state, ctx.pulses().create_mol_sideband);
    ctx.pulse(state, ctx.pulses().create_atom_sideband);
    return state;
}

StateVector create_psi_L(StateVector state, const ProtocolPulses &pulses) {
    return run_noiseless(std::move(state), pulses, [](StateVector s, TrialContext &ctx) {
        return create_psi_L(std::move(s), ctx);
    });
}

StateVector create_psi_H(StateVector state, TrialContext &ctx) {
    // Comb first so the 1051 nm carrier finds -3/2 empty.
    ctx.pulse(state, ctx.pulses().comb_map);
    ctx.pulse(state, ctx.pulses().raman_map);
    ctx.pulse(state, ctx.pulses().create_atom_sideband);
    return state;
}

StateVector create_psi_H(StateVector state, const ProtocolPulses &pulses) {
    return run_noiseless(std::move(state), pulses, [](StateVector s, TrialContext &ctx) {
        return create_psi_H(std::move(s), ctx);
    });
}

StateVector hide_unhide(StateVector state, HideDirection direction, TrialContext &ctx) {
    const PulseSpec &hide = ctx.pulses().hide;
    ctx.pulse(state, direction == HideDirection::Hide ? hide : hide.inverse());
    return state;
}

StateVector hide_unhide(StateVector state, HideDirection direction, const ProtocolPulses &pulses) {
    return run_noiseless(std::move(state), pulses, [direction](StateVector s, TrialContext &ctx) {
        return hide_unhide(std::move(s), direction, ctx);
    });
}

StateVector analysis_pulses(StateVector state, Qubit qubit, double phi_a, TrialContext &ctx) {
    const ProtocolPulses &p = ctx.pulses();
    if (qubit == Qubit::Low) {
        ctx.pulse(state, p.analysis_atom.with_phase(p.analysis_atom.phi + phi_a));
        ctx.pulse(state, p.analysis_mol.with_phase(p.analysis_mol.phi - phi_a));
        return state;
    }
    state = hide_unhide(std::move(state), HideDirection::Hide, ctx);
    ctx.pulse(state, p.analysis_comb.with_phase(p.analysis_comb.phi + phi_a));
    state = hide_unhide(std::move(state), HideDirection::Unhide, ctx);
    ctx.pulse(state, p.analysis_atom.with_phase(p.analysis_atom.phi + phi_a));
    return state;
}

StateVector analysis_pulses(StateVector state, Qubit qubit, double phi_a, const ProtocolPulses &pulses) {
    return run_noiseless(std::move(state), pulses, [qubit, phi_a](StateVector s, TrialContext &ctx) {
        return analysis_pulses(std::move(s), qubit, phi_a, ctx);
    });
}

bool qls_detect_minus32(StateVector &state, TrialContext &ctx) {
    ctx.reset(state);
    ctx.pulse(state, ctx.pulses().mol_pump);
    ctx.pulse(state, ctx.pulses().atom_readout);
    return ctx.detect(state).outcome == AtomLevel::S;
}

bool qls_detect_minus52(StateVector &state, TrialContext &ctx) {
    ctx.reset(state);
    ctx.pulse(state, ctx.pulses().mol_pump_mirror);
    ctx.pulse(state, ctx.pulses().atom_readout);
    return ctx.detect(state).outcome == AtomLevel::S;
}

bool verify_manifold(StateVector &state, TrialContext &ctx) {
    if (qls_detect_minus32(state, ctx)) {
        herald_pump_attempt(state, true, ctx);
        return true;
    }
    return qls_detect_minus52(state, ctx);
}

CoherenceWindows coherence_windows(const ProtocolPulses &p, Qubit qubit, double wait_us) {
    CoherenceWindows w;
    if (qubit == Qubit::Low) {
        w.atom_us = p.create_atom_sideband.duration_us / 2 + wait_us + p.analysis_atom.duration_us / 2;
        return w;
    }
    double hidden = 2 * p.hide.duration_us + p.analysis_comb.duration_us;
    w.atom_us = p.create_atom_sideband.duration_us / 2 + wait_us + hidden + p.analysis_atom.duration_us / 2;
    w.comb_us = p.comb_map.duration_us / 2 + p.raman_map.duration_us + p.create_atom_sideband.duration_us + wait_us +
                p.hide.duration_us + p.analysis_comb.duration_us / 2;
    return w;
}

}  // namespace qlsim
