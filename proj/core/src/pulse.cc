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

#include "qlsim/pulse.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <vector>

namespace qlsim {

namespace {

bool is_atom_pair(std::uint8_t lower, std::uint8_t upper) {
    return lower != upper && lower < kAtomLevels && upper < kAtomLevels;
}

bool is_pair(MolLevel lower, MolLevel upper, MolLevel x, MolLevel y) {
    return (lower == x && upper == y) || (lower == y && upper == x);
}

struct SelectorName {
    std::string_view keyword;
    TransitionSelector (*make)();
};

const SelectorName kSelectorNames[] = {
    {"atom_carrier", &TransitionSelector::atom_carrier},
    {"atom_bsb", &TransitionSelector::atom_sideband},
    {"atom_bsb_swapped", &TransitionSelector::atom_sideband_swapped},
    {"mol_raman_carrier", &TransitionSelector::raman_carrier},
    {"mol_raman_bsb", &TransitionSelector::raman_sideband},
    {"mol_raman_bsb_swapped", &TransitionSelector::raman_sideband_swapped},
    {"comb_carrier", &TransitionSelector::comb_carrier},
};

// Applies the 2x2 rotation to amplitudes (alpha on |a>, beta on |b>).
inline void rotate_pair(Complex &alpha, Complex &beta, double theta, Complex phase) {
    double c = std::cos(theta / 2);
    double s = std::sin(theta / 2);
    Complex a = alpha;
    Complex b = beta;
    const Complex minus_i(0, -1);
    alpha = c * a + minus_i * s * std::conj(phase) * b;
    beta = minus_i * s * phase * a + c * b;
}

}  // namespace

TransitionSelector TransitionSelector::atom(TransitionKind kind, AtomLevel lower, AtomLevel upper) {
    if (kind != TransitionKind::AtomCarrier && kind != TransitionKind::AtomSideband) {
        throw std::invalid_argument("atom selector needs an atom transition kind");
    }
    auto lo = static_cast<std::uint8_t>(lower);
    auto hi = static_cast<std::uint8_t>(upper);
    if (!is_atom_pair(lo, hi)) {
        throw std::invalid_argument("atom transitions pair S with D");
    }
    return TransitionSelector(kind, lo, hi);
}

TransitionSelector TransitionSelector::molecule(TransitionKind kind, MolLevel lower, MolLevel upper) {
    switch (kind) {
        case TransitionKind::MolRamanCarrier:
        case TransitionKind::MolRamanSideband:
            if (!is_pair(lower, upper, MolLevel::M_minus32, MolLevel::M_minus52)) {
                throw std::invalid_argument("1051 nm Raman transitions pair -3/2 with -5/2");
            }
            break;
        case TransitionKind::CombCarrier:
            if (!is_pair(lower, upper, MolLevel::M_minus32, MolLevel::M_J0)) {
                throw std::invalid_argument("comb transitions pair -3/2 with 0");
            }
            break;
        default:
            throw std::invalid_argument("molecule selector needs a molecular transition kind");
    }
    return TransitionSelector(kind, static_cast<std::uint8_t>(lower), static_cast<std::uint8_t>(upper));
}

TransitionSelector TransitionSelector::atom_carrier() {
    return atom(TransitionKind::AtomCarrier, AtomLevel::S, AtomLevel::D);
}
TransitionSelector TransitionSelector::atom_sideband() {
    return atom(TransitionKind::AtomSideband, AtomLevel::S, AtomLevel::D);
}
TransitionSelector TransitionSelector::atom_sideband_swapped() {
    return atom(TransitionKind::AtomSideband, AtomLevel::D, AtomLevel::S);
}
TransitionSelector TransitionSelector::raman_carrier() {
    return molecule(TransitionKind::MolRamanCarrier, MolLevel::M_minus52, MolLevel::M_minus32);
}
TransitionSelector TransitionSelector::raman_sideband() {
    return molecule(TransitionKind::MolRamanSideband, MolLevel::M_minus52, MolLevel::M_minus32);
}
TransitionSelector TransitionSelector::raman_sideband_swapped() {
    return molecule(TransitionKind::MolRamanSideband, MolLevel::M_minus32, MolLevel::M_minus52);
}
TransitionSelector TransitionSelector::comb_carrier() {
    return molecule(TransitionKind::CombCarrier, MolLevel::M_J0, MolLevel::M_minus32);
}

std::string_view selector_keyword(const TransitionSelector &selector) {
    for (const auto &entry : kSelectorNames) {
        if (entry.make() == selector) {
            return entry.keyword;
        }
    }
    // Reversed carriers have no keyword of their own.
    return "custom";
}

std::optional<TransitionSelector> parse_selector_keyword(std::string_view keyword) {
    for (const auto &entry : kSelectorNames) {
        if (entry.keyword == keyword) {
            return entry.make();
        }
    }
    return std::nullopt;
}

PulseSpec PulseSpec::inverse() const {
    PulseSpec out = *this;
    out.phi = phi + std::numbers::pi;
    return out;
}

PulseSpec PulseSpec::with_phase(double new_phi) const {
    PulseSpec out = *this;
    out.phi = new_phi;
    return out;
}

double effective_theta(const PulseSpec &pulse, std::size_t n) {
    if (!pulse.selector.is_sideband()) {
        return pulse.theta;
    }
    return pulse.theta * std::sqrt(static_cast<double>(n + 1) / static_cast<double>(pulse.calibration_n + 1));
}

void apply_pulse_in_place(StateVector &state, const PulseSpec &pulse) {
    if (pulse.theta < 0) {
        throw std::invalid_argument("pulse area must be non-negative");
    }
    if (state.leaked()) {
        state.record_skipped_pulse();
        return;
    }
    const std::size_t n_max = state.n_max();
    const TransitionSelector &sel = pulse.selector;
    const Complex phase = std::polar(1.0, pulse.phi);
    auto amps = state.amplitudes();

    if (sel.acts_on_atom()) {
        auto lower = static_cast<AtomLevel>(sel.lower());
        auto upper = static_cast<AtomLevel>(sel.upper());
        for (std::size_t m = 0; m < kCoherentMolLevels; m++) {
            auto mol = static_cast<MolLevel>(m);
            if (sel.kind() == TransitionKind::AtomCarrier) {
                for (std::size_t n = 0; n < n_max; n++) {
                    rotate_pair(amps[state.index_of({lower, mol, n})], amps[state.index_of({upper, mol, n})],
                                pulse.theta, phase);
                }
                continue;
            }
            for (std::size_t n = 0; n + 1 < n_max; n++) {
                rotate_pair(amps[state.index_of({lower, mol, n + 1})], amps[state.index_of({upper, mol, n})],
                            effective_theta(pulse, n), phase);
            }
            Complex edge = amps[state.index_of({upper, mol, n_max - 1})];
            if (std::norm(edge) > 1e-12 && std::abs(std::sin(effective_theta(pulse, n_max - 1) / 2)) > 1e-12) {
                throw TruncationError("sideband would populate n = n_max = " + std::to_string(n_max));
            }
        }
        return;
    }

    auto lower = static_cast<MolLevel>(sel.lower());
    auto upper = static_cast<MolLevel>(sel.upper());
    for (std::size_t a = 0; a < kAtomLevels; a++) {
        auto atom = static_cast<AtomLevel>(a);
        if (!sel.is_sideband()) {
            for (std::size_t n = 0; n < n_max; n++) {
                rotate_pair(amps[state.index_of({atom, lower, n})], amps[state.index_of({atom, upper, n})],
                            pulse.theta, phase);
            }
            continue;
        }
        for (std::size_t n = 0; n + 1 < n_max; n++) {
            rotate_pair(amps[state.index_of({atom, lower, n + 1})], amps[state.index_of({atom, upper, n})],
                        effective_theta(pulse, n), phase);
        }
        Complex edge = amps[state.index_of({atom, upper, n_max - 1})];
        if (std::norm(edge) > 1e-12 && std::abs(std::sin(effective_theta(pulse, n_max - 1) / 2)) > 1e-12) {
            throw TruncationError("sideband would populate n = n_max = " + std::to_string(n_max));
        }
    }
}

StateVector apply_pulse(StateVector state, const PulseSpec &pulse) {
    apply_pulse_in_place(state, pulse);
    return state;
}

StateVector sequence(StateVector state, std::span<const PulseSpec> pulses) {
    for (const auto &pulse : pulses) {
        apply_pulse_in_place(state, pulse);
    }
    return state;
}

std::string format_pulse_spec(const PulseSpec &pulse) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), " %.17g %.17g %.17g", pulse.theta / std::numbers::pi, pulse.phi,
                  pulse.duration_us);
    std::string out = std::string(selector_keyword(pulse.selector)) + buf;
    if (pulse.calibration_n != 0) {
        out += " " + std::to_string(pulse.calibration_n);
    }
    return out;
}

PulseSpec parse_pulse_spec(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::vector<std::string> tokens;
    for (std::string tok; in >> tok;) {
        tokens.push_back(tok);
    }
    if (tokens.size() < 4 || tokens.size() > 5) {
        throw std::invalid_argument("expected '<selector> <theta/pi> <phi rad> <duration us> [calibration_n]'");
    }
    auto selector = parse_selector_keyword(tokens[0]);
    if (!selector) {
        throw std::invalid_argument("unknown selector '" + tokens[0] + "'");
    }
    auto number = [](const std::string &tok, const char *what) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != tok.size() || !std::isfinite(v)) {
            throw std::invalid_argument(std::string("bad ") + what + " '" + tok + "'");
        }
        return v;
    };
    PulseSpec pulse{*selector, number(tokens[1], "theta") * std::numbers::pi, number(tokens[2], "phi"), 0,
                    number(tokens[3], "duration")};
    if (pulse.theta < 0) {
        throw std::invalid_argument("theta must be non-negative");
    }
    if (pulse.duration_us < 0) {
        throw std::invalid_argument("duration must be non-negative");
    }
    if (tokens.size() == 5) {
        std::size_t cal = 0;
        auto [ptr, ec] = std::from_chars(tokens[4].data(), tokens[4].data() + tokens[4].size(), cal);
        if (ec != std::errc() || ptr != tokens[4].data() + tokens[4].size()) {
            throw std::invalid_argument("bad calibration_n '" + tokens[4] + "'");
        }
        pulse.calibration_n = cal;
    }
    return pulse;
}

}  // namespace qlsim
