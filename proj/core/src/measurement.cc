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

#include "qlsim/measurement.h"

#include <cmath>
#include <stdexcept>

#include "qlsim/protocols.h"

namespace qlsim {

std::string_view to_string(Qubit qubit) {
    return qubit == Qubit::Low ? "low" : "high";
}

std::optional<Qubit> parse_qubit(std::string_view text) {
    if (text == "low") {
        return Qubit::Low;
    }
    if (text == "high") {
        return Qubit::High;
    }
    return std::nullopt;
}

std::uint32_t sample_photon_counts(double mean, Rng &rng) {
    if (mean <= 0) {
        return 0;
    }
    return static_cast<std::uint32_t>(std::poisson_distribution<std::uint32_t>(mean)(rng));
}

AtomDetection detect_atom(StateVector &state, const NoiseConfig &cfg, std::uint32_t threshold, Rng &rng) {
    double p_s = population(state, [](const BasisLabel &l) {
        return l.atom == AtomLevel::S;
    });
    double u = std::uniform_real_distribution<double>(0, 1)(rng);
    AtomLevel projected = u < p_s ? AtomLevel::S : AtomLevel::D;
    auto amps = state.amplitudes();
    for (std::size_t k = 0; k < amps.size(); k++) {
        if (state.label_at(k).atom != projected) {
            amps[k] = 0;
        }
    }
    state.normalize();
    std::uint32_t counts =
        sample_photon_counts(projected == AtomLevel::S ? cfg.detect_bright_mean : cfg.detect_dark_mean, rng);
    return AtomDetection{projected, counts >= threshold ? AtomLevel::S : AtomLevel::D, counts};
}

void reset_atom_and_motion(StateVector &state, std::size_t new_n, Rng &rng) {
    const std::size_t n_max = state.n_max();
    if (new_n >= n_max) {
        throw TruncationError("reset Fock number outside truncation");
    }
    double u = std::uniform_real_distribution<double>(0, 1)(rng);
    if (state.leaked()) {
        auto amps = state.amplitudes();
        std::fill(amps.begin(), amps.end(), Complex(0));
        state.amplitude({AtomLevel::D, MolLevel::M_minus32, new_n}) = 1;
        return;
    }

    // Projective (atom, n) outcome; the molecule keeps its conditional state.
    double total = state.norm_squared();
    double acc = 0;
    AtomLevel atom = AtomLevel::D;
    std::size_t n = 0;
    bool found = false;
    for (std::size_t a = 0; a < kAtomLevels && !found; a++) {
        for (std::size_t k = 0; k < n_max && !found; k++) {
            double w = 0;
            for (std::size_t m = 0; m < kCoherentMolLevels; m++) {
                w += std::norm(state.amplitude({static_cast<AtomLevel>(a), static_cast<MolLevel>(m), k}));
            }
            if (w == 0) {
                continue;
            }
            atom = static_cast<AtomLevel>(a);
            n = k;
            acc += w;
            found = u * total < acc;
        }
    }

    StateVector next(n_max);
    for (std::size_t m = 0; m < kCoherentMolLevels; m++) {
        auto mol = static_cast<MolLevel>(m);
        next.amplitude({AtomLevel::D, mol, new_n}) = state.amplitude({atom, mol, n});
    }
    next.normalize();
    auto src = next.amplitudes();
    auto dst = state.amplitudes();
    std::copy(src.begin(), src.end(), dst.begin());
}

std::string_view to_string(MolOutcome outcome) {
    switch (outcome) {
        case MolOutcome::Minus32:
            return "-3/2";
        case MolOutcome::Minus52:
            return "-5/2";
        case MolOutcome::J0:
            return "0";
        case MolOutcome::Other:
            break;
    }
    return "other";
}

std::optional<MolOutcome> parse_mol_outcome(std::string_view text) {
    for (auto o : {MolOutcome::Minus32, MolOutcome::Minus52, MolOutcome::J0, MolOutcome::Other}) {
        if (text == to_string(o)) {
            return o;
        }
    }
    return std::nullopt;
}

MolOutcome detect_molecule_after_atom(StateVector &state, Qubit qubit, TrialContext &ctx) {
    if (qls_detect_minus32(state, ctx)) {
        return MolOutcome::Minus32;
    }
    if (qubit == Qubit::High) {
        // |0> is only visible after mapping it onto -3/2.
        ctx.pulse(state, ctx.pulses().comb_map);
        if (qls_detect_minus32(state, ctx)) {
            return MolOutcome::J0;
        }
    }
    if (qls_detect_minus52(state, ctx)) {
        return MolOutcome::Minus52;
    }
    return MolOutcome::Other;
}

namespace {

MolOutcome outcome_of(MolLevel mol) {
    switch (mol) {
        case MolLevel::M_minus32:
            return MolOutcome::Minus32;
        case MolLevel::M_minus52:
            return MolOutcome::Minus52;
        case MolLevel::M_J0:
            return MolOutcome::J0;
        case MolLevel::Leaked:
            break;
    }
    return MolOutcome::Other;
}

}  // namespace

std::size_t population_slot(Qubit qubit, AtomLevel atom, MolOutcome mol) {
    using P = PopulationEstimate;
    bool s = atom == AtomLevel::S;
    if (qubit == Qubit::Low) {
        switch (mol) {
            case MolOutcome::Minus52:
                return s ? P::SPlus : P::DMinus;
            case MolOutcome::Minus32:
                return s ? P::SMinus : P::DPlus;
            default:
                return P::OtherSlot;
        }
    }
    switch (mol) {
        case MolOutcome::J0:
            return s ? P::SPlus : P::DMinus;
        case MolOutcome::Minus32:
            return s ? P::SMinus : P::DPlus;
        default:
            return P::OtherSlot;
    }
}

int trial_parity(Qubit qubit, AtomLevel atom, MolOutcome mol) {
    switch (population_slot(qubit, atom, mol)) {
        case PopulationEstimate::SPlus:
        case PopulationEstimate::DPlus:
            return 1;
        case PopulationEstimate::SMinus:
        case PopulationEstimate::DMinus:
            return -1;
        default:
            return 0;
    }
}

PopulationEstimate PopulationEstimate::from_counts(Qubit qubit, const std::array<std::uint64_t, kSlots> &counts) {
    PopulationEstimate est;
    est.qubit = qubit;
    est.counts = counts;
    for (auto c : counts) {
        est.total += c;
    }
    if (est.total == 0) {
        throw std::invalid_argument("population estimate needs at least one trial");
    }
    double n = static_cast<double>(est.total);
    for (std::size_t k = 0; k < kSlots; k++) {
        est.p[k] = static_cast<double>(counts[k]) / n;
        est.stderr_[k] = std::sqrt(est.p[k] * (1 - est.p[k]) / n);
    }
    return est;
}

double PopulationEstimate::get(AtomLevel atom, MolLevel mol) const {
    return p[population_slot(qubit, atom, outcome_of(mol))];
}

double PopulationEstimate::error(AtomLevel atom, MolLevel mol) const {
    return stderr_[population_slot(qubit, atom, outcome_of(mol))];
}

double parity(const PopulationEstimate &pop, Qubit qubit) {
    if (pop.qubit != qubit) {
        throw std::invalid_argument("population estimate is for the " + std::string(to_string(pop.qubit)) +
                                    " qubit subspace, not " + std::string(to_string(qubit)));
    }
    using P = PopulationEstimate;
    return pop.p[P::SPlus] + pop.p[P::DPlus] - pop.p[P::SMinus] - pop.p[P::DMinus];
}

std::array<double, PopulationEstimate::kSlots> exact_populations(const StateVector &state, Qubit qubit) {
    std::array<double, PopulationEstimate::kSlots> out{};
    if (state.leaked()) {
        out[PopulationEstimate::OtherSlot] = 1;
        return out;
    }
    auto amps = state.amplitudes();
    for (std::size_t k = 0; k < amps.size(); k++) {
        BasisLabel label = state.label_at(k);
        out[population_slot(qubit, label.atom, outcome_of(label.mol))] += std::norm(amps[k]);
    }
    return out;
}

double exact_parity(const StateVector &state, Qubit qubit) {
    auto p = exact_populations(state, qubit);
    using P = PopulationEstimate;
    return p[P::SPlus] + p[P::DPlus] - p[P::SMinus] - p[P::DMinus];
}

}  // namespace qlsim
