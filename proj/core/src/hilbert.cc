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

#include "qlsim/hilbert.h"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace qlsim {

std::string_view to_string(AtomLevel level) {
    return level == AtomLevel::S ? "S" : "D";
}

std::string_view to_string(MolLevel level) {
    switch (level) {
        case MolLevel::M_minus32:
            return "-3/2";
        case MolLevel::M_minus52:
            return "-5/2";
        case MolLevel::M_J0:
            return "0";
        case MolLevel::Leaked:
            break;
    }
    return "other";
}

std::optional<AtomLevel> parse_atom_level(std::string_view text) {
    if (text == "S") {
        return AtomLevel::S;
    }
    if (text == "D") {
        return AtomLevel::D;
    }
    return std::nullopt;
}

std::optional<MolLevel> parse_mol_level(std::string_view text) {
    for (auto level : {MolLevel::M_minus32, MolLevel::M_minus52, MolLevel::M_J0, MolLevel::Leaked}) {
        if (text == to_string(level)) {
            return level;
        }
    }
    return std::nullopt;
}

std::ostream &operator<<(std::ostream &out, const BasisLabel &label) {
    return out << "|" << to_string(label.atom) << "," << to_string(label.mol) << "," << label.n << ">";
}

StateVector::StateVector(std::size_t n_max) : n_max_(n_max), amps_(kAtomLevels * kCoherentMolLevels * n_max) {
    if (n_max == 0) {
        throw std::invalid_argument("n_max must be positive");
    }
}

StateVector StateVector::basis_state(const BasisLabel &label, std::size_t n_max) {
    StateVector state(n_max);
    state.amps_[state.index_of(label)] = 1.0;
    return state;
}

StateVector StateVector::from_terms(
    std::initializer_list<std::pair<BasisLabel, Complex>> terms, std::size_t n_max) {
    StateVector state(n_max);
    for (const auto &[label, amp] : terms) {
        state.amps_[state.index_of(label)] += amp;
    }
    if (state.norm_squared() == 0) {
        throw std::invalid_argument("from_terms: zero vector");
    }
    state.normalize();
    return state;
}

std::size_t StateVector::index_of(const BasisLabel &label) const {
    if (label.mol == MolLevel::Leaked) {
        throw std::invalid_argument("Leaked is a classical flag, not a basis label");
    }
    if (label.n >= n_max_) {
        std::ostringstream msg;
        msg << "Fock number " << label.n << " outside truncation n_max=" << n_max_;
        throw TruncationError(msg.str());
    }
    return (static_cast<std::size_t>(label.atom) * kCoherentMolLevels + static_cast<std::size_t>(label.mol)) * n_max_ +
           label.n;
}

BasisLabel StateVector::label_at(std::size_t index) const {
    std::size_t n = index % n_max_;
    std::size_t internal = index / n_max_;
    return BasisLabel{
        static_cast<AtomLevel>(internal / kCoherentMolLevels),
        static_cast<MolLevel>(internal % kCoherentMolLevels),
        n,
    };
}

double StateVector::norm_squared() const {
    double total = 0;
    for (const auto &a : amps_) {
        total += std::norm(a);
    }
    return total;
}

void StateVector::normalize() {
    double norm = std::sqrt(norm_squared());
    if (norm == 0) {
        throw std::domain_error("cannot normalize a zero state");
    }
    for (auto &a : amps_) {
        a /= norm;
    }
}

double StateVector::boundary_population() const {
    double total = 0;
    for (std::size_t k = n_max_ - 1; k < amps_.size(); k += n_max_) {
        total += std::norm(amps_[k]);
    }
    return total;
}

void StateVector::check_truncation(double tolerance) const {
    double p = boundary_population();
    if (p >= tolerance) {
        std::ostringstream msg;
        msg << "population " << p << " on Fock truncation boundary n=" << (n_max_ - 1);
        throw TruncationError(msg.str());
    }
}

StateVector new_basis_state(const BasisLabel &label, std::size_t n_max) {
    return StateVector::basis_state(label, n_max);
}

Complex inner_product(const StateVector &a, const StateVector &b) {
    if (a.n_max() != b.n_max()) {
        throw DimensionMismatch(
            "inner_product: n_max " + std::to_string(a.n_max()) + " vs " + std::to_string(b.n_max()));
    }
    Complex total = 0;
    auto x = a.amplitudes();
    auto y = b.amplitudes();
    for (std::size_t k = 0; k < x.size(); k++) {
        total += std::conj(x[k]) * y[k];
    }
    return total;
}

double fidelity(const StateVector &target, const StateVector &state) {
    return std::norm(inner_product(target, state));
}

double internal_population(const StateVector &state, AtomLevel atom, MolLevel mol) {
    return population(state, [&](const BasisLabel &label) {
        return label.atom == atom && label.mol == mol;
    });
}

void write_debug_dump(std::ostream &out, const StateVector &state) {
    if (state.leaked()) {
        out << "# leaked\n";
    }
    auto amps = state.amplitudes();
    char buf[128];
    for (std::size_t k = 0; k < amps.size(); k++) {
        if (std::abs(amps[k]) < 1e-12) {
            continue;
        }
        BasisLabel label = state.label_at(k);
        std::snprintf(buf, sizeof(buf), ",%zu,%.17g,%.17g\n", label.n, amps[k].real(), amps[k].imag());
        out << to_string(label.atom) << ',' << to_string(label.mol) << buf;
    }
}

std::string debug_dump(const StateVector &state) {
    std::ostringstream out;
    write_debug_dump(out, state);
    return out.str();
}

StateVector initial_state(std::size_t n_max) {
    return StateVector::basis_state({AtomLevel::S, MolLevel::M_minus32, 0}, n_max);
}

StateVector target_psi_L(std::size_t n_max) {
    return StateVector::from_terms(
        {
            {{AtomLevel::S, MolLevel::M_minus32, 0}, 1.0},
            {{AtomLevel::D, MolLevel::M_minus52, 0}, 1.0},
        },
        n_max);
}

StateVector target_psi_I(std::size_t n_max) {
    return StateVector::from_terms(
        {
            {{AtomLevel::S, MolLevel::M_minus32, 0}, 1.0},
            {{AtomLevel::S, MolLevel::M_minus52, 1}, 1.0},
        },
        n_max);
}

StateVector target_psi_H(std::size_t n_max) {
    return StateVector::from_terms(
        {
            {{AtomLevel::D, MolLevel::M_minus32, 0}, 1.0},
            {{AtomLevel::S, MolLevel::M_J0, 0}, 1.0},
        },
        n_max);
}

}  // namespace qlsim
