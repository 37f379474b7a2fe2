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

#ifndef QLSIM_HILBERT_H
#define QLSIM_HILBERT_H

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qlsim/errors.h"

namespace qlsim {

using Complex = std::complex<double>;

inline constexpr std::size_t kDefaultNMax = 8;

/// Atomic qubit levels. S fluoresces under detection, D is dark.
enum class AtomLevel : std::uint8_t { S = 0, D = 1 };

/// Molecular levels. M_minus32 is shared by both molecular qubits:
/// {M_minus32, M_minus52} is the low-frequency qubit, {M_minus32, M_J0} the
/// high-frequency one. Leaked is a classical flag on StateVector, never an
/// amplitude index.
enum class MolLevel : std::uint8_t { M_minus32 = 0, M_minus52 = 1, M_J0 = 2, Leaked = 3 };

inline constexpr std::size_t kAtomLevels = 2;
inline constexpr std::size_t kCoherentMolLevels = 3;

std::string_view to_string(AtomLevel level);
std::string_view to_string(MolLevel level);
std::optional<AtomLevel> parse_atom_level(std::string_view text);
std::optional<MolLevel> parse_mol_level(std::string_view text);

struct BasisLabel {
    AtomLevel atom;
    MolLevel mol;
    std::size_t n;

    bool operator==(const BasisLabel &) const = default;
};

std::ostream &operator<<(std::ostream &out, const BasisLabel &label);

/// Dense state over atom x molecule x motion, ordered lexicographically by
/// (atom, mol, n): index = (atom * 3 + mol) * n_max + n.
class StateVector {
   public:
    /// Zero vector. Use basis_state() or from_terms() for physical states.
    explicit StateVector(std::size_t n_max = kDefaultNMax);

    static StateVector basis_state(const BasisLabel &label, std::size_t n_max = kDefaultNMax);

    /// Normalized superposition of the given (label, amplitude) terms.
    static StateVector from_terms(
        std::initializer_list<std::pair<BasisLabel, Complex>> terms, std::size_t n_max = kDefaultNMax);

    std::size_t n_max() const {
        return n_max_;
    }
    std::size_t dim() const {
        return amps_.size();
    }

    std::size_t index_of(const BasisLabel &label) const;
    BasisLabel label_at(std::size_t index) const;

    Complex amplitude(const BasisLabel &label) const {
        return amps_[index_of(label)];
    }
    Complex &amplitude(const BasisLabel &label) {
        return amps_[index_of(label)];
    }

    std::span<const Complex> amplitudes() const {
        return amps_;
    }
    std::span<Complex> amplitudes() {
        return amps_;
    }

    bool leaked() const {
        return leaked_;
    }
    void mark_leaked() {
        leaked_ = true;
    }

    /// Pulses requested while leaked. They are skipped, not applied.
    std::uint32_t skipped_pulses() const {
        return skipped_pulses_;
    }
    void record_skipped_pulse() {
        ++skipped_pulses_;
    }

    double norm_squared() const;
    void normalize();

    /// Population at n = n_max - 1.
    double boundary_population() const;
    /// Throws TruncationError when boundary_population() >= tolerance.
    void check_truncation(double tolerance = 1e-6) const;

    bool operator==(const StateVector &) const = default;

   private:
    std::size_t n_max_;
    std::vector<Complex> amps_;
    bool leaked_ = false;
    std::uint32_t skipped_pulses_ = 0;
};

StateVector new_basis_state(const BasisLabel &label, std::size_t n_max = kDefaultNMax);

/// <a|b>, conjugate-linear in a.
Complex inner_product(const StateVector &a, const StateVector &b);

/// |<a|b>|^2.
double fidelity(const StateVector &target, const StateVector &state);

template <typename Pred>
double population(const StateVector &state, Pred &&predicate) {
    double total = 0;
    auto amps = state.amplitudes();
    for (std::size_t k = 0; k < amps.size(); k++) {
        if (predicate(state.label_at(k))) {
            total += std::norm(amps[k]);
        }
    }
    return total;
}

/// Population of one (atom, mol) pair summed over motion.
double internal_population(const StateVector &state, AtomLevel atom, MolLevel mol);

/// One "atom,mol,n,re,im" line per amplitude with magnitude above 1e-12.
void write_debug_dump(std::ostream &out, const StateVector &state);
std::string debug_dump(const StateVector &state);

/// Eq. 1 ground state |S>|-3/2>|0>.
StateVector initial_state(std::size_t n_max = kDefaultNMax);
/// (|S>|-3/2> + |D>|-5/2>)/sqrt2 with motion in |0>.
StateVector target_psi_L(std::size_t n_max = kDefaultNMax);
/// |S>(|-3/2>|0> + |-5/2>|1>)/sqrt2.
StateVector target_psi_I(std::size_t n_max = kDefaultNMax);
/// (|D>|-3/2> + |S>|0>)/sqrt2 with motion in |0>.
StateVector target_psi_H(std::size_t n_max = kDefaultNMax);

}  // namespace qlsim

#endif
