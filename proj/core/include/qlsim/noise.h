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

#ifndef QLSIM_NOISE_H
#define QLSIM_NOISE_H

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "qlsim/hilbert.h"

namespace qlsim {

using Rng = std::mt19937_64;

/// Random streams are keyed by (seed, domain, index). The 64-bit key is
/// splitmix64(seed ^ splitmix64(domain * 0x9E3779B97F4A7C15 + index)), which
/// seeds an mt19937_64 through a seed_seq of its two 32-bit halves.
enum class StreamDomain : std::uint64_t { Trial = 1, Herald = 2, Schedule = 3, Bootstrap = 4, Test = 5 };

std::uint64_t splitmix64(std::uint64_t x);
Rng make_stream(std::uint64_t seed, StreamDomain domain, std::uint64_t index);

struct NoiseConfig {
    double nbar_M = 0.05;
    double atom_coherence_time_us = 1000;
    double comb_coherence_time_us = 3000;
    /// Probability that a heralded trial starts in -5/2 instead of -3/2.
    double prep_error = 0.02;
    /// Probability per molecular pulse of leaving the qubit manifold.
    double leak_per_pulse = 0.002;
    /// Probability per trial of leaving the manifold (collisions, blackbody).
    double leak_per_trial = 0.01;
    double detect_bright_mean = 20;
    double detect_dark_mean = 0.4;
    std::uint64_t rng_seed = 1;

    /// n=0, infinite coherence, no preparation or leakage error, and
    /// effectively error-free detection (Poisson means 100 / 0).
    static NoiseConfig ideal();

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct TrialNoise {
    std::size_t initial_n = 0;
    double atom_phase_error = 0;
    double comb_phase_error = 0;
    /// Index (within the trial) of each molecular pulse at which the molecule leaked.
    std::vector<std::size_t> leak_events;
};

/// Thermal occupation probability p(n) = nbar^n / (nbar+1)^(n+1), untruncated.
double thermal_probability(double nbar, std::size_t n);
/// Probability of n >= n_cut under the untruncated thermal distribution.
double thermal_tail(double nbar, std::size_t n_cut);
/// Mean of the thermal distribution truncated to n < n_max and renormalized.
double truncated_thermal_mean(double nbar, std::size_t n_max);

std::size_t sample_initial_motion(const NoiseConfig &cfg, Rng &rng, std::size_t n_max = kDefaultNMax);

/// Quasi-static phase with sigma = sqrt(2 elapsed / T2); E[cos] = exp(-elapsed/T2).
/// An infinite coherence time gives exactly 0.
double sample_phase_error(double coherence_time_us, double elapsed_us, Rng &rng);

template <typename Pred>
StateVector apply_dephasing(StateVector state, Pred &&branch, double phase) {
    if (phase == 0) {
        return state;
    }
    Complex factor = std::polar(1.0, phase);
    auto amps = state.amplitudes();
    for (std::size_t k = 0; k < amps.size(); k++) {
        if (branch(state.label_at(k))) {
            amps[k] *= factor;
        }
    }
    return state;
}

inline bool on_atom_D(const BasisLabel &label) {
    return label.atom == AtomLevel::D;
}
inline bool on_mol_J0(const BasisLabel &label) {
    return label.mol == MolLevel::M_J0;
}

/// Bernoulli draw that consumes no randomness when p is 0 or 1.
bool sample_event(double p, Rng &rng);

}  // namespace qlsim

#endif
