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

#include "qlsim/noise.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qlsim {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rng make_stream(std::uint64_t seed, StreamDomain domain, std::uint64_t index) {
    std::uint64_t key =
        splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(domain) * 0x9E3779B97F4A7C15ULL + index));
    std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
    return Rng(seq);
}

NoiseConfig NoiseConfig::ideal() {
    NoiseConfig cfg;
    cfg.nbar_M = 0;
    cfg.atom_coherence_time_us = std::numeric_limits<double>::infinity();
    cfg.comb_coherence_time_us = std::numeric_limits<double>::infinity();
    cfg.prep_error = 0;
    cfg.leak_per_pulse = 0;
    cfg.leak_per_trial = 0;
    cfg.detect_bright_mean = 100;
    cfg.detect_dark_mean = 0;
    return cfg;
}

void NoiseConfig::validate() const {
    auto probability = [](double p, const char *name) {
        if (!(p >= 0 && p <= 1)) {
            throw std::invalid_argument(std::string(name) + " must be a probability in [0,1]");
        }
    };
    probability(prep_error, "prep_error");
    probability(leak_per_pulse, "leak_per_pulse");
    probability(leak_per_trial, "leak_per_trial");
    if (!(nbar_M >= 0) || !std::isfinite(nbar_M)) {
        throw std::invalid_argument("nbar must be finite and >= 0");
    }
    if (!(atom_coherence_time_us > 0)) {
        throw std::invalid_argument("atom_t2_us must be > 0");
    }
    if (!(comb_coherence_time_us > 0)) {
        throw std::invalid_argument("comb_t2_us must be > 0");
    }
    if (!(detect_bright_mean >= 0) || !std::isfinite(detect_bright_mean)) {
        throw std::invalid_argument("bright_mean must be finite and >= 0");
    }
    if (!(detect_dark_mean >= 0) || !std::isfinite(detect_dark_mean)) {
        throw std::invalid_argument("dark_mean must be finite and >= 0");
    }
}

double thermal_probability(double nbar, std::size_t n) {
    if (nbar == 0) {
        return n == 0 ? 1.0 : 0.0;
    }
    double r = nbar / (nbar + 1);
    return std::pow(r, static_cast<double>(n)) / (nbar + 1);
}

double thermal_tail(double nbar, std::size_t n_cut) {
    if (nbar == 0) {
        return n_cut == 0 ? 1.0 : 0.0;
    }
    return std::pow(nbar / (nbar + 1), static_cast<double>(n_cut));
}

double truncated_thermal_mean(double nbar, std::size_t n_max) {
    double weight = 0;
    double mean = 0;
    for (std::size_t n = 0; n < n_max; n++) {
        double p = thermal_probability(nbar, n);
        weight += p;
        mean += p * static_cast<double>(n);
    }
    return mean / weight;
}

std::size_t sample_initial_motion(const NoiseConfig &cfg, Rng &rng, std::size_t n_max) {
    if (cfg.nbar_M < 0) {
        throw std::invalid_argument("nbar must be >= 0");
    }
    if (cfg.nbar_M == 0) {
        return 0;
    }
    double weight = 1 - thermal_tail(cfg.nbar_M, n_max);
    double u = std::uniform_real_distribution<double>(0, 1)(rng) * weight;
    double acc = 0;
    for (std::size_t n = 0; n + 1 < n_max; n++) {
        acc += thermal_probability(cfg.nbar_M, n);
        if (u < acc) {
            return n;
        }
    }
    return n_max - 1;
}

double sample_phase_error(double coherence_time_us, double elapsed_us, Rng &rng) {
    if (!(coherence_time_us > 0)) {
        throw std::invalid_argument("coherence time must be > 0");
    }
    if (elapsed_us <= 0 || std::isinf(coherence_time_us)) {
        return 0;
    }
    double sigma = std::sqrt(2 * elapsed_us / coherence_time_us);
    return std::normal_distribution<double>(0, sigma)(rng);
}

bool sample_event(double p, Rng &rng) {
    if (p <= 0) {
        return false;
    }
    if (p >= 1) {
        return true;
    }
    return std::uniform_real_distribution<double>(0, 1)(rng) < p;
}

}  // namespace qlsim
