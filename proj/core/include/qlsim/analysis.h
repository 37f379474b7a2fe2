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

#ifndef QLSIM_ANALYSIS_H
#define QLSIM_ANALYSIS_H

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "qlsim/measurement.h"
#include "qlsim/records.h"

namespace qlsim {

struct FringePoint {
    double phi_a;
    double parity;
    /// Standard error of the mean parity.
    double sigma;
    std::uint64_t n_trials;
};

/// Point from per-trial parity tallies (+1, -1, 0). Uses the sample standard
/// error of the mean; when every trial agrees (zero sample variance) the
/// Wilson-centred binomial error 2 sqrt(q(1-q)/(n+1)), q = (n_plus+1/2)/(n+1),
/// is used instead so no point gets infinite weight.
FringePoint make_fringe_point(double phi_a, std::uint64_t n_plus, std::uint64_t n_minus, std::uint64_t n_zero);

/// Parity = C cos(2 phi_a + phi0), C >= 0, phi0 in (-pi, pi].
struct FringeFit {
    double contrast = 0;
    double phi0 = 0;
    /// Row-major covariance of (C, phi0).
    std::array<double, 4> covariance{};
    /// Linear parameters: parity = a cos(2 phi) + b sin(2 phi).
    double a = 0;
    double b = 0;
    std::array<double, 4> covariance_ab{};
    double chi_square = 0;
    std::size_t dof = 0;

    double sigma_contrast() const;
    double sigma_phi0() const;
    double model(double phi_a) const;
};

/// Weighted least squares through the linear reparameterization. Throws
/// FitError for fewer than 3 points, non-positive sigmas, or a degenerate
/// design (all phi_a equal mod pi).
FringeFit fit_fringe(std::span<const FringePoint> points);

/// Groups valid records that carry phi_a, in increasing phi_a order.
std::vector<FringePoint> fringe_points_from_records(std::span<const TrialRecord> records, Qubit qubit);

/// Populations over valid records without phi_a; total = 0 if there are none.
PopulationEstimate populations_from_records(std::span<const TrialRecord> records, Qubit qubit);

/// The two populations of the target state: (S,-3/2),(D,-5/2) for the low
/// qubit and (S,0),(D,2) for the high qubit.
std::pair<double, double> target_populations(const PopulationEstimate &pop);
std::pair<double, double> target_population_errors(const PopulationEstimate &pop);

struct FidelityReport {
    double population_1 = 0;
    double population_2 = 0;
    double contrast = 0;
    double fidelity = 0;
    double sigma_fidelity = 0;
    /// Components of sigma_fidelity: population (binomial) and contrast (fit).
    double sigma_from_populations = 0;
    double sigma_from_contrast = 0;
    /// F - 2 sigma_F > 1/2.
    bool entangled = false;
    /// F > 1/2.
    bool above_threshold = false;
    /// F > 1, possible from noisy inputs.
    bool unphysical = false;
};

/// F = (P1 + P2 + C) / 2 with quadrature error propagation. Inputs must lie
/// in [0, 1]; throws std::invalid_argument otherwise.
FidelityReport fidelity(double population_1, double population_2, double contrast, double sigma_1 = 0,
                        double sigma_2 = 0, double sigma_contrast = 0);

/// Decimal rounding, half away from zero, robust to binary representation of
/// values that are exact in decimal (0.865 -> 0.87).
double round_decimal(double value, int digits);

struct BootstrapResult {
    double sigma_contrast = 0;
    double sigma_phi0 = 0;
    /// NaN when the records hold no population trials.
    double sigma_fidelity = 0;
    std::size_t resamples = 0;
};

/// Nonparametric bootstrap: trials are resampled with replacement within each
/// phi_a group (and within the population trials), then refit. Resample b
/// draws from make_stream(seed, Bootstrap, b).
BootstrapResult bootstrap_uncertainty(std::span<const TrialRecord> records, Qubit qubit, std::size_t resamples,
                                      std::uint64_t seed);

void write_fit_report(std::ostream &out, const FringeFit &fit, Qubit qubit, std::size_t points);
void write_fringe_csv(std::ostream &out, std::span<const FringePoint> points, const FringeFit &fit);
void write_fidelity_report(std::ostream &out, const FidelityReport &report);

}  // namespace qlsim

#endif
