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

#ifndef QLSIM_COMB_H
#define QLSIM_COMB_H

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qlsim {

struct CombError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Exact frequency in Hz as a reduced fraction num/den, den > 0.
class Frequency {
   public:
    constexpr Frequency() = default;
    static Frequency hz(std::int64_t value);
    /// Reduces; throws CombError for den == 0.
    static Frequency ratio(std::int64_t num, std::int64_t den);
    /// Accepts "123", "79.0e6", "-1.5", "855131477587/10825". Exact; throws
    /// CombError if the value cannot be represented.
    static Frequency parse(std::string_view text);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_integer() const { return den_ == 1; }
    double to_double() const;
    std::string str() const;

    bool operator==(const Frequency &) const = default;

   private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

struct CombParams {
    Frequency f_rep;
    Frequency f_aom;
    std::int64_t n = 1;
    /// +1: f_Raman = |N f_rep - 2 f_AOM|. -1: |N f_rep + 2 f_AOM|.
    int sign = 1;

    /// Throws CombError unless f_rep > 0, f_AOM > 0, N > 0, sign = +-1.
    void validate() const;
};

/// Exact integer-Hz Raman difference frequency. Throws CombError if
/// N f_rep +- 2 f_AOM is not an integer number of Hz or overflows int64.
std::int64_t raman_frequency(const CombParams &params);

/// Floating-point version for scans with non-integral frequencies.
double raman_frequency_approx(const CombParams &params, double f_aom_hz);

struct NRecovery {
    std::int64_t n;
    /// |2 df_AOM / df_rep - N|.
    double residual;
};

/// N = round(2 df_AOM / df_rep). Throws CombError for df_rep = 0, for a
/// residual above `tolerance`, or for N <= 0.
NRecovery recover_n(std::int64_t delta_f_aom_hz, std::int64_t delta_f_rep_hz, double tolerance = 0.1);

/// Square-pulse two-level transfer probability. Omega and delta in rad/s,
/// duration in s.
double rabi_transfer_probability(double omega, double delta, double duration_s);

struct LinePoint {
    double f_aom_hz;
    double probability;
};

struct LineshapeModel {
    double transition_hz;
    /// Omega t at resonance (pi for a calibrated pulse).
    double pulse_area;
    double duration_us;
};

/// Transfer probability for each f_AOM, with the other comb parameters fixed.
std::vector<LinePoint> scan_lineshape(const CombParams &base, std::span<const double> f_aom_hz,
                                      const LineshapeModel &model);

/// Fourier-limited FWHM-scale width, 1/t, in Raman frequency units (Hz).
double fourier_linewidth_hz(const LineshapeModel &model);

/// Least-squares fit of A * P_model(f_AOM - f0) to measured points with A
/// free; returns the center f0 in f_AOM units.
double estimate_line_center(const CombParams &base, std::span<const LinePoint> points, const LineshapeModel &model);

struct RotationalModel {
    double b_rot_hz;

    /// Rigid rotor E_J = B J (J + 1).
    double energy_hz(int j) const { return b_rot_hz * j * (j + 1); }
};

struct RotationalReport {
    double expected_hz;
    double relative_deviation;
    bool pass;
};

/// Compares f_Raman with E_{j_upper} - E_{j_lower} (6B for 0 -> 2).
RotationalReport check_rotational_consistency(double f_raman_hz, const RotationalModel &model,
                                              double tolerance = 0.01, int j_lower = 0, int j_upper = 2);

}  // namespace qlsim

#endif
