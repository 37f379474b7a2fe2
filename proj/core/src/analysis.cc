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

#include "qlsim/analysis.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>

#include "qlsim/errors.h"
#include "qlsim/noise.h"

namespace qlsim {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_phase(double x) {
    double y = std::remainder(x, 2 * kPi);
    return y <= -kPi ? y + 2 * kPi : y;
}

double sample_stddev(const std::vector<double> &v) {
    if (v.size() < 2) {
        return 0;
    }
    double mean = 0;
    for (double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

struct Tally {
    std::uint64_t plus = 0;
    std::uint64_t minus = 0;
    std::uint64_t zero = 0;

    void add(int parity) {
        if (parity > 0) {
            plus++;
        } else if (parity < 0) {
            minus++;
        } else {
            zero++;
        }
    }
};

}  // namespace

FringePoint make_fringe_point(double phi_a, std::uint64_t n_plus, std::uint64_t n_minus, std::uint64_t n_zero) {
    std::uint64_t n = n_plus + n_minus + n_zero;
    if (n == 0) {
        throw FitError("fringe point needs at least one trial");
    }
    double nd = static_cast<double>(n);
    double mean = (static_cast<double>(n_plus) - static_cast<double>(n_minus)) / nd;
    double second = static_cast<double>(n_plus + n_minus) / nd;
    double var = std::max(0.0, second - mean * mean);
    double sigma = 0;
    if (n > 1 && var > 0) {
        sigma = std::sqrt(var * nd / (nd - 1) / nd);
    } else {
        double q = (static_cast<double>(n_plus) + 0.5) / (nd + 1);
        sigma = 2 * std::sqrt(q * (1 - q) / (nd + 1));
    }
    return FringePoint{phi_a, mean, sigma, n};
}

double FringeFit::sigma_contrast() const {
    return std::sqrt(covariance[0]);
}

double FringeFit::sigma_phi0() const {
    return std::sqrt(covariance[3]);
}

double FringeFit::model(double phi_a) const {
    return contrast * std::cos(2 * phi_a + phi0);
}

FringeFit fit_fringe(std::span<const FringePoint> points) {
    if (points.size() < 3) {
        throw FitError("fringe fit needs at least 3 points");
    }
    // Normal equations for parity = a cos(2 phi) + b sin(2 phi).
    double m00 = 0, m01 = 0, m11 = 0, r0 = 0, r1 = 0;
    for (const auto &p : points) {
        if (!(p.sigma > 0) || !std::isfinite(p.sigma)) {
            throw FitError("fringe point sigma must be positive and finite");
        }
        double w = 1 / (p.sigma * p.sigma);
        double c = std::cos(2 * p.phi_a);
        double s = std::sin(2 * p.phi_a);
        m00 += w * c * c;
        m01 += w * c * s;
        m11 += w * s * s;
        r0 += w * c * p.parity;
        r1 += w * s * p.parity;
    }
    double det = m00 * m11 - m01 * m01;
    double scale = (m00 + m11) * (m00 + m11);
    if (!(det > 1e-12 * scale)) {
        throw FitError("degenerate fringe design: all phi_a equal mod pi");
    }

    FringeFit fit;
    fit.covariance_ab = {m11 / det, -m01 / det, -m01 / det, m00 / det};
    fit.a = (m11 * r0 - m01 * r1) / det;
    fit.b = (m00 * r1 - m01 * r0) / det;
    fit.contrast = std::hypot(fit.a, fit.b);
    fit.phi0 = wrap_phase(std::atan2(-fit.b, fit.a));

    for (const auto &p : points) {
        double r = (p.parity - fit.a * std::cos(2 * p.phi_a) - fit.b * std::sin(2 * p.phi_a)) / p.sigma;
        fit.chi_square += r * r;
    }
    fit.dof = points.size() - 2;

    const auto &v = fit.covariance_ab;
    double c = fit.contrast;
    if (c > 0) {
        // d(C, phi0) / d(a, b) with phi0 = atan2(-b, a).
        double j00 = fit.a / c, j01 = fit.b / c;
        double j10 = fit.b / (c * c), j11 = -fit.a / (c * c);
        auto sandwich = [&](double x0, double x1, double y0, double y1) {
            return x0 * (v[0] * y0 + v[1] * y1) + x1 * (v[2] * y0 + v[3] * y1);
        };
        fit.covariance = {
            sandwich(j00, j01, j00, j01),
            sandwich(j00, j01, j10, j11),
            sandwich(j10, j11, j00, j01),
            sandwich(j10, j11, j10, j11),
        };
    } else {
        fit.covariance = {(v[0] + v[3]) / 2, 0, 0, std::numeric_limits<double>::infinity()};
    }
    return fit;
}

std::vector<FringePoint> fringe_points_from_records(std::span<const TrialRecord> records, Qubit qubit) {
    std::map<double, Tally> groups;
    for (const auto &r : records) {
        if (!r.valid || !r.phi_a) {
            continue;
        }
        groups[*r.phi_a].add(trial_parity(qubit, r.atom_outcome, r.mol_outcome));
    }
    std::vector<FringePoint> out;
    out.reserve(groups.size());
    for (const auto &[phi, t] : groups) {
        out.push_back(make_fringe_point(phi, t.plus, t.minus, t.zero));
    }
    return out;
}

PopulationEstimate populations_from_records(std::span<const TrialRecord> records, Qubit qubit) {
    std::array<std::uint64_t, PopulationEstimate::kSlots> counts{};
    for (const auto &r : records) {
        if (!r.valid || r.phi_a) {
            continue;
        }
        counts[population_slot(qubit, r.atom_outcome, r.mol_outcome)]++;
    }
    std::uint64_t total = 0;
    for (auto c : counts) {
        total += c;
    }
    if (total == 0) {
        PopulationEstimate empty;
        empty.qubit = qubit;
        return empty;
    }
    return PopulationEstimate::from_counts(qubit, counts);
}

std::pair<double, double> target_populations(const PopulationEstimate &pop) {
    using P = PopulationEstimate;
    if (pop.qubit == Qubit::Low) {
        return {pop.p[P::SMinus], pop.p[P::DMinus]};
    }
    return {pop.p[P::SPlus], pop.p[P::DPlus]};
}

std::pair<double, double> target_population_errors(const PopulationEstimate &pop) {
    using P = PopulationEstimate;
    if (pop.qubit == Qubit::Low) {
        return {pop.stderr_[P::SMinus], pop.stderr_[P::DMinus]};
    }
    return {pop.stderr_[P::SPlus], pop.stderr_[P::DPlus]};
}

FidelityReport fidelity(double population_1, double population_2, double contrast, double sigma_1, double sigma_2,
                        double sigma_contrast) {
    auto in_unit = [](double x, const char *name) {
        if (!(x >= 0 && x <= 1)) {
            throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
        }
    };
    in_unit(population_1, "population_1");
    in_unit(population_2, "population_2");
    in_unit(contrast, "contrast");
    if (sigma_1 < 0 || sigma_2 < 0 || sigma_contrast < 0) {
        throw std::invalid_argument("uncertainties must be non-negative");
    }
    FidelityReport r;
    r.population_1 = population_1;
    r.population_2 = population_2;
    r.contrast = contrast;
    r.fidelity = 0.5 * (population_1 + population_2 + contrast);
    r.sigma_from_populations = 0.5 * std::hypot(sigma_1, sigma_2);
    r.sigma_from_contrast = 0.5 * sigma_contrast;
    r.sigma_fidelity = std::hypot(r.sigma_from_populations, r.sigma_from_contrast);
    r.above_threshold = r.fidelity > 0.5;
    r.entangled = r.fidelity - 2 * r.sigma_fidelity > 0.5;
    r.unphysical = r.fidelity > 1;
    return r;
}

double round_decimal(double value, int digits) {
    double scale = std::pow(10.0, digits);
    double scaled = value * scale;
    // Nudge by a few ulps so decimal ties stored just below .5 round up.
    double nudged = scaled + std::copysign(1e-9 * std::max(1.0, std::fabs(scaled)), scaled);
    return std::round(nudged) / scale;
}

BootstrapResult bootstrap_uncertainty(std::span<const TrialRecord> records, Qubit qubit, std::size_t resamples,
                                      std::uint64_t seed) {
    if (resamples < 100) {
        throw std::invalid_argument("bootstrap needs at least 100 resamples");
    }
    std::map<double, std::vector<int>> groups;
    std::vector<std::size_t> population_slots;
    for (const auto &r : records) {
        if (!r.valid) {
            continue;
        }
        if (r.phi_a) {
            groups[*r.phi_a].push_back(trial_parity(qubit, r.atom_outcome, r.mol_outcome));
        } else {
            population_slots.push_back(population_slot(qubit, r.atom_outcome, r.mol_outcome));
        }
    }
    if (groups.empty()) {
        throw std::invalid_argument("bootstrap: no parity-scan trials");
    }
    for (const auto &[phi, values] : groups) {
        if (values.size() < 2) {
            throw std::invalid_argument("bootstrap: fewer than 2 trials at phi_a = " + format_double(phi));
        }
    }

    std::vector<FringePoint> base_points = fringe_points_from_records(records, qubit);
    double base_phi0 = fit_fringe(base_points).phi0;

    std::vector<double> cs, phis, fs;
    cs.reserve(resamples);
    std::vector<FringePoint> points(groups.size());
    for (std::size_t b = 0; b < resamples; b++) {
        Rng rng = make_stream(seed, StreamDomain::Bootstrap, b);
        std::size_t k = 0;
        for (const auto &[phi, values] : groups) {
            std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
            Tally t;
            for (std::size_t i = 0; i < values.size(); i++) {
                t.add(values[pick(rng)]);
            }
            points[k++] = make_fringe_point(phi, t.plus, t.minus, t.zero);
        }
        FringeFit fit = fit_fringe(points);
        cs.push_back(fit.contrast);
        phis.push_back(wrap_phase(fit.phi0 - base_phi0));
        if (!population_slots.empty()) {
            std::array<std::uint64_t, PopulationEstimate::kSlots> counts{};
            std::uniform_int_distribution<std::size_t> pick(0, population_slots.size() - 1);
            for (std::size_t i = 0; i < population_slots.size(); i++) {
                counts[population_slots[pick(rng)]]++;
            }
            auto [p1, p2] = target_populations(PopulationEstimate::from_counts(qubit, counts));
            fs.push_back(0.5 * (p1 + p2 + std::min(fit.contrast, 1.0)));
        }
    }

    BootstrapResult out;
    out.resamples = resamples;
    out.sigma_contrast = sample_stddev(cs);
    out.sigma_phi0 = sample_stddev(phis);
    out.sigma_fidelity = fs.empty() ? std::numeric_limits<double>::quiet_NaN() : sample_stddev(fs);
    return out;
}

void write_fit_report(std::ostream &out, const FringeFit &fit, Qubit qubit, std::size_t points) {
    out << "qubit = " << to_string(qubit) << '\n';
    out << "points = " << points << '\n';
    out << "contrast = " << format_double(fit.contrast) << '\n';
    out << "contrast_sigma = " << format_double(fit.sigma_contrast()) << '\n';
    out << "phi0 = " << format_double(fit.phi0) << '\n';
    out << "phi0_sigma = " << format_double(fit.sigma_phi0()) << '\n';
    out << "cov_contrast_contrast = " << format_double(fit.covariance[0]) << '\n';
    out << "cov_contrast_phi0 = " << format_double(fit.covariance[1]) << '\n';
    out << "cov_phi0_phi0 = " << format_double(fit.covariance[3]) << '\n';
    out << "chi_square = " << format_double(fit.chi_square) << '\n';
    out << "dof = " << fit.dof << '\n';
}

void write_fringe_csv(std::ostream &out, std::span<const FringePoint> points, const FringeFit &fit) {
    out << "phi_a,parity,sigma,model_value\n";
    for (const auto &p : points) {
        out << format_double(p.phi_a) << ',' << format_double(p.parity) << ',' << format_double(p.sigma) << ','
            << format_double(fit.model(p.phi_a)) << '\n';
    }
}

void write_fidelity_report(std::ostream &out, const FidelityReport &r) {
    out << "population_1 = " << format_double(r.population_1) << '\n';
    out << "population_2 = " << format_double(r.population_2) << '\n';
    out << "contrast = " << format_double(r.contrast) << '\n';
    out << "fidelity = " << format_double(r.fidelity) << '\n';
    char rounded[32];
    std::snprintf(rounded, sizeof(rounded), "%.2f", round_decimal(r.fidelity, 2));
    out << "fidelity_rounded = " << rounded << '\n';
    out << "sigma_fidelity = " << format_double(r.sigma_fidelity) << '\n';
    out << "sigma_fidelity_populations = " << format_double(r.sigma_from_populations) << '\n';
    out << "sigma_fidelity_contrast = " << format_double(r.sigma_from_contrast) << '\n';
    out << "above_threshold = " << (r.above_threshold ? "true" : "false") << '\n';
    out << "entangled_2sigma = " << (r.entangled ? "true" : "false") << '\n';
    out << "unphysical = " << (r.unphysical ? "true" : "false") << '\n';
}

}  // namespace qlsim
