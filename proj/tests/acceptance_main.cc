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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "qlsim/analysis.h"
#include "qlsim/campaign.h"
#include "qlsim/comb.h"
#include "qlsim/hilbert.h"
#include "qlsim/measurement.h"
#include "qlsim/protocols.h"
#include "qlsim/pulse.h"
#include "test_support.h"

using namespace qlsim;
using qlsim::testing::kPi;
using qlsim::testing::read_file;
using qlsim::testing::test_rng;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    const char *name;
    double limit_s;
    std::function<Outcome()> run;
};

std::string fmt(const char *format, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), format, a, b, c);
    return buf;
}

StateVector two_term(BasisLabel a, BasisLabel b, std::size_t n_max) {
    StateVector s(n_max);
    s.amplitude(a) = 1 / std::sqrt(2.0);
    s.amplitude(b) = 1 / std::sqrt(2.0);
    return s;
}

// Sum of |<t|s>|^2 over amplitudes directly, independent of the library overlap.
double overlap(const StateVector &t, const StateVector &s) {
    Complex acc = 0;
    for (std::size_t k = 0; k < t.dim(); k++) {
        acc += std::conj(t.amplitudes()[k]) * s.amplitudes()[k];
    }
    return std::norm(acc);
}

Outcome noiseless_oracle() {
    const std::size_t n_max = 8;
    ProtocolPulses p = ProtocolPulses::defaults();
    StateVector start = StateVector::basis_state({AtomLevel::S, MolLevel::M_minus32, 0}, n_max);
    StateVector psi_l = create_psi_L(start, p);
    StateVector psi_h = create_psi_H(create_psi_I(start, p), p);
    double fl = overlap(two_term({AtomLevel::S, MolLevel::M_minus32, 0}, {AtomLevel::D, MolLevel::M_minus52, 0}, n_max),
                        psi_l);
    double fh =
        overlap(two_term({AtomLevel::S, MolLevel::M_J0, 0}, {AtomLevel::D, MolLevel::M_minus32, 0}, n_max), psi_h);
    bool pass = std::fabs(fl - 1) < 1e-9 && std::fabs(fh - 1) < 1e-9;
    return {pass, fmt("F_L-1 = %.2e, F_H-1 = %.2e (tol 1e-9)", fl - 1, fh - 1)};
}

Outcome fringe_structure() {
    const std::size_t n_max = 8;
    ProtocolPulses p = ProtocolPulses::defaults();
    StateVector start = StateVector::basis_state({AtomLevel::S, MolLevel::M_minus32, 0}, n_max);
    StateVector psi[2] = {create_psi_L(start, p), create_psi_H(create_psi_I(start, p), p)};
    bool pass = true;
    std::string detail;
    for (int q = 0; q < 2; q++) {
        Qubit qubit = q == 0 ? Qubit::Low : Qubit::High;
        std::vector<FringePoint> pts;
        double period_err = 0;
        for (int k = 0; k < 24; k++) {
            double phi = 2 * kPi * k / 24;
            double v = exact_parity(analysis_pulses(psi[q], qubit, phi, p), qubit);
            double shifted = exact_parity(analysis_pulses(psi[q], qubit, phi + kPi, p), qubit);
            double quarter = exact_parity(analysis_pulses(psi[q], qubit, phi + kPi / 2, p), qubit);
            period_err = std::max({period_err, std::fabs(v - shifted), std::fabs(v + quarter)});
            pts.push_back({phi, v, 0.01, 100});
        }
        FringeFit fit = fit_fringe(pts);
        bool ok = std::fabs(fit.contrast - 1) < 1e-6 && period_err < 1e-9;
        pass = pass && ok;
        detail += std::string(q == 0 ? "L" : "H") + fmt(": C-1 = %.2e, period-pi residual %.1e; ", fit.contrast - 1, period_err);
    }
    return {pass, detail + "tol 1e-6"};
}

Outcome fidelity_goldens() {
    double fl = fidelity(0.50, 0.45, 0.78).fidelity;
    double fh = fidelity(0.47, 0.40, 0.65).fidelity;
    bool pass = std::fabs(fl - 0.865) < 1e-12 && std::fabs(fh - 0.76) < 1e-12 && round_decimal(fl, 2) == 0.87 &&
                round_decimal(fh, 2) == 0.76;
    return {pass, fmt("F_L = %.4f (0.87 rounded), F_H = %.4f (0.76 rounded)", fl, fh)};
}

Outcome statistical_scale() {
    const std::vector<std::uint64_t> counts = {246, 39, 115, 106, 92, 83, 114, 62, 64, 67, 150, 50};
    ExperimentConfig cfg;
    cfg.protocol = ProtocolKind::ParityScanL;
    for (int k = 0; k < 12; k++) {
        cfg.phi_a.push_back(kPi * k / 6);
    }
    cfg.targets = counts;
    cfg.noise = NoiseConfig::ideal();
    cfg.noise.atom_coherence_time_us = 1000;
    cfg.n_max = 4;
    cfg.bootstrap_resamples = 0;
    // Exponential dephasing envelope: choose the free evolution so exp(-t/T2) = 0.78.
    double base = coherence_windows(cfg.pulses, Qubit::Low, 0).atom_us;
    cfg.analysis_wait_us = cfg.noise.atom_coherence_time_us * std::log(1 / 0.78) - base;

    const int campaigns = 500;
    std::vector<double> c;
    double equal_weight_sum = 0;
    for (int i = 0; i < campaigns; i++) {
        cfg.seed = 1000 + static_cast<std::uint64_t>(i);
        CampaignSummary s = run_campaign(cfg);
        auto pts = fringe_points_from_records(s.records, Qubit::Low);
        c.push_back(fit_fringe(pts).contrast);
        // Equal weights: unbiased check of the simulated contrast.
        for (auto &p : pts) {
            p.sigma = 1;
        }
        equal_weight_sum += fit_fringe(pts).contrast;
    }
    double mean = std::accumulate(c.begin(), c.end(), 0.0) / campaigns;
    double mean_equal = equal_weight_sum / campaigns;
    double var = 0;
    for (double x : c) {
        var += (x - mean) * (x - mean);
    }
    double sigma = std::sqrt(var / (campaigns - 1));
    bool pass = sigma >= 0.02 && sigma <= 0.06 && std::fabs(mean_equal - 0.78) < 4 * sigma / std::sqrt(campaigns);
    return {pass, fmt("500 campaigns: sigma_C = %.4f (target 0.04 +- 50%%), mean C = %.4f weighted, %.4f equal-weight",
                      sigma, mean, mean_equal)};
}

Outcome comb_goldens() {
    NRecovery a = recover_n(5412500, 1000);
    NRecovery b = recover_n(10825000, 2000);
    CombParams p{Frequency::ratio(855131477587, 10825), Frequency::hz(165000000), 10825, 1};
    std::int64_t f = raman_frequency(p);
    RotationalReport rot = check_rotational_consistency(static_cast<double>(f), RotationalModel{142.5e9});
    bool pass = a.n == 10825 && b.n == 10825 && f == 854801477587 && rot.pass && rot.relative_deviation < 1e-3 &&
                rot.expected_hz == 855.0e9;
    return {pass, "N = " + std::to_string(a.n) + "/" + std::to_string(b.n) + ", f_Raman = " + std::to_string(f) +
                      " Hz" + fmt(", rotational deviation %.5f%%", 100 * rot.relative_deviation)};
}

Outcome unitarity_and_born() {
    const std::size_t n_max = 6;
    Rng rng = test_rng(900);
    const std::vector<TransitionSelector> selectors = {
        TransitionSelector::atom_carrier(),   TransitionSelector::atom_sideband(),
        TransitionSelector::atom_sideband_swapped(), TransitionSelector::raman_carrier(),
        TransitionSelector::raman_sideband(), TransitionSelector::raman_sideband_swapped(),
        TransitionSelector::comb_carrier()};
    std::uniform_real_distribution<double> angle(0, 2 * kPi);
    std::uniform_int_distribution<std::size_t> pick(0, selectors.size() - 1);
    std::uniform_int_distribution<std::size_t> cal(0, 3);
    double worst = 0;
    for (int i = 0; i < 1000; i++) {
        StateVector s = qlsim::testing::random_state(rng, n_max, [&](const BasisLabel &l) { return l.n + 1 < n_max; });
        PulseSpec pulse{selectors[pick(rng)], angle(rng), angle(rng), cal(rng), 10};
        StateVector out = apply_pulse(s, pulse);
        worst = std::max(worst, std::fabs(out.norm_squared() - 1));
    }

    NoiseConfig ideal = NoiseConfig::ideal();
    StateVector s = qlsim::testing::random_state(rng, n_max);
    double p_s = population(s, [](const BasisLabel &l) { return l.atom == AtomLevel::S; });
    const int shots = 100000;
    int bright = 0;
    for (int i = 0; i < shots; i++) {
        StateVector copy = s;
        bright += detect_atom(copy, ideal, 6, rng).projected == AtomLevel::S ? 1 : 0;
    }
    double freq = static_cast<double>(bright) / shots;
    double z = (freq - p_s) / std::sqrt(p_s * (1 - p_s) / shots);
    bool pass = worst < 1e-12 && std::fabs(z) < 4;
    return {pass, fmt("max |norm-1| = %.1e over 1e3 pulses; Born z = %.2f at N = 1e5 (P_S = %.4f)", worst, z, p_s)};
}

double poisson_cdf(int k, double mean) {
    double term = std::exp(-mean), sum = term;
    for (int j = 1; j <= k; j++) {
        term *= mean / j;
        sum += term;
    }
    return sum;
}

Outcome detection_discrimination() {
    NoiseConfig cfg = NoiseConfig::ideal();
    cfg.detect_bright_mean = 20;
    cfg.detect_dark_mean = 0.4;
    const std::uint32_t threshold = 6;
    double oracle = 0.5 * (poisson_cdf(threshold - 1, 20) + (1 - poisson_cdf(threshold - 1, 0.4)));
    Rng rng = test_rng(901);
    const std::size_t n_max = 3;
    StateVector bright = StateVector::basis_state({AtomLevel::S, MolLevel::M_minus32, 0}, n_max);
    StateVector dark = StateVector::basis_state({AtomLevel::D, MolLevel::M_minus32, 0}, n_max);
    const int shots = 1000000;
    int errors = 0;
    for (int i = 0; i < shots; i++) {
        StateVector s = i % 2 == 0 ? bright : dark;
        AtomDetection d = detect_atom(s, cfg, threshold, rng);
        errors += d.outcome != d.projected ? 1 : 0;
    }
    double rate = static_cast<double>(errors) / shots;
    bool pass = rate < 2e-4 && rate > oracle / 2 && rate < oracle * 2;
    return {pass, fmt("misclassification %.2e per detection, Poisson oracle %.2e", rate, oracle)};
}

Outcome herald_soundness() {
    const std::size_t n_max = 4;
    ProtocolPulses pulses = ProtocolPulses::defaults();
    HeraldConfig herald;
    NoiseConfig ideal = NoiseConfig::ideal();
    Rng rng = test_rng(902);
    const int runs = 10000;
    int good = 0;
    for (int i = 0; i < runs; i++) {
        TrialContext ctx(ideal, pulses, rng, n_max);
        MolLevel start = i % 2 == 0 ? MolLevel::M_minus32 : MolLevel::M_minus52;
        ProtocolResult r = herald_prepare_minus32(molecule_state(start, n_max), herald, ctx);
        double p = population(r.final_state, [](const BasisLabel &l) { return l.mol == MolLevel::M_minus32; });
        good += r.success && std::fabs(p - 1) < 1e-12 ? 1 : 0;
    }

    // Leaked molecules never herald; the failure rate tracks the leaked prior.
    const double leaked_prior = 0.2;
    NoiseConfig noisy = ideal;
    noisy.prep_error = 0.05;
    int failures = 0;
    std::bernoulli_distribution leak(leaked_prior), coin(0.5);
    for (int i = 0; i < runs; i++) {
        TrialContext ctx(noisy, pulses, rng, n_max);
        MolLevel start = leak(rng) ? MolLevel::Leaked : coin(rng) ? MolLevel::M_minus32 : MolLevel::M_minus52;
        failures += herald_prepare_minus32(molecule_state(start, n_max), herald, ctx).success ? 0 : 1;
    }
    double rate = static_cast<double>(failures) / runs;
    double sigma = std::sqrt(leaked_prior * (1 - leaked_prior) / runs);
    bool pass = good == runs && std::fabs(rate - leaked_prior) < 3 * sigma;
    return {pass, std::to_string(good) + "/" + std::to_string(runs) + " noiseless heralds in -3/2" +
                      fmt("; failure rate %.4f vs prior %.2f (3 sigma = %.4f)", rate, leaked_prior, 3 * sigma)};
}

Outcome determinism() {
    ExperimentConfig cfg;
    cfg.protocol = ProtocolKind::ParityScanH;
    for (int k = 0; k < 10; k++) {
        cfg.phi_a.push_back(kPi * k / 5);
    }
    cfg.targets = {40};
    cfg.population_trials = 100;
    cfg.seed = 77;
    cfg.bootstrap_resamples = 200;
    auto root = std::filesystem::temp_directory_path() / ("qlsim_acceptance_" + std::to_string(::getpid()));
    std::filesystem::remove_all(root);
    write_outputs(root / "a", cfg, run_campaign(cfg, 1));
    write_outputs(root / "b", cfg, run_campaign(cfg, 2));
    std::size_t files = 0, identical = 0;
    for (const auto &entry : std::filesystem::directory_iterator(root / "a")) {
        files++;
        auto other = root / "b" / entry.path().filename();
        identical += std::filesystem::exists(other) && read_file(entry.path()) == read_file(other) ? 1 : 0;
    }
    std::size_t files_b = std::distance(std::filesystem::directory_iterator(root / "b"), {});
    std::filesystem::remove_all(root);
    bool pass = files > 0 && identical == files && files_b == files;
    return {pass, std::to_string(identical) + "/" + std::to_string(files) + " output files byte-identical"};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "noiseless protocol oracle", 1, noiseless_oracle},
        {2, "parity fringe structure", 5, fringe_structure},
        {3, "fidelity golden values", 1, fidelity_goldens},
        {4, "statistical-scale reproduction", 300, statistical_scale},
        {5, "comb arithmetic golden values", 1, comb_goldens},
        {6, "unitarity and Born rule", 60, unitarity_and_born},
        {7, "detection discrimination", 30, detection_discrimination},
        {8, "herald soundness", 60, herald_soundness},
        {9, "determinism", 60, determinism},
    };
    int failed = 0;
    for (const auto &c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = o.pass && secs <= c.limit_s;
        failed += pass ? 0 : 1;
        std::printf("[%s] %d %s: %s; %.2f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                    secs, c.limit_s);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
