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

#include <gtest/gtest.h>

#include <cmath>

#include "qlsim/protocols.h"
#include "test_support.h"

using namespace qlsim;
using qlsim::testing::test_rng;

namespace {

// Independent Poisson CDF by direct summation in long double.
double poisson_cdf(double mean, int k) {
    long double term = std::exp(-static_cast<long double>(mean));
    long double sum = term;
    for (int i = 1; i <= k; i++) {
        term *= mean / i;
        sum += term;
    }
    return static_cast<double>(sum);
}

struct Noiseless {
    NoiseConfig noise = NoiseConfig::ideal();
    ProtocolPulses pulses = ProtocolPulses::defaults();
};

}  // namespace

TEST(measurement, poisson_misclassification_oracle) {
    EXPECT_NEAR(poisson_cdf(20, 5), 7.1909e-5, 1e-8);
    EXPECT_NEAR(1 - poisson_cdf(0.4, 5), 4.0427e-6, 1e-9);
}

TEST(measurement, bright_branch_error_rate) {
    NoiseConfig cfg;
    Rng rng = test_rng(40);
    const int shots = 200000;
    int wrong = 0;
    for (int i = 0; i < shots; i++) {
        StateVector s = initial_state();
        AtomDetection d = detect_atom(s, cfg, kDefaultDetectThreshold, rng);
        ASSERT_EQ(d.projected, AtomLevel::S);
        ASSERT_EQ(d.outcome == AtomLevel::S, d.photon_counts >= kDefaultDetectThreshold);
        wrong += d.outcome != AtomLevel::S ? 1 : 0;
    }
    double expected = poisson_cdf(20, 5) * shots;
    EXPECT_NEAR(wrong, expected, 5 * std::sqrt(expected) + 1);
}

TEST(measurement, equal_superposition_born_rule) {
    NoiseConfig cfg = NoiseConfig::ideal();
    Rng rng = test_rng(41);
    StateVector super = StateVector::from_terms({{{AtomLevel::S, MolLevel::M_minus32, 0}, 1},
                                                 {{AtomLevel::D, MolLevel::M_minus52, 0}, 1}});
    const int shots = 100000;
    int s_count = 0;
    for (int i = 0; i < shots; i++) {
        StateVector s = super;
        AtomDetection d = detect_atom(s, cfg, kDefaultDetectThreshold, rng);
        s_count += d.outcome == AtomLevel::S ? 1 : 0;
        // Collapse: molecule is correlated with the atom outcome.
        MolLevel expect = d.projected == AtomLevel::S ? MolLevel::M_minus32 : MolLevel::M_minus52;
        ASSERT_NEAR(internal_population(s, d.projected, expect), 1, 1e-12);
    }
    EXPECT_NEAR(static_cast<double>(s_count) / shots, 0.5, 3 * std::sqrt(0.25 / shots));
}

TEST(measurement, collapse_is_idempotent) {
    NoiseConfig cfg = NoiseConfig::ideal();
    Rng rng = test_rng(42);
    for (int i = 0; i < 1000; i++) {
        StateVector s = target_psi_H();
        AtomDetection first = detect_atom(s, cfg, kDefaultDetectThreshold, rng);
        AtomDetection second = detect_atom(s, cfg, kDefaultDetectThreshold, rng);
        ASSERT_EQ(first.outcome, second.outcome);
    }
}

TEST(measurement, reset_keeps_molecular_coherence) {
    Rng rng = test_rng(43);
    StateVector s = StateVector::from_terms({{{AtomLevel::S, MolLevel::M_minus32, 1}, 1},
                                             {{AtomLevel::S, MolLevel::M_minus52, 1}, Complex(0, 1)}});
    reset_atom_and_motion(s, 2, rng);
    EXPECT_NEAR(std::abs(s.amplitude({AtomLevel::D, MolLevel::M_minus32, 2}) - Complex(1 / std::sqrt(2.0))), 0,
                1e-15);
    EXPECT_NEAR(std::abs(s.amplitude({AtomLevel::D, MolLevel::M_minus52, 2}) - Complex(0, 1 / std::sqrt(2.0))), 0,
                1e-15);
    EXPECT_THROW(reset_atom_and_motion(s, kDefaultNMax, rng), TruncationError);
}

TEST(measurement, molecule_identification_noiseless) {
    Noiseless nl;
    Rng rng = test_rng(44);
    TrialContext ctx(nl.noise, nl.pulses, rng);
    for (int i = 0; i < 50; i++) {
        StateVector a = molecule_state(MolLevel::M_minus32);
        EXPECT_EQ(detect_molecule_after_atom(a, Qubit::Low, ctx), MolOutcome::Minus32);
        StateVector b = molecule_state(MolLevel::M_minus52);
        EXPECT_EQ(detect_molecule_after_atom(b, Qubit::Low, ctx), MolOutcome::Minus52);
        StateVector c = molecule_state(MolLevel::M_J0);
        EXPECT_EQ(detect_molecule_after_atom(c, Qubit::High, ctx), MolOutcome::J0);
        StateVector d = molecule_state(MolLevel::M_J0);
        EXPECT_EQ(detect_molecule_after_atom(d, Qubit::Low, ctx), MolOutcome::Other);
        StateVector e = molecule_state(MolLevel::Leaked);
        EXPECT_EQ(detect_molecule_after_atom(e, Qubit::High, ctx), MolOutcome::Other);
    }
}

TEST(measurement, parity_of_ideal_populations) {
    using P = PopulationEstimate;
    std::array<std::uint64_t, P::kSlots> low{};
    low[P::SMinus] = 101;
    low[P::DMinus] = 101;
    EXPECT_DOUBLE_EQ(parity(P::from_counts(Qubit::Low, low), Qubit::Low), -1);
    std::array<std::uint64_t, P::kSlots> high{};
    high[P::SPlus] = 7;
    high[P::DPlus] = 7;
    EXPECT_DOUBLE_EQ(parity(P::from_counts(Qubit::High, high), Qubit::High), 1);
    std::array<std::uint64_t, P::kSlots> uniform = {25, 25, 25, 25, 0};
    EXPECT_DOUBLE_EQ(parity(P::from_counts(Qubit::Low, uniform), Qubit::Low), 0);
    EXPECT_THROW(parity(P::from_counts(Qubit::Low, uniform), Qubit::High), std::invalid_argument);
    EXPECT_DOUBLE_EQ(exact_parity(target_psi_L(), Qubit::Low), -1);
    EXPECT_DOUBLE_EQ(exact_parity(target_psi_H(), Qubit::High), 1);
}

TEST(measurement, population_estimate_errors) {
    using P = PopulationEstimate;
    std::array<std::uint64_t, P::kSlots> counts = {0, 0, 101, 91, 10};
    P est = P::from_counts(Qubit::Low, counts);
    EXPECT_EQ(est.total, 202u);
    double p = 101.0 / 202;
    EXPECT_DOUBLE_EQ(est.get(AtomLevel::S, MolLevel::M_minus32), p);
    EXPECT_DOUBLE_EQ(est.error(AtomLevel::S, MolLevel::M_minus32), std::sqrt(p * (1 - p) / 202));
    double sum = 0;
    for (double x : est.p) {
        sum += x;
    }
    EXPECT_NEAR(sum, 1, 1e-15);
}

TEST(measurement, parity_bounded_and_linear) {
    using P = PopulationEstimate;
    Rng rng = test_rng(45);
    std::uniform_int_distribution<std::uint64_t> u(0, 50);
    for (int t = 0; t < 100; t++) {
        std::array<std::uint64_t, P::kSlots> c{};
        for (auto &x : c) {
            x = u(rng);
        }
        c[0]++;
        P est = P::from_counts(Qubit::High, c);
        double pi = parity(est, Qubit::High);
        EXPECT_LE(std::fabs(pi), 1);
        EXPECT_NEAR(pi, est.p[0] + est.p[1] - est.p[2] - est.p[3], 1e-15);
    }
}

TEST(measurement, born_rule_frequencies) {
    NoiseConfig cfg = NoiseConfig::ideal();
    Rng rng = test_rng(46);
    StateVector base = qlsim::testing::random_state(rng, 3);
    double p_s = population(base, [](const BasisLabel &l) { return l.atom == AtomLevel::S; });
    const int shots = 100000;
    int s_count = 0;
    for (int i = 0; i < shots; i++) {
        StateVector s = base;
        s_count += detect_atom(s, cfg, kDefaultDetectThreshold, rng).outcome == AtomLevel::S ? 1 : 0;
    }
    EXPECT_NEAR(static_cast<double>(s_count) / shots, p_s, 4 * std::sqrt(p_s * (1 - p_s) / shots));
}

TEST(measurement, names_round_trip) {
    for (auto o : {MolOutcome::Minus32, MolOutcome::Minus52, MolOutcome::J0, MolOutcome::Other}) {
        EXPECT_EQ(parse_mol_outcome(to_string(o)), o);
    }
    EXPECT_EQ(parse_qubit("low"), Qubit::Low);
    EXPECT_EQ(parse_qubit("high"), Qubit::High);
    EXPECT_FALSE(parse_qubit("mid").has_value());
}
