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

#include "qlsim/protocols.h"

#include <gtest/gtest.h>

#include "test_support.h"

using namespace qlsim;
using qlsim::testing::kPi;
using qlsim::testing::test_rng;

namespace {

double mol_population(const StateVector &s, MolLevel mol) {
    return population(s, [mol](const BasisLabel &l) { return l.mol == mol; });
}

struct Noiseless {
    NoiseConfig noise = NoiseConfig::ideal();
    ProtocolPulses pulses = ProtocolPulses::defaults();
};

}  // namespace

TEST(protocols, psi_l_from_ground_state) {
    EXPECT_NEAR(fidelity(target_psi_I(), create_psi_I(initial_state())), 1, 1e-12);
    EXPECT_NEAR(fidelity(target_psi_L(), create_psi_L(initial_state())), 1, 1e-12);
}

TEST(protocols, psi_l_wrong_preparation) {
    StateVector out = create_psi_L(new_basis_state({AtomLevel::S, MolLevel::M_minus52, 0}));
    EXPECT_NEAR(internal_population(out, AtomLevel::S, MolLevel::M_minus32), 0, 1e-15);
}

TEST(protocols, psi_l_thermal_start_reduces_fidelity) {
    StateVector out = create_psi_L(new_basis_state({AtomLevel::S, MolLevel::M_minus32, 1}));
    EXPECT_LT(fidelity(target_psi_L(), out), 0.99);
    EXPECT_NEAR(out.norm_squared(), 1, 1e-12);
}

TEST(protocols, psi_h_from_psi_i) {
    EXPECT_NEAR(fidelity(target_psi_H(), create_psi_H(target_psi_I())), 1, 1e-12);
}

TEST(protocols, psi_h_minus52_branch_ends_in_d2) {
    StateVector branch = new_basis_state({AtomLevel::S, MolLevel::M_minus52, 1});
    StateVector out = create_psi_H(branch);
    EXPECT_NEAR(internal_population(out, AtomLevel::D, MolLevel::M_minus32), 1, 1e-12);
    EXPECT_NEAR(std::norm(out.amplitude({AtomLevel::D, MolLevel::M_minus32, 0})), 1, 1e-12);
}

TEST(protocols, psi_h_without_comb_pulse) {
    ProtocolPulses p = ProtocolPulses::defaults();
    p.comb_map.theta = 0;
    StateVector out = create_psi_H(target_psi_I(), p);
    EXPECT_LE(fidelity(target_psi_H(), out), 0.5 + 1e-12);
}

TEST(protocols, analysis_phase_periodicity) {
    for (Qubit q : {Qubit::Low, Qubit::High}) {
        StateVector in = q == Qubit::Low ? target_psi_L() : target_psi_H();
        for (double phi : {0.0, 0.4, 1.9, -2.2}) {
            StateVector a = analysis_pulses(in, q, phi);
            StateVector b = analysis_pulses(in, q, phi + 2 * kPi);
            for (std::size_t k = 0; k < a.dim(); k++) {
                EXPECT_NEAR(std::abs(a.amplitudes()[k] - b.amplitudes()[k]), 0, 1e-12);
            }
            EXPECT_NEAR(exact_parity(a, q), exact_parity(analysis_pulses(in, q, phi + kPi), q), 1e-12);
        }
    }
}

TEST(protocols, parity_period_pi_for_any_input) {
    Rng rng = test_rng(30);
    for (int t = 0; t < 20; t++) {
        StateVector s = qlsim::testing::random_state(rng, kDefaultNMax, [](const BasisLabel &l) { return l.n < 3; });
        for (Qubit q : {Qubit::Low, Qubit::High}) {
            double phi = 0.37 * t;
            EXPECT_NEAR(exact_parity(analysis_pulses(s, q, phi), q), exact_parity(analysis_pulses(s, q, phi + kPi), q),
                        1e-12);
        }
    }
}

TEST(protocols, ideal_fringes_have_full_contrast) {
    for (int k = 0; k < 24; k++) {
        double phi = k * kPi / 12;
        EXPECT_NEAR(exact_parity(analysis_pulses(target_psi_L(), Qubit::Low, phi), Qubit::Low), std::cos(2 * phi),
                    1e-12);
        EXPECT_NEAR(exact_parity(analysis_pulses(target_psi_H(), Qubit::High, phi), Qubit::High), -std::cos(2 * phi),
                    1e-12);
    }
}

TEST(protocols, hide_unhide_is_identity) {
    for (StateVector s : {target_psi_H(), target_psi_L(), initial_state()}) {
        StateVector back = hide_unhide(hide_unhide(s, HideDirection::Hide), HideDirection::Unhide);
        EXPECT_NEAR(std::abs(inner_product(s, back)), 1, 1e-12);
    }
}

TEST(protocols, hide_leaves_s0) {
    StateVector s = new_basis_state({AtomLevel::S, MolLevel::M_J0, 0});
    EXPECT_EQ(hide_unhide(s, HideDirection::Hide), s);
}

TEST(protocols, hide_maps_d0_to_s1) {
    StateVector out = hide_unhide(new_basis_state({AtomLevel::D, MolLevel::M_minus32, 0}), HideDirection::Hide);
    EXPECT_NEAR(std::norm(out.amplitude({AtomLevel::S, MolLevel::M_minus32, 1})), 1, 1e-15);
}

TEST(protocols, hide_with_motional_contamination) {
    StateVector s = StateVector::from_terms({{{AtomLevel::D, MolLevel::M_minus32, 0}, 1},
                                             {{AtomLevel::D, MolLevel::M_minus32, 1}, 0.4}});
    StateVector parked = hide_unhide(s, HideDirection::Hide);
    // The n = 1 part sees sqrt(2) pi and is not fully transferred.
    EXPECT_GT(internal_population(parked, AtomLevel::D, MolLevel::M_minus32), 1e-3);
}

TEST(protocols, qls_detection_noiseless) {
    Noiseless nl;
    Rng rng = test_rng(31);
    TrialContext ctx(nl.noise, nl.pulses, rng);
    for (int i = 0; i < 100; i++) {
        StateVector s = molecule_state(MolLevel::M_minus32);
        EXPECT_TRUE(qls_detect_minus32(s, ctx));
        EXPECT_NEAR(mol_population(s, MolLevel::M_minus52), 1, 1e-12);
        StateVector t = molecule_state(MolLevel::M_minus52);
        EXPECT_FALSE(qls_detect_minus32(t, ctx));
        EXPECT_NEAR(mol_population(t, MolLevel::M_minus52), 1, 1e-12);
        EXPECT_TRUE(qls_detect_minus52(t, ctx));
        EXPECT_NEAR(mol_population(t, MolLevel::M_minus32), 1, 1e-12);
    }
}

TEST(protocols, qls_detection_of_superposition) {
    Noiseless nl;
    Rng rng = test_rng(32);
    TrialContext ctx(nl.noise, nl.pulses, rng);
    const int shots = 100000;
    int positives = 0;
    StateVector super = StateVector::from_terms({{{AtomLevel::D, MolLevel::M_minus32, 0}, 1},
                                                 {{AtomLevel::D, MolLevel::M_minus52, 0}, 1}});
    for (int i = 0; i < shots; i++) {
        StateVector s = super;
        bool hit = qls_detect_minus32(s, ctx);
        positives += hit ? 1 : 0;
        // Positive leaves -5/2 (moved from -3/2); negative leaves the original -5/2.
        ASSERT_NEAR(mol_population(s, MolLevel::M_minus52), 1, 1e-12);
        if (!hit) {
            ASSERT_TRUE(qls_detect_minus52(s, ctx));
        }
    }
    EXPECT_NEAR(static_cast<double>(positives) / shots, 0.5, 0.01);
}

TEST(protocols, herald_noiseless_soundness) {
    Noiseless nl;
    for (MolLevel start : {MolLevel::M_minus32, MolLevel::M_minus52}) {
        for (int i = 0; i < 500; i++) {
            Rng rng = test_rng(1000 + i);
            TrialContext ctx(nl.noise, nl.pulses, rng);
            ProtocolResult r = herald_prepare_minus32(molecule_state(start), HeraldConfig{}, ctx);
            ASSERT_TRUE(r.success);
            ASSERT_NEAR(mol_population(r.final_state, MolLevel::M_minus32), 1, 1e-12);
            ASSERT_EQ(r.herald_outcomes.size(), r.attempts);
        }
    }
}

TEST(protocols, herald_from_mixture_always_succeeds) {
    Noiseless nl;
    int ok = 0;
    const int runs = 10000;
    for (int i = 0; i < runs; i++) {
        Rng rng = test_rng(20000 + i);
        TrialContext ctx(nl.noise, nl.pulses, rng);
        MolLevel start = i % 2 == 0 ? MolLevel::M_minus32 : MolLevel::M_minus52;
        ProtocolResult r = herald_prepare_minus32(molecule_state(start), HeraldConfig{}, ctx);
        ok += r.success && std::abs(mol_population(r.final_state, MolLevel::M_minus32) - 1) < 1e-12 ? 1 : 0;
    }
    EXPECT_EQ(ok, runs);
}

TEST(protocols, herald_minus52_succeeds_first_attempt) {
    Noiseless nl;
    Rng rng = test_rng(33);
    TrialContext ctx(nl.noise, nl.pulses, rng);
    ProtocolResult r = herald_prepare_minus32(molecule_state(MolLevel::M_minus52), HeraldConfig{}, ctx);
    EXPECT_TRUE(r.success);
    EXPECT_EQ(r.attempts, 1u);
}

TEST(protocols, herald_leaked_never_succeeds) {
    Noiseless nl;
    Rng rng = test_rng(34);
    TrialContext ctx(nl.noise, nl.pulses, rng);
    HeraldConfig cfg;
    cfg.max_attempts = 17;
    ProtocolResult r = herald_prepare_minus32(molecule_state(MolLevel::Leaked), cfg, ctx);
    EXPECT_FALSE(r.success);
    EXPECT_TRUE(r.aborted);
    EXPECT_TRUE(r.leaked);
    EXPECT_FALSE(r.valid);
    EXPECT_EQ(r.attempts, 17u);
}

TEST(protocols, verify_manifold_restores_minus32) {
    Noiseless nl;
    Rng rng = test_rng(35);
    TrialContext ctx(nl.noise, nl.pulses, rng);
    for (MolLevel m : {MolLevel::M_minus32, MolLevel::M_minus52}) {
        StateVector s = molecule_state(m);
        EXPECT_TRUE(verify_manifold(s, ctx));
    }
    StateVector leaked = molecule_state(MolLevel::Leaked);
    EXPECT_FALSE(verify_manifold(leaked, ctx));
    StateVector j0 = molecule_state(MolLevel::M_J0);
    EXPECT_FALSE(verify_manifold(j0, ctx));
}

TEST(protocols, leak_per_pulse_marks_state) {
    NoiseConfig noise = NoiseConfig::ideal();
    noise.leak_per_pulse = 1;
    ProtocolPulses pulses = ProtocolPulses::defaults();
    Rng rng = test_rng(36);
    TrialContext ctx(noise, pulses, rng);
    StateVector s = create_psi_L(initial_state(), ctx);
    EXPECT_TRUE(s.leaked());
    EXPECT_EQ(ctx.record.leak_events.size(), 1u);
}

TEST(protocols, pulse_roles_by_name) {
    ProtocolPulses p = ProtocolPulses::defaults();
    EXPECT_EQ(ProtocolPulses::names().size(), 12u);
    for (auto name : ProtocolPulses::names()) {
        EXPECT_NE(p.find(name), nullptr) << name;
    }
    EXPECT_EQ(p.find("nope"), nullptr);
    EXPECT_EQ(p.find("hide")->duration_us, kAtomSidebandUs);
}

TEST(protocols, coherence_windows) {
    ProtocolPulses p = ProtocolPulses::defaults();
    CoherenceWindows low = coherence_windows(p, Qubit::Low, 100);
    EXPECT_DOUBLE_EQ(low.atom_us, kAtomSidebandUs / 2 + 100 + kAtomCarrierUs / 2);
    EXPECT_EQ(low.comb_us, 0);
    CoherenceWindows high = coherence_windows(p, Qubit::High, 0);
    EXPECT_GT(high.comb_us, 0);
    EXPECT_GT(high.atom_us, low.atom_us - 100);
}
