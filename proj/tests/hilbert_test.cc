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

#include <gtest/gtest.h>

#include "qlsim/protocols.h"
#include "test_support.h"

using namespace qlsim;
using qlsim::testing::random_state;
using qlsim::testing::test_rng;

TEST(hilbert, basis_state_has_unit_amplitude) {
    StateVector s = new_basis_state({AtomLevel::S, MolLevel::M_minus32, 0});
    EXPECT_EQ(s.dim(), 2u * 3u * kDefaultNMax);
    EXPECT_EQ(s.amplitude({AtomLevel::S, MolLevel::M_minus32, 0}), Complex(1));
    EXPECT_DOUBLE_EQ(s.norm_squared(), 1);
    EXPECT_EQ(s, initial_state());
}

TEST(hilbert, basis_state_on_j0) {
    StateVector s = new_basis_state({AtomLevel::D, MolLevel::M_J0, 0});
    EXPECT_EQ(s.amplitude({AtomLevel::D, MolLevel::M_J0, 0}), Complex(1));
    EXPECT_DOUBLE_EQ(s.norm_squared(), 1);
}

TEST(hilbert, basis_state_outside_truncation_throws) {
    EXPECT_THROW(new_basis_state({AtomLevel::S, MolLevel::M_minus32, kDefaultNMax}), TruncationError);
    EXPECT_THROW(new_basis_state({AtomLevel::S, MolLevel::Leaked, 0}), std::invalid_argument);
}

TEST(hilbert, basis_ordering_is_lexicographic) {
    StateVector s(4);
    std::size_t k = 0;
    for (std::size_t a = 0; a < kAtomLevels; a++) {
        for (std::size_t m = 0; m < kCoherentMolLevels; m++) {
            for (std::size_t n = 0; n < 4; n++) {
                BasisLabel label{static_cast<AtomLevel>(a), static_cast<MolLevel>(m), n};
                EXPECT_EQ(s.index_of(label), k);
                EXPECT_EQ(s.label_at(k), label);
                k++;
            }
        }
    }
}

TEST(hilbert, basis_is_orthonormal) {
    StateVector probe(3);
    for (std::size_t i = 0; i < probe.dim(); i++) {
        for (std::size_t j = 0; j < probe.dim(); j++) {
            Complex ip = inner_product(new_basis_state(probe.label_at(i), 3), new_basis_state(probe.label_at(j), 3));
            EXPECT_EQ(ip, Complex(i == j ? 1.0 : 0.0));
        }
    }
}

TEST(hilbert, inner_product_is_conjugate_linear_in_first_argument) {
    Rng rng = test_rng(1);
    StateVector a = random_state(rng, 4);
    StateVector b = random_state(rng, 4);
    StateVector ia = a;
    for (auto &x : ia.amplitudes()) {
        x *= Complex(0, 1);
    }
    EXPECT_NEAR(std::abs(inner_product(ia, b) - Complex(0, -1) * inner_product(a, b)), 0, 1e-14);
    EXPECT_LE(std::abs(inner_product(a, b)), 1 + 1e-12);
    EXPECT_NEAR(std::abs(inner_product(a, a) - Complex(1)), 0, 1e-12);
}

TEST(hilbert, inner_product_dimension_mismatch) {
    EXPECT_THROW(inner_product(StateVector(3), StateVector(4)), DimensionMismatch);
}

TEST(hilbert, noiseless_psi_l_overlap) {
    StateVector out = create_psi_L(initial_state());
    EXPECT_NEAR(std::abs(inner_product(target_psi_L(), out)), 1, 1e-9);
}

TEST(hilbert, populations_of_targets) {
    EXPECT_DOUBLE_EQ(population(initial_state(), [](const BasisLabel &l) { return l.atom == AtomLevel::S; }), 1);
    EXPECT_NEAR(internal_population(target_psi_L(), AtomLevel::S, MolLevel::M_minus32), 0.5, 1e-15);
    EXPECT_NEAR(internal_population(target_psi_L(), AtomLevel::D, MolLevel::M_minus52), 0.5, 1e-15);
    EXPECT_NEAR(internal_population(target_psi_H(), AtomLevel::S, MolLevel::M_J0), 0.5, 1e-15);
    EXPECT_NEAR(internal_population(target_psi_H(), AtomLevel::D, MolLevel::M_minus32), 0.5, 1e-15);
}

TEST(hilbert, populations_partition_to_one) {
    Rng rng = test_rng(2);
    StateVector s = random_state(rng, 5);
    double total = 0;
    for (std::size_t a = 0; a < kAtomLevels; a++) {
        for (std::size_t m = 0; m < kCoherentMolLevels; m++) {
            total += internal_population(s, static_cast<AtomLevel>(a), static_cast<MolLevel>(m));
        }
    }
    EXPECT_NEAR(total, 1, 1e-12);
}

TEST(hilbert, from_terms_normalizes) {
    StateVector s = StateVector::from_terms({{{AtomLevel::S, MolLevel::M_minus32, 0}, 1},
                                             {{AtomLevel::D, MolLevel::M_minus52, 0}, 1}});
    EXPECT_NEAR(s.norm_squared(), 1, 1e-15);
    EXPECT_NEAR(fidelity(target_psi_L(), s), 1, 1e-15);
}

TEST(hilbert, truncation_boundary_check) {
    StateVector s = StateVector::from_terms({{{AtomLevel::S, MolLevel::M_minus32, 0}, 1},
                                             {{AtomLevel::S, MolLevel::M_minus32, kDefaultNMax - 1}, 0.01}});
    EXPECT_GT(s.boundary_population(), 1e-6);
    EXPECT_THROW(s.check_truncation(), TruncationError);
    EXPECT_NO_THROW(initial_state().check_truncation());
}

TEST(hilbert, debug_dump_format) {
    std::string dump = debug_dump(target_psi_L());
    EXPECT_EQ(dump,
              "S,-3/2,0,0.70710678118654746,0\n"
              "D,-5/2,0,0.70710678118654746,0\n");
    StateVector tiny = initial_state();
    tiny.amplitude({AtomLevel::D, MolLevel::M_J0, 2}) = 1e-13;
    EXPECT_EQ(debug_dump(tiny), "S,-3/2,0,1,0\n");
    StateVector leaked = initial_state();
    leaked.mark_leaked();
    EXPECT_NE(debug_dump(leaked).find("# leaked"), std::string::npos);
}

TEST(hilbert, level_names_round_trip) {
    for (auto l : {AtomLevel::S, AtomLevel::D}) {
        EXPECT_EQ(parse_atom_level(to_string(l)), l);
    }
    for (auto m : {MolLevel::M_minus32, MolLevel::M_minus52, MolLevel::M_J0, MolLevel::Leaked}) {
        EXPECT_EQ(parse_mol_level(to_string(m)), m);
    }
    EXPECT_FALSE(parse_atom_level("P").has_value());
}
