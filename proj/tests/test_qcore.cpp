// Copyright 2026 The rydcnot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rydcnot/noise.hpp"
#include "rydcnot/params.hpp"
#include "rydcnot/qcore.hpp"
#include "rydcnot/thermal.hpp"

namespace rydcnot {
namespace {

Hamiltonian random_hamiltonian(Rng& rng, double bound) {
    Hamiltonian h;
    for (int i = 0; i < kJointDim; ++i) {
        h.matrix(i, i) = bound * (2.0 * uniform01(rng) - 1.0);
        for (int j = i + 1; j < kJointDim; ++j) {
            const Complex z(bound * (2.0 * uniform01(rng) - 1.0) / std::sqrt(2.0),
                            bound * (2.0 * uniform01(rng) - 1.0) / std::sqrt(2.0));
            h.matrix(i, j) = z;
            h.matrix(j, i) = std::conj(z);
        }
    }
    return h;
}

TwoAtomState random_state(Rng& rng) {
    TwoAtomState s;
    for (int j = 0; j < kJointDim; ++j)
        s.amps[j] = Complex(standard_normal(rng), standard_normal(rng));
    s.amps.normalize();
    return s;
}

TEST(ComputationalState, BasisIndices) {
    EXPECT_EQ(computational_state(AtomLevel::G1, AtomLevel::G1).amps[4], Complex(1.0));
    EXPECT_EQ(computational_state(AtomLevel::G0, AtomLevel::G1).amps[1], Complex(1.0));
    EXPECT_EQ(computational_state(AtomLevel::R, AtomLevel::R).amps[8], Complex(1.0));
    const auto s = computational_state(AtomLevel::G1, AtomLevel::G0);
    EXPECT_NEAR(s.norm(), 1.0, 0.0);
    EXPECT_FALSE(s.any_lost());
}

TEST(Evolve, ZeroHamiltonianIsIdentity) {
    Rng rng = make_rng({1});
    const TwoAtomState s = random_state(rng);
    const TwoAtomState out = evolve(s, Hamiltonian::zero(), 3e-6);
    EXPECT_TRUE(out.amps.isApprox(s.amps, 0.0));
}

TEST(Evolve, ResonantPiPulseOnControl) {
    const double omega = angular(0.81e6);
    const auto h = rydberg_hamiltonian({omega, 0.0}, {0.0, 0.0}, 0.0);
    const auto out = evolve(computational_state(AtomLevel::G1, AtomLevel::G1), h, kPi / omega);
    const Complex a = out.amps[joint_index(AtomLevel::R, AtomLevel::G1)];
    EXPECT_NEAR(a.real(), 0.0, 1e-12);
    EXPECT_NEAR(a.imag(), -1.0, 1e-12);
}

TEST(Evolve, DoubleExcitationMatchesIntegrator) {
    const double omega = angular(0.81e6), b = angular(5.3e6);
    const auto h = rydberg_hamiltonian({omega, omega}, {0.0, 0.0}, b);
    const auto s = computational_state(AtomLevel::G1, AtomLevel::G1);
    const double t = kPi / omega;
    const auto out = evolve(s, h, t);
    const StateVector ref = oracle::rk4(h.matrix, s.amps, t, 1e-9);
    const int rr = joint_index(AtomLevel::R, AtomLevel::R);
    const double p2 = std::norm(out.amps[rr]);
    const double p2_ref = std::norm(ref[rr]);
    EXPECT_NEAR(p2, p2_ref, 0.1 * p2_ref);
    EXPECT_GT(p2, 0.0);
}

TEST(Evolve, NonHermitianIsContractViolation) {
    Hamiltonian h;
    h.matrix(0, 1) = 1.0;
    EXPECT_THROW(evolve(computational_state(AtomLevel::G0, AtomLevel::G0), h, 1e-6),
                 ContractViolation);
    EXPECT_THROW(evolve(computational_state(AtomLevel::G0, AtomLevel::G0), Hamiltonian::zero(), -1.0),
                 ContractViolation);
}

TEST(Evolve, LostAtomIsFrozen) {
    const double omega = angular(1e6);
    const auto h = rydberg_hamiltonian({omega, omega}, {0.0, 0.0}, angular(5e6)) +
                   ground_hamiltonian({omega, omega}, {0.3, 0.7});
    TwoAtomState s = computational_state(AtomLevel::G1, AtomLevel::G1);
    s.lost.target() = true;
    const auto out = evolve(s, h, 0.37e-6);
    for (AtomLevel c : kLevels)
        for (AtomLevel t : kLevels)
            if (t != AtomLevel::G1) {
                EXPECT_NEAR(std::abs(out.amps[joint_index(c, t)]), 0.0, 1e-14);
            }
    // The control evolves as if alone: no blockade from the absent target.
    const auto alone = rydberg_hamiltonian({omega, 0.0}, {0.0, 0.0}, 0.0) +
                       ground_hamiltonian({omega, 0.0}, {0.3, 0.0});
    const auto ref = evolve(computational_state(AtomLevel::G1, AtomLevel::G1), alone, 0.37e-6);
    EXPECT_LT((out.amps - ref.amps).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RydbergHamiltonian, Structure) {
    const double omega = angular(0.81e6), b = angular(5.3e6);
    const auto h = rydberg_hamiltonian({omega, 0.0}, {0.0, 0.0}, b);
    int offdiag = 0, diag = 0;
    for (int i = 0; i < kJointDim; ++i)
        for (int j = 0; j < kJointDim; ++j)
            if (h.matrix(i, j) != Complex(0.0)) (i == j ? diag : offdiag)++;
    EXPECT_EQ(offdiag, 6);  // three upper entries |1x><rx| plus their conjugates
    EXPECT_EQ(diag, 1);
    const int rr = joint_index(AtomLevel::R, AtomLevel::R);
    EXPECT_EQ(h.matrix(rr, rr), Complex(b));
    EXPECT_EQ(h.matrix(joint_index(AtomLevel::R, AtomLevel::G0), joint_index(AtomLevel::G1, AtomLevel::G0)),
              Complex(0.5 * omega));
    EXPECT_TRUE(rydberg_hamiltonian({0.0, 0.0}, {0.0, 0.0}, 0.0).is_zero());
    EXPECT_THROW(rydberg_hamiltonian({-1.0, 0.0}, {0.0, 0.0}, 0.0), ContractViolation);
}

TEST(RydbergHamiltonian, SpectrumMatchesJacobi) {
    const double omega = angular(0.81e6), b = angular(5.3e6);
    const auto h = rydberg_hamiltonian({omega, omega}, {angular(0.1e6), -angular(0.2e6)}, b);
    oracle::RealMatrix m{}, v{};
    for (int i = 0; i < kJointDim; ++i)
        for (int j = 0; j < kJointDim; ++j) {
            m[i][j] = m[i + kJointDim][j + kJointDim] = h.matrix(i, j).real();
            m[i][j + kJointDim] = -h.matrix(i, j).imag();
            m[i + kJointDim][j] = h.matrix(i, j).imag();
        }
    oracle::jacobi(m, v);
    std::vector<double> ref;
    for (int k = 0; k < 2 * kJointDim; ++k) ref.push_back(m[k][k]);
    std::sort(ref.begin(), ref.end());
    Eigen::SelfAdjointEigenSolver<JointMatrix> eig(h.matrix);
    for (int k = 0; k < kJointDim; ++k) {
        // The real embedding doubles every eigenvalue.
        EXPECT_NEAR(eig.eigenvalues()[k], ref[2 * k], 1e-6 * b);
        EXPECT_NEAR(eig.eigenvalues()[k], ref[2 * k + 1], 1e-6 * b);
    }
}

TEST(GroundHamiltonian, PiPulseAndPhaseConvention) {
    const double w = kPi / 900e-9;
    const auto pi_pulse = ground_hamiltonian({w, 0.0}, {0.0, 0.0});
    const auto out = evolve(computational_state(AtomLevel::G0, AtomLevel::G0), pi_pulse, kPi / w);
    const Complex a = out.amps[joint_index(AtomLevel::G1, AtomLevel::G0)];
    EXPECT_NEAR(a.real(), 0.0, 1e-12);
    EXPECT_NEAR(a.imag(), -1.0, 1e-12);

    const auto half = evolve(computational_state(AtomLevel::G1, AtomLevel::G0), pi_pulse, 0.5 * kPi / w);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(half.amps[joint_index(AtomLevel::G1, AtomLevel::G0)] - Complex(r)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(half.amps[joint_index(AtomLevel::G0, AtomLevel::G0)] - Complex(0.0, -r)), 0.0, 1e-12);
}

TEST(GroundHamiltonian, CounterRotationIsIdentity) {
    const double w = kPi / 900e-9;
    Rng rng = make_rng({2});
    TwoAtomState s = random_state(rng);
    for (int k = 0; k < kJointDim; ++k)
        if (level_of(k, Atom::Target) == AtomLevel::R) s.amps[k] = 0.0;
    s.amps.normalize();
    auto out = evolve(s, ground_hamiltonian({0.0, w}, {0.0, 0.0}), 0.5 * kPi / w);
    out = evolve(out, ground_hamiltonian({0.0, w}, {0.0, kPi}), 0.5 * kPi / w);
    const Complex phase = out.amps.dot(s.amps);
    EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
}

TEST(GroundHamiltonian, HalfPiOnBothAtoms) {
    const double w = kPi / 900e-9;
    const auto out = evolve(computational_state(AtomLevel::G1, AtomLevel::G1),
                            ground_hamiltonian({w, w}, {0.0, 0.0}), 0.5 * kPi / w);
    // 2x2 rotation algebra: each atom is cos(pi/4)|1> - i sin(pi/4)|0>.
    for (AtomLevel c : {AtomLevel::G0, AtomLevel::G1})
        for (AtomLevel t : {AtomLevel::G0, AtomLevel::G1})
            EXPECT_NEAR(out.population(c, t), 0.25, 1e-10);
}

TEST(Properties, NormAndComposition) {
    Rng rng = make_rng({3});
    for (int trial = 0; trial < 50; ++trial) {
        const Hamiltonian h = random_hamiltonian(rng, angular(10e6));
        const TwoAtomState s = random_state(rng);
        const double t1 = 5e-6 * uniform01(rng), t2 = 5e-6 * uniform01(rng);
        const auto once = evolve(s, h, t1 + t2);
        const auto twice = evolve(evolve(s, h, t1), h, t2);
        EXPECT_NEAR(once.norm(), 1.0, 1e-10);
        EXPECT_LT((once.amps - twice.amps).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(Properties, PropagatorMatchesIntegratorAndJacobi) {
    Rng rng = make_rng({4});
    for (int trial = 0; trial < 10; ++trial) {
        const Hamiltonian h = random_hamiltonian(rng, angular(10e6));
        const TwoAtomState s = random_state(rng);
        const double t = 0.5e-6 * uniform01(rng);
        const auto out = evolve(s, h, t);
        EXPECT_LT((out.amps - oracle::rk4(h.matrix, s.amps, t, 1e-11)).cwiseAbs().maxCoeff(), 1e-6);
        EXPECT_LT((out.amps - oracle::jacobi_evolve(h.matrix, s.amps, t)).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(Properties, BlockadeLimit) {
    const double omega = angular(0.81e6);
    for (AtomLevel target : {AtomLevel::G0, AtomLevel::G1}) {
        TwoAtomState s = computational_state(AtomLevel::R, target);
        const auto h = rydberg_hamiltonian({0.0, omega}, {0.0, 0.0}, 1e4 * omega);
        const auto out = evolve(s, h, kTwoPi / omega);
        EXPECT_NEAR(out.population(AtomLevel::R, target), 1.0, 1e-3);
    }
}

TEST(Measure, BlowAwayBasics) {
    Rng rng = make_rng({5});
    const ReadoutMode m = ReadoutMode::remove_one();
    const auto p00 = readout_probabilities(computational_state(AtomLevel::G0, AtomLevel::G0), m);
    EXPECT_DOUBLE_EQ(p00[3], 1.0);
    const auto p11 = readout_probabilities(computational_state(AtomLevel::G1, AtomLevel::G1), m);
    EXPECT_DOUBLE_EQ(p11[0], 1.0);
    EXPECT_EQ(measure(computational_state(AtomLevel::G0, AtomLevel::G0), m, rng).code(), 3);
    EXPECT_EQ(measure(computational_state(AtomLevel::R, AtomLevel::G0), m, rng).code(), 1);
    TwoAtomState lost = computational_state(AtomLevel::G0, AtomLevel::G0);
    lost.lost.control() = true;
    EXPECT_EQ(measure(lost, m, rng).code(), 1);
}

TEST(Measure, BellStateFrequencies) {
    TwoAtomState s;
    s.amps[joint_index(AtomLevel::G0, AtomLevel::G0)] = 1.0 / std::sqrt(2.0);
    s.amps[joint_index(AtomLevel::G1, AtomLevel::G1)] = 1.0 / std::sqrt(2.0);
    Rng rng = make_rng({6});
    constexpr int n = 10000;
    std::array<int, 4> counts{};
    for (int k = 0; k < n; ++k) ++counts[measure(s, ReadoutMode::remove_one(), rng).code()];
    const double sd = std::sqrt(0.25 / n);
    EXPECT_NEAR(counts[3] / double(n), 0.5, 3 * sd);
    EXPECT_NEAR(counts[0] / double(n), 0.5, 3 * sd);
    EXPECT_EQ(counts[1] + counts[2], 0);
}

TEST(Measure, BornRuleOnRandomStates) {
    Rng rng = make_rng({7});
    for (int trial = 0; trial < 5; ++trial) {
        const TwoAtomState s = random_state(rng);
        const ReadoutMode mode = ReadoutMode::certifying(trial % 2, (trial / 2) % 2);
        const auto p = readout_probabilities(s, mode);
        constexpr int n = 20000;
        std::array<int, 4> counts{};
        for (int k = 0; k < n; ++k) ++counts[measure(s, mode, rng).code()];
        for (int q = 0; q < 4; ++q)
            EXPECT_NEAR(counts[q] / double(n), p[q], 3.0 * std::sqrt(p[q] * (1 - p[q]) / n) + 1e-12);
    }
}

TEST(Measure, CertifyingModeSelectsOneOutcome) {
    for (int c = 0; c < 2; ++c)
        for (int t = 0; t < 2; ++t) {
            const auto mode = ReadoutMode::certifying(c, t);
            for (int in = 0; in < 4; ++in) {
                const auto s = computational_state(in / 2 ? AtomLevel::G1 : AtomLevel::G0,
                                                   in % 2 ? AtomLevel::G1 : AtomLevel::G0);
                EXPECT_DOUBLE_EQ(readout_probabilities(s, mode)[3], in == 2 * c + t ? 1.0 : 0.0);
            }
        }
}

}  // namespace
}  // namespace rydcnot
