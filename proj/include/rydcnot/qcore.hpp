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

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include "rydcnot/common.hpp"
#include "rydcnot/rng.hpp"

/// \file
/// Two atoms with three levels each: the qubit states |0>, |1> and one
/// Rydberg level |r>.  States are pure; incoherent processes are handled by
/// the caller as stochastic jumps on top of the unitary evolution here.

namespace rydcnot {

enum class AtomLevel : std::uint8_t { G0 = 0, G1 = 1, R = 2 };

inline constexpr std::array<AtomLevel, 3> kLevels{AtomLevel::G0, AtomLevel::G1,
                                                  AtomLevel::R};
inline constexpr int kJointDim = 9;

using Complex = std::complex<double>;
using StateVector = Eigen::Matrix<Complex, kJointDim, 1>;
using JointMatrix = Eigen::Matrix<Complex, kJointDim, kJointDim>;

constexpr int level_index(AtomLevel l) { return static_cast<int>(l); }

/// Joint basis index, 3 * control + target.
constexpr int joint_index(AtomLevel control, AtomLevel target) {
    return 3 * level_index(control) + level_index(target);
}

constexpr AtomLevel level_of(int joint, Atom atom) {
    return static_cast<AtomLevel>(atom == Atom::Control ? joint / 3 : joint % 3);
}

inline std::string level_name(AtomLevel l) {
    switch (l) {
        case AtomLevel::G0: return "0";
        case AtomLevel::G1: return "1";
        case AtomLevel::R: return "r";
    }
    return "?";
}

struct TwoAtomState {
    StateVector amps = StateVector::Zero();
    PerAtom<bool> lost{false, false};

    double norm() const { return amps.norm(); }

    double population(AtomLevel control, AtomLevel target) const {
        return std::norm(amps[joint_index(control, target)]);
    }

    /// Marginal population of one atom's level.
    double level_population(Atom atom, AtomLevel level) const {
        double p = 0.0;
        for (int j = 0; j < kJointDim; ++j)
            if (level_of(j, atom) == level) p += std::norm(amps[j]);
        return p;
    }

    bool any_lost() const { return lost.control() || lost.target(); }
};

inline TwoAtomState computational_state(AtomLevel control, AtomLevel target) {
    TwoAtomState s;
    s.amps[joint_index(control, target)] = 1.0;
    return s;
}

/// Hermitian generator in rad/s over the joint basis.
struct Hamiltonian {
    JointMatrix matrix = JointMatrix::Zero();

    static Hamiltonian zero() { return {}; }

    bool is_hermitian(double rel_tol = 1e-12) const {
        const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
        return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
    }

    bool is_zero() const { return matrix.isZero(0.0); }

    Hamiltonian& operator+=(const Hamiltonian& other) {
        matrix += other.matrix;
        return *this;
    }
    friend Hamiltonian operator+(Hamiltonian a, const Hamiltonian& b) { return a += b; }

    /// Adds the single-atom operator |row><col| * value on `atom`, identity on
    /// the partner.
    void add_local(Atom atom, AtomLevel row, AtomLevel col, Complex value) {
        for (AtomLevel other : kLevels) {
            const int r = atom == Atom::Control ? joint_index(row, other)
                                                : joint_index(other, row);
            const int c = atom == Atom::Control ? joint_index(col, other)
                                                : joint_index(other, col);
            matrix(r, c) += value;
        }
    }

    /// Adds value * (|row><col| + h.c.) on `atom`.
    void add_local_coupling(Atom atom, AtomLevel row, AtomLevel col, Complex value) {
        add_local(atom, row, col, value);
        add_local(atom, col, row, std::conj(value));
    }
};

/// Rydberg excitation |1> <-> |r> with per-atom Rabi frequency, a detuning on
/// each atom's |r> projector and the blockade shift on |rr>.
inline Hamiltonian rydberg_hamiltonian(const PerAtom<double>& rabi,
                                       const PerAtom<double>& detuning,
                                       double blockade) {
    Hamiltonian h;
    for (Atom a : kAtoms) {
        if (rabi[a] < 0.0) throw ContractViolation("rydberg_hamiltonian: negative Rabi frequency");
        if (rabi[a] != 0.0)
            h.add_local_coupling(a, AtomLevel::R, AtomLevel::G1, 0.5 * rabi[a]);
        if (detuning[a] != 0.0) h.add_local(a, AtomLevel::R, AtomLevel::R, detuning[a]);
    }
    if (blockade != 0.0) {
        const int rr = joint_index(AtomLevel::R, AtomLevel::R);
        h.matrix(rr, rr) += blockade;
    }
    return h;
}

/// Raman coupling |0> <-> |1>.  <0|H|1> = (rabi/2) e^{i phase}, so a pulse of
/// area pi/2 at phase 0 takes |1> to (|1> - i|0>)/sqrt(2).
inline Hamiltonian ground_hamiltonian(const PerAtom<double>& rabi,
                                      const PerAtom<double>& phase) {
    Hamiltonian h;
    for (Atom a : kAtoms) {
        if (rabi[a] < 0.0) throw ContractViolation("ground_hamiltonian: negative Rabi frequency");
        if (rabi[a] != 0.0)
            h.add_local_coupling(a, AtomLevel::G0, AtomLevel::G1,
                                 0.5 * rabi[a] * std::polar(1.0, phase[a]));
    }
    return h;
}

/// Diagonal shift of one atom's level, e.g. a light shift on |0>.
inline Hamiltonian level_shift(Atom atom, AtomLevel level, double shift) {
    Hamiltonian h;
    h.add_local(atom, level, level, shift);
    return h;
}

namespace detail {
// A lost atom is parked outside the interaction region: the partner evolves
// under the block of h in which the lost atom sits in |0>, replicated on every
// level of the lost atom so its amplitudes are left alone.
inline JointMatrix restrict_to_present(const JointMatrix& h, const PerAtom<bool>& lost) {
    if (!lost.control() && !lost.target()) return h;
    JointMatrix out = JointMatrix::Zero();
    if (lost.control() && lost.target()) return out;
    const Atom kept = lost.control() ? Atom::Target : Atom::Control;
    const Atom gone = partner(kept);
    auto idx = [&](AtomLevel gone_level, AtomLevel kept_level) {
        return gone == Atom::Control ? joint_index(gone_level, kept_level)
                                     : joint_index(kept_level, gone_level);
    };
    for (AtomLevel g : kLevels)
        for (AtomLevel r : kLevels)
            for (AtomLevel c : kLevels)
                out(idx(g, r), idx(g, c)) = h(idx(AtomLevel::G0, r), idx(AtomLevel::G0, c));
    return out;
}
}  // namespace detail

/// Unitary propagator exp(-i h t) from the eigendecomposition of h.
class Propagator {
  public:
    Propagator(const Hamiltonian& h, double t, const PerAtom<bool>& lost = {}) {
        if (!h.is_hermitian())
            throw ContractViolation("evolve: Hamiltonian is not Hermitian");
        if (!(t >= 0.0)) throw ContractViolation("evolve: negative duration");
        const JointMatrix m = detail::restrict_to_present(h.matrix, lost);
        if (m.isZero(0.0) || t == 0.0) {
            unitary_.setIdentity();
            return;
        }
        Eigen::SelfAdjointEigenSolver<JointMatrix> eig(m);
        if (eig.info() != Eigen::Success)
            throw ContractViolation("evolve: eigendecomposition failed");
        Eigen::Matrix<Complex, kJointDim, 1> phases;
        for (int k = 0; k < kJointDim; ++k)
            phases[k] = std::polar(1.0, -eig.eigenvalues()[k] * t);
        unitary_ = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
    }

    const JointMatrix& matrix() const { return unitary_; }

    TwoAtomState apply(TwoAtomState s) const {
        s.amps = unitary_ * s.amps;
        return s;
    }

  private:
    JointMatrix unitary_;
};

inline TwoAtomState evolve(const TwoAtomState& state, const Hamiltonian& h, double t) {
    return Propagator(h, t, state.lost).apply(state);
}

/// Which hyperfine level the state-selective push-out removes from each atom.
/// Blowing away |1> on an atom makes "present" certify |0> and vice versa.
struct ReadoutMode {
    PerAtom<AtomLevel> removed{AtomLevel::G1, AtomLevel::G1};

    static constexpr ReadoutMode remove_one() { return {}; }
    static constexpr ReadoutMode remove_zero() {
        return ReadoutMode{PerAtom<AtomLevel>{AtomLevel::G0, AtomLevel::G0}};
    }
    /// Setting in which "both present" certifies the computational outcome
    /// (control_bit, target_bit).
    static constexpr ReadoutMode certifying(int control_bit, int target_bit) {
        auto removed_for = [](int bit) { return bit == 0 ? AtomLevel::G1 : AtomLevel::G0; };
        return ReadoutMode{PerAtom<AtomLevel>{removed_for(control_bit), removed_for(target_bit)}};
    }

    AtomLevel retained(Atom a) const {
        return removed[a] == AtomLevel::G1 ? AtomLevel::G0 : AtomLevel::G1;
    }

    friend constexpr bool operator==(const ReadoutMode&, const ReadoutMode&) = default;
};

struct ReadoutOutcome {
    PerAtom<bool> present{false, false};

    /// 0..3 as 2 * control_present + target_present.
    int code() const { return 2 * int(present.control()) + int(present.target()); }
    friend constexpr bool operator==(const ReadoutOutcome&, const ReadoutOutcome&) = default;
};

/// Born probabilities of the four presence patterns, indexed by
/// ReadoutOutcome::code().  Rydberg population and lost atoms read absent.
inline std::array<double, 4> readout_probabilities(const TwoAtomState& state,
                                                   const ReadoutMode& mode) {
    std::array<double, 4> p{};
    const double total = state.amps.squaredNorm();
    for (int j = 0; j < kJointDim; ++j) {
        const double w = std::norm(state.amps[j]) / total;
        const bool c = !state.lost.control() &&
                       level_of(j, Atom::Control) == mode.retained(Atom::Control);
        const bool t = !state.lost.target() &&
                       level_of(j, Atom::Target) == mode.retained(Atom::Target);
        p[2 * int(c) + int(t)] += w;
    }
    return p;
}

inline ReadoutOutcome measure(const TwoAtomState& state, const ReadoutMode& mode, Rng& rng) {
    const auto p = readout_probabilities(state, mode);
    const double u = uniform01(rng);
    double acc = 0.0;
    int code = 3;
    for (int k = 0; k < 4; ++k) {
        acc += p[k];
        if (u < acc) {
            code = k;
            break;
        }
    }
    // Rounding can leave acc slightly below 1; fall back to the last nonzero
    // outcome so a zero-probability pattern is never reported.
    if (acc <= u) {
        for (int k = 3; k >= 0; --k)
            if (p[k] > 0.0) {
                code = k;
                break;
            }
    }
    ReadoutOutcome out;
    out.present.control() = (code & 2) != 0;
    out.present.target() = (code & 1) != 0;
    return out;
}

}  // namespace rydcnot
