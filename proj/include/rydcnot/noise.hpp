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

#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "rydcnot/common.hpp"
#include "rydcnot/params.hpp"
#include "rydcnot/qcore.hpp"
#include "rydcnot/rng.hpp"

/// \file
/// Analytic error formulas and the stochastic channels applied per shot.

namespace rydcnot {

/// Switches for the individual stochastic channels of a shot.
struct NoiseChannels {
    bool background_loss = true;
    bool optical_pumping = true;
    bool spontaneous_emission = true;
    bool doppler_broadening = true;  // Doppler detuning of Rydberg pulses
    bool doppler_dephasing = true;   // stochastic Rydberg phase across the waits
    bool thermal_blockade = true;    // per-shot blockade from sampled separation

    static constexpr NoiseChannels none() {
        return {false, false, false, false, false, false};
    }
    friend constexpr bool operator==(const NoiseChannels&, const NoiseChannels&) = default;
};

struct NoiseConfig {
    double p_bg_single = 0.90;    // per-atom survival over the 0.11 s gap
    double p_loss_before = 0.01;  // per-atom part of that loss occurring before the pulses
    double p_pump_err = 0.01;     // per-atom optical pumping error
    double p_se_total = 0.04;     // two-qubit scattering budget of the CNOT
    double se_reset_to_one = 0.5; // branching of a scattered atom into |1>
    NoiseChannels enabled{};

    static NoiseConfig none() {
        NoiseConfig c;
        c.enabled = NoiseChannels::none();
        return c;
    }

    void validate() const {
        auto prob = [](double v, const char* name) {
            if (!(v >= 0.0 && v <= 1.0))
                throw ConfigError(std::string("noise: ") + name + " must lie in [0, 1]");
        };
        prob(p_bg_single, "p_bg_single");
        prob(p_loss_before, "p_loss_before");
        prob(p_pump_err, "p_pump_err");
        prob(p_se_total, "p_se_total");
        prob(se_reset_to_one, "se_reset_to_one");
        if (p_loss_before > 1.0 - p_bg_single + 1e-15)
            throw ConfigError("noise: p_loss_before exceeds the total loss 1 - p_bg_single");
    }

    /// Two-atom survival probability used by the background correction.
    double background_retention() const {
        return enabled.background_loss ? p_bg_single * p_bg_single : 1.0;
    }
};

/// Intrinsic error of the blockade controlled-phase operation for Rabi
/// frequency `omega`, Rydberg lifetime `tau`, blockade shift `blockade` and
/// qubit splitting `omega_10`.  Infinite tau or blockade are accepted and
/// switch the corresponding mechanism off.
inline double intrinsic_gate_error(double omega, double tau, double blockade,
                                   double omega_10) {
    if (!(omega > 0.0 && tau > 0.0 && blockade > 0.0 && omega_10 > 0.0))
        throw DomainError("intrinsic_gate_error: all arguments must be positive");
    const double o2 = omega * omega;
    const double b2 = blockade * blockade;
    const double w2 = omega_10 * omega_10;
    const double decay = 7.0 * kPi / (4.0 * omega * tau) * (1.0 + o2 / w2 + o2 / (7.0 * b2));
    const double leakage = o2 / (8.0 * b2) + 6.0 * o2 / (8.0 * w2);
    return decay + leakage;
}

inline double doppler_phase(double velocity, double t_gap, const PhysicalParams& p) {
    return p.k_eff() * velocity * t_gap;
}

/// <exp(i phi)> for the Doppler phase averaged over a 1-D Maxwell-Boltzmann
/// velocity distribution.
inline double dephasing_factor(double temperature, double t_gap, const PhysicalParams& p) {
    if (!(temperature >= 0.0) || !(t_gap >= 0.0))
        throw DomainError("dephasing_factor: temperature and gap must be non-negative");
    const double k = p.k_eff();
    const double v2 = constants::kBoltzmann * temperature / p.mass;
    return std::exp(-0.5 * k * k * v2 * t_gap * t_gap);
}

/// Bell fidelity when the stochastic phase is the only error.
inline double max_fidelity_from_dephasing(double factor) {
    if (!(factor >= 0.0 && factor <= 1.0))
        throw DomainError("max_fidelity_from_dephasing: factor must lie in [0, 1]");
    return 0.5 * (1.0 + factor);
}

/// Differential |00>-|11> phase accumulated from the 780 nm light shift over
/// the three Rydberg pulses of the gate.
inline double ac_stark_phase(const PhysicalParams& p) {
    const double d1 = p.delta_f1();
    if (d1 == 0.0) throw DomainError("ac_stark_phase: delta_f1 = 0 is singular");
    return -kTwoPi * (p.omega_780 / p.omega_480) * (p.omega_10 / d1);
}

/// Total Rydberg pulse area of the CNOT summed over both atoms (pi + 2pi + pi).
inline constexpr double kCnotRydbergArea = 4.0 * kPi;

/// Phase acquired by |0> of a driven atom per radian of Rydberg pulse area.
/// Summed over the gate's 4 pi of area it reproduces ac_stark_phase().
inline double light_shift_per_area(const PhysicalParams& p) {
    return ac_stark_phase(p) / kCnotRydbergArea;
}

/// Scattering rate (1/s) of a driven atom, calibrated so the CNOT's Rydberg
/// pulses on both atoms add up to `p_se_total`.
inline double scattering_rate(const PhysicalParams& p, const NoiseConfig& cfg) {
    return cfg.p_se_total * p.omega_ryd / kCnotRydbergArea;
}

inline double spontaneous_emission_prob(const PhysicalParams& p, const PulseSpec& pulse,
                                        const NoiseConfig& cfg) {
    if (pulse.transition != Transition::Rydberg)
        throw ContractViolation("spontaneous_emission_prob: not a Rydberg pulse");
    return scattering_rate(p, cfg) * pulse.duration(p);
}

/// Scattering jump on `atom` with per-pulse probability `p`.  Only
/// population in the laser-coupled levels |1>, |r> can scatter; on a jump
/// the atom's level is sampled, the partner collapses accordingly and the
/// atom is re-pumped into |1> with probability cfg.se_reset_to_one, else
/// |0>.  Without a jump the coupled amplitudes are damped by sqrt(1 - p).
/// Returns whether the jump fired.
inline bool apply_scattering(TwoAtomState& state, Atom atom, double p, const NoiseConfig& cfg,
                             Rng& rng) {
    if (p <= 0.0 || state.lost[atom]) return false;
    const double coupled = state.level_population(atom, AtomLevel::G1) +
                           state.level_population(atom, AtomLevel::R);
    const double total = state.amps.squaredNorm();
    const double u = uniform01(rng);
    if (u < p * coupled / total) {
        const double pick = uniform01(rng) * coupled;
        const AtomLevel from =
            pick < state.level_population(atom, AtomLevel::G1) ? AtomLevel::G1 : AtomLevel::R;
        const AtomLevel to =
            uniform01(rng) < cfg.se_reset_to_one ? AtomLevel::G1 : AtomLevel::G0;
        StateVector next = StateVector::Zero();
        for (AtomLevel other : kLevels) {
            const int src = atom == Atom::Control ? joint_index(from, other)
                                                  : joint_index(other, from);
            const int dst = atom == Atom::Control ? joint_index(to, other)
                                                  : joint_index(other, to);
            next[dst] = state.amps[src];
        }
        state.amps = next / next.norm();
        return true;
    }
    const double damp = std::sqrt(1.0 - p);
    for (int j = 0; j < kJointDim; ++j)
        if (level_of(j, atom) != AtomLevel::G0) state.amps[j] *= damp;
    state.amps /= state.amps.norm();
    return false;
}

/// Flags each present atom lost independently with probability 1 - survival.
inline TwoAtomState apply_losses(TwoAtomState state, double survival, Rng& rng) {
    for (Atom a : kAtoms)
        if (!state.lost[a] && bernoulli(rng, 1.0 - survival)) state.lost[a] = true;
    return state;
}

inline TwoAtomState apply_losses(TwoAtomState state, const NoiseConfig& cfg, Rng& rng) {
    return apply_losses(std::move(state), cfg.p_bg_single, rng);
}

struct ErrorBudget {
    std::vector<std::pair<std::string, double>> contributions;
    double total = 0.0;
};

inline ErrorBudget quadrature_budget(std::vector<std::pair<std::string, double>> contributions) {
    double sum_sq = 0.0;
    for (const auto& [name, c] : contributions) {
        if (!(c >= 0.0 && c <= 1.0))
            throw DomainError("quadrature_budget: contribution '" + name + "' outside [0, 1]");
        sum_sq += c * c;
    }
    return ErrorBudget{std::move(contributions), std::sqrt(sum_sq)};
}

/// The five two-qubit error sources of the gate error budget.
inline ErrorBudget gate_error_budget(double optical_pumping, double atom_loss_before_pulses,
                                     double blockade_error, double spontaneous_emission,
                                     double doppler_broadening) {
    return quadrature_budget({{"optical_pumping", optical_pumping},
                              {"atom_loss_before_pulses", atom_loss_before_pulses},
                              {"blockade_error", blockade_error},
                              {"spontaneous_emission", spontaneous_emission},
                              {"doppler_broadening", doppler_broadening}});
}

}  // namespace rydcnot
