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

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rydcnot/noise.hpp"
#include "rydcnot/parallel.hpp"
#include "rydcnot/params.hpp"
#include "rydcnot/qcore.hpp"
#include "rydcnot/rng.hpp"
#include "rydcnot/sequence.hpp"
#include "rydcnot/thermal.hpp"

/// \file
/// Shot-level simulation of the experiment and the aggregate measurements
/// built from it.
///
/// Readout: a computational outcome xy is counted only when both atoms are
/// found present in the readout setting that pushes out the complement of
/// x on the control and of y on the target (ReadoutMode::certifying).  A
/// lost atom or leftover Rydberg population can therefore never fake a
/// count, and every population carries the two-atom survival factor, as in
/// the uncorrected experimental data.  Shots of a data point are split
/// evenly over the four settings.

namespace rydcnot {

struct ExperimentSetup {
    PhysicalParams physics{};
    TrapConfig trap{};
    BlockadeModel blockade{};
    NoiseConfig noise{};
    std::optional<double> fixed_blockade{};  // overrides the thermal model
};

/// Master seed, parallelism and the shot budget of one measurement.
struct RunOptions {
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

struct ScatterEvent {
    int pulse = 0;
    Atom atom = Atom::Control;
    friend constexpr bool operator==(const ScatterEvent&, const ScatterEvent&) = default;
};

struct ShotRecord {
    PerAtom<AtomLevel> input{AtomLevel::G1, AtomLevel::G1};
    ThermalSample thermal{};
    double blockade = 0.0;
    PerAtom<bool> mispumped{false, false};
    PerAtom<bool> lost_before_pulses{false, false};
    std::vector<ScatterEvent> se_events;
    PerAtom<bool> lost{false, false};
    ReadoutMode readout{};
    ReadoutOutcome outcome{};
    TwoAtomState final_state{};  // just before the push-out
};

namespace detail {
enum StreamId : std::uint64_t { kThermalStream = 1, kPumpStream, kLossStream, kScatterStream, kReadoutStream };

// exp(i sum_a phase_a |r_a><r_a|) applied to a state.
inline void apply_rydberg_phases(TwoAtomState& s, const PerAtom<double>& phase) {
    for (int j = 0; j < kJointDim; ++j) {
        double total = 0.0;
        for (Atom a : kAtoms)
            if (level_of(j, a) == AtomLevel::R && !s.lost[a]) total += phase[a];
        if (total != 0.0) s.amps[j] *= std::polar(1.0, total);
    }
}
}  // namespace detail

/// One repetition of the experiment: thermal sample, optical pumping,
/// the pulse sequence with Doppler, blockade, light-shift and scattering
/// effects, background loss and the state-selective readout.
///
/// Doppler motion enters twice.  Across the inter-pulse waits each atom's
/// |r> amplitude winds at k_eff v (the stochastic gate phase).  During a
/// Rydberg pulse the driven atom sees the same shift as a detuning, with
/// the laser phase referenced to the pulse centre, so the pulse itself
/// only contributes excitation errors.
inline ShotRecord run_shot(const PerAtom<AtomLevel>& input, std::span<const PulseSpec> seq,
                           const ExperimentSetup& setup, const ReadoutMode& readout,
                           std::uint64_t shot_seed) {
    const PhysicalParams& phys = setup.physics;
    const NoiseConfig& noise = setup.noise;
    const NoiseChannels& on = noise.enabled;

    Rng thermal_rng = make_rng({shot_seed, detail::kThermalStream});
    Rng pump_rng = make_rng({shot_seed, detail::kPumpStream});
    Rng loss_rng = make_rng({shot_seed, detail::kLossStream});
    Rng scatter_rng = make_rng({shot_seed, detail::kScatterStream});
    Rng readout_rng = make_rng({shot_seed, detail::kReadoutStream});

    ShotRecord rec;
    rec.input = input;
    rec.readout = readout;

    const bool moving = on.thermal_blockade || on.doppler_broadening || on.doppler_dephasing;
    if (moving && setup.trap.temperature > 0.0) {
        rec.thermal = draw_shot_sample(setup.trap, setup.blockade, phys.mass, thermal_rng);
    } else {
        rec.thermal.separation = setup.trap.separation_x;
        rec.thermal.blockade = setup.blockade.blockade(setup.trap.separation_x);
    }
    if (setup.fixed_blockade)
        rec.blockade = *setup.fixed_blockade;
    else
        rec.blockade = on.thermal_blockade ? rec.thermal.blockade
                                           : setup.blockade.blockade(setup.trap.separation_x);

    PerAtom<double> doppler{0.0, 0.0};
    for (Atom a : kAtoms)
        doppler[a] = phys.k_eff() * rec.thermal.velocities[a][setup.trap.doppler_axis];
    const PerAtom<double> wait_detuning =
        on.doppler_dephasing ? doppler : PerAtom<double>{0.0, 0.0};

    if (on.optical_pumping)
        for (Atom a : kAtoms) rec.mispumped[a] = bernoulli(pump_rng, noise.p_pump_err);

    TwoAtomState state = computational_state(input.control(), input.target());
    PerAtom<double> loss_draw{1.0, 1.0};
    if (on.background_loss) {
        for (Atom a : kAtoms) loss_draw[a] = uniform01(loss_rng);
        for (Atom a : kAtoms)
            if (loss_draw[a] < noise.p_loss_before) state.lost[a] = rec.lost_before_pulses[a] = true;
    }

    const double scatter_rate = on.spontaneous_emission ? scattering_rate(phys, noise) : 0.0;
    const double shift_per_area = phys.light_shift ? light_shift_per_area(phys) : 0.0;

    for (std::size_t i = 0; i < seq.size(); ++i) {
        const PulseSpec& pulse = seq[i];
        if (pulse.pre_gap > 0.0) {
            const Hamiltonian wait = rydberg_hamiltonian({0.0, 0.0}, wait_detuning, rec.blockade);
            if (!wait.is_zero()) state = evolve(state, wait, pulse.pre_gap);
        }
        if (pulse.area <= 0.0) continue;
        const double duration = pulse.duration(phys);
        const PerAtom<double> weight = pulse.drive_weights();

        if (pulse.transition == Transition::Ground) {
            const Hamiltonian h = ground_hamiltonian(
                {weight.control() * phys.omega_g, weight.target() * phys.omega_g}, pulse.phase);
            state = evolve(state, h, duration);
            continue;
        }

        PerAtom<double> rabi{0.0, 0.0}, detuning{0.0, 0.0};
        Hamiltonian shifts;
        for (Atom a : kAtoms) {
            if (weight[a] == 0.0) continue;
            if (!rec.mispumped[a]) rabi[a] = weight[a] * phys.omega_ryd;
            if (on.doppler_broadening && rabi[a] > 0.0) detuning[a] = doppler[a];
            if (shift_per_area != 0.0)
                shifts += level_shift(a, AtomLevel::G0, shift_per_area * weight[a] * phys.omega_ryd);
        }
        Hamiltonian h = rydberg_hamiltonian(rabi, detuning, rec.blockade);
        h += shifts;
        // Rabi phases are applied as e^{i phi}|r><1| on top of the real coupling.
        for (Atom a : kAtoms)
            if (pulse.phase[a] != 0.0 && rabi[a] > 0.0) {
                h.add_local_coupling(a, AtomLevel::R, AtomLevel::G1,
                                     0.5 * rabi[a] * (std::polar(1.0, pulse.phase[a]) - 1.0));
            }
        const PerAtom<double> frame{0.5 * detuning.control() * duration,
                                    0.5 * detuning.target() * duration};
        detail::apply_rydberg_phases(state, frame);
        state = evolve(state, h, duration);
        detail::apply_rydberg_phases(state, frame);

        if (scatter_rate > 0.0)
            for (Atom a : kAtoms) {
                if (!pulse.targets[a] || rec.mispumped[a]) continue;
                if (apply_scattering(state, a, scatter_rate * duration, noise, scatter_rng))
                    rec.se_events.push_back({static_cast<int>(i), a});
            }
    }

    if (on.background_loss) {
        // Survival past the pulses, conditioned on not being lost before them.
        const double later = (1.0 - noise.p_bg_single - noise.p_loss_before) /
                             (1.0 - noise.p_loss_before);
        for (Atom a : kAtoms)
            if (!state.lost[a] && loss_draw[a] >= noise.p_loss_before &&
                (loss_draw[a] - noise.p_loss_before) / (1.0 - noise.p_loss_before) < later)
                state.lost[a] = true;
    }
    rec.lost = state.lost;
    rec.final_state = state;
    rec.outcome = measure(state, readout, readout_rng);
    return rec;
}

/// Computational label xy as 2x + y.
constexpr int computational_label(int control_bit, int target_bit) {
    return 2 * control_bit + target_bit;
}
inline PerAtom<AtomLevel> label_levels(int label) {
    return {label / 2 ? AtomLevel::G1 : AtomLevel::G0, label % 2 ? AtomLevel::G1 : AtomLevel::G0};
}
inline const char* label_name(int label) {
    static constexpr const char* names[] = {"00", "01", "10", "11"};
    return names[label];
}

enum class ExperimentKind : std::uint64_t { TruthTable = 1, Bell = 2, Parity = 3, Rabi = 4 };

/// Certified computational populations of one data point, from shots split
/// over the four readout settings.
struct PopulationSet {
    std::array<double, 4> p{};       // indexed by computational label
    std::array<double, 4> stderr_{}; // binomial standard errors
    std::array<long, 4> counts{};
    std::array<long, 4> shots{};

    /// Probability of not being certified in any outcome (loss, Rydberg
    /// leftovers).  Can be slightly negative from shot noise.
    double loss() const { return 1.0 - (p[0] + p[1] + p[2] + p[3]); }
};

/// Runs `shots` repetitions of `seq` on `input`, a quarter in each certifying
/// readout setting.  `point` identifies the data point in the seed tree.
inline PopulationSet measure_populations(const PerAtom<AtomLevel>& input,
                                         std::span<const PulseSpec> seq,
                                         const ExperimentSetup& setup, std::size_t shots,
                                         const RunOptions& opts, ExperimentKind kind,
                                         std::uint64_t point) {
    if (shots < 4) throw ContractViolation("measure_populations: need at least one shot per setting");
    PopulationSet out;
    for (int label = 0; label < 4; ++label) {
        const std::size_t n = shots / 4 + (std::size_t(label) < shots % 4 ? 1 : 0);
        const ReadoutMode mode = ReadoutMode::certifying(label / 2, label % 2);
        const auto counts = parallel_count<4>(n, opts.workers, [&](std::size_t i) {
            const std::uint64_t seed = derive_seed(
                {opts.seed, static_cast<std::uint64_t>(kind), point, std::uint64_t(label), i});
            return run_shot(input, seq, setup, mode, seed).outcome.code();
        });
        out.counts[label] = counts[3];
        out.shots[label] = static_cast<long>(n);
        const double p = double(counts[3]) / double(n);
        out.p[label] = p;
        out.stderr_[label] = std::sqrt(p * (1.0 - p) / double(n));
    }
    return out;
}

/// Outcome probabilities over computational inputs (rows) and outputs
/// (columns), both labelled 2 * control + target.
struct TruthTable {
    std::array<std::array<double, 4>, 4> prob{};
    std::array<std::array<double, 4>, 4> stderr_{};
    std::array<std::array<long, 4>, 4> counts{};
    std::array<std::array<long, 4>, 4> shots{};
    std::array<double, 4> loss{};
};

/// Truth table of `seq` over the four computational inputs.
inline TruthTable truth_table(std::span<const PulseSpec> seq, const ExperimentSetup& setup,
                              std::size_t shots_per_input, const RunOptions& opts) {
    TruthTable tt;
    for (int in = 0; in < 4; ++in) {
        const PopulationSet pops = measure_populations(
            label_levels(in), seq, setup, shots_per_input, opts, ExperimentKind::TruthTable,
            std::uint64_t(in));
        tt.prob[in] = pops.p;
        tt.stderr_[in] = pops.stderr_;
        tt.counts[in] = pops.counts;
        tt.shots[in] = pops.shots;
        tt.loss[in] = pops.loss();
    }
    return tt;
}

inline TruthTable cnot_truth_table(const ExperimentSetup& setup, std::size_t shots_per_input,
                                   const RunOptions& opts) {
    const Sequence seq = cnot_sequence(setup.physics);
    return truth_table(seq, setup, shots_per_input, opts);
}

/// Populations after Bell-state preparation from |1>|target_input>.
inline PopulationSet bell_experiment(AtomLevel target_input, const ExperimentSetup& setup,
                                     std::size_t shots, const RunOptions& opts) {
    const Sequence seq = bell_prep_sequence(setup.physics, target_input);
    return measure_populations({AtomLevel::G1, target_input}, seq, setup, shots, opts,
                               ExperimentKind::Bell, std::uint64_t(level_index(target_input)));
}

struct ParityPoint {
    double gap = 0.0;  // s
    double parity = 0.0;
    double stderr_ = 0.0;
    long shots = 0;
};

using ParityCurve = std::vector<ParityPoint>;

/// Parity P00 + P11 - P01 - P10 of |B1> after the analysis pulses, per gap.
inline ParityCurve parity_scan(std::span<const double> gaps, std::size_t shots_per_gap,
                               const ExperimentSetup& setup, const RunOptions& opts) {
    ParityCurve curve;
    curve.reserve(gaps.size());
    for (std::size_t g = 0; g < gaps.size(); ++g) {
        Sequence seq = bell_prep_sequence(setup.physics, AtomLevel::G1);
        for (auto& pulse : parity_analysis_pulses(setup.physics, gaps[g])) seq.push_back(pulse);
        const PopulationSet pops = measure_populations({AtomLevel::G1, AtomLevel::G1}, seq, setup,
                                                       shots_per_gap, opts,
                                                       ExperimentKind::Parity, std::uint64_t(g));
        ParityPoint pt;
        pt.gap = gaps[g];
        pt.parity = pops.p[0] + pops.p[3] - pops.p[1] - pops.p[2];
        double var = 0.0;
        for (int k = 0; k < 4; ++k) var += pops.stderr_[k] * pops.stderr_[k];
        pt.stderr_ = std::sqrt(var);
        pt.shots = pops.shots[0] + pops.shots[1] + pops.shots[2] + pops.shots[3];
        curve.push_back(pt);
    }
    return curve;
}

struct RabiPoint {
    double duration = 0.0;  // s
    double target_population = 0.0;  // of |1> on the scanned atom, uncorrected
    double target_stderr = 0.0;
    double neighbor_population = 0.0;
    double neighbor_stderr = 0.0;
    long shots = 0;
};

/// Flopping curve of a rabi_scan.  Both atoms start in |1>; readout pushes
/// out |0>, so "present" measures |1> population (Rydberg reads absent).
inline std::vector<RabiPoint> rabi_experiment(const std::vector<Sequence>& scans,
                                              std::span<const double> durations, Atom atom,
                                              const ExperimentSetup& setup,
                                              std::size_t shots_per_point,
                                              const RunOptions& opts) {
    if (scans.size() != durations.size())
        throw ContractViolation("rabi_experiment: one scan per duration required");
    std::vector<RabiPoint> curve;
    for (std::size_t d = 0; d < scans.size(); ++d) {
        const auto counts = parallel_count<4>(shots_per_point, opts.workers, [&](std::size_t i) {
            const std::uint64_t seed = derive_seed(
                {opts.seed, static_cast<std::uint64_t>(ExperimentKind::Rabi),
                 std::uint64_t(index_of(atom)), std::uint64_t(d), i});
            return run_shot({AtomLevel::G1, AtomLevel::G1}, scans[d], setup,
                            ReadoutMode::remove_zero(), seed)
                .outcome.code();
        });
        const double n = double(shots_per_point);
        const double control = double(counts[2] + counts[3]) / n;
        const double target = double(counts[1] + counts[3]) / n;
        RabiPoint pt;
        pt.duration = durations[d];
        pt.target_population = atom == Atom::Target ? target : control;
        pt.neighbor_population = atom == Atom::Target ? control : target;
        pt.target_stderr = std::sqrt(pt.target_population * (1.0 - pt.target_population) / n);
        pt.neighbor_stderr =
            std::sqrt(pt.neighbor_population * (1.0 - pt.neighbor_population) / n);
        pt.shots = static_cast<long>(shots_per_point);
        curve.push_back(pt);
    }
    return curve;
}

}  // namespace rydcnot
