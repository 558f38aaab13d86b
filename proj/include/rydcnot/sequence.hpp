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
#include <span>
#include <vector>

#include "rydcnot/noise.hpp"
#include "rydcnot/params.hpp"
#include "rydcnot/qcore.hpp"

/// \file
/// Pulse sequences of the blockade CNOT and its diagnostics.

namespace rydcnot {

using Sequence = std::vector<PulseSpec>;

namespace detail {
inline PulseSpec make_pulse(Transition tr, Atom atom, double area, double phase,
                            double pre_gap, const char* label) {
    PulseSpec p;
    p.transition = tr;
    p.targets[atom] = true;
    p.area = area;
    p.phase[atom] = phase;
    p.pre_gap = pre_gap;
    p.label = label;
    return p;
}

inline double wrap_phase(double phi) {
    double w = std::fmod(phi, kTwoPi);
    return w < 0.0 ? w + kTwoPi : w;
}
}  // namespace detail

/// Phase of the closing target pi/2 pulse: pi relative to the opening one,
/// plus the calibration that cancels the light shift the target's |0>
/// picks up during its 2 pi Rydberg pulse.
inline double cnot_closing_phase(const PhysicalParams& p) {
    const double shift = p.light_shift ? light_shift_per_area(p) * kTwoPi : 0.0;
    return detail::wrap_phase(kPi - shift);
}

/// H-Cz CNOT: ground pi/2 on the target, Rydberg pi / 2 pi / pi on
/// control / target / control, ground pi/2 on the target.  The t24 wait is
/// split evenly before and after the target's 2 pi pulse.  With this phase
/// convention the control in |0> flips the target.
inline Sequence cnot_sequence(const PhysicalParams& p) {
    using enum Transition;
    const double half_wait = 0.5 * p.t24;
    return {
        detail::make_pulse(Ground, Atom::Target, kPi / 2, 0.0, 0.0, "1:target pi/2"),
        detail::make_pulse(Rydberg, Atom::Control, kPi, 0.0, 0.0, "2:control pi"),
        detail::make_pulse(Rydberg, Atom::Target, kTwoPi, 0.0, half_wait, "3:target 2pi"),
        detail::make_pulse(Rydberg, Atom::Control, kPi, 0.0, half_wait, "4:control pi"),
        detail::make_pulse(Ground, Atom::Target, kPi / 2, cnot_closing_phase(p), 0.0,
                           "5:target pi/2"),
    };
}

/// Phase of the control's preparation pulse.  At 0 the ideal output
/// (|00> + e^{i xi}|11>)/sqrt(2) has xi = 0 in the absence of light shifts.
inline constexpr double kBellPrepPhase = 0.0;

/// Control pi/2 pulse followed by the CNOT, acting on the input |1>|target>.
/// With target |1> the output is |B1> = (|00>+|11>)/sqrt(2), with target |0>
/// it is |B2> = (|01>+|10>)/sqrt(2), both up to single-qubit phases.
inline Sequence bell_prep_sequence(const PhysicalParams& p, AtomLevel target_input) {
    if (target_input == AtomLevel::R)
        throw ContractViolation("bell_prep_sequence: target input must be a qubit state");
    Sequence seq;
    seq.push_back(detail::make_pulse(Transition::Ground, Atom::Control, kPi / 2, kBellPrepPhase,
                                     0.0, "0:control pi/2"));
    for (auto& pulse : cnot_sequence(p)) seq.push_back(std::move(pulse));
    return seq;
}

/// Wait of `gap` then simultaneous pi/2 pulses on both atoms at phase
/// omega_ac * gap.
inline Sequence parity_analysis_pulses(const PhysicalParams& p, double gap) {
    if (!(gap >= 0.0)) throw ContractViolation("parity_analysis_pulses: negative gap");
    PulseSpec pulse;
    pulse.transition = Transition::Ground;
    pulse.targets = {true, true};
    pulse.area = kPi / 2;
    const double phi = p.omega_ac * gap;
    pulse.phase = {phi, phi};
    pulse.pre_gap = gap;
    pulse.label = "analysis pi/2";
    return {pulse};
}

/// Analysis phase applied by parity_analysis_pulses().
inline double analysis_phase(const PhysicalParams& p, double gap) { return p.omega_ac * gap; }

/// Rabi flopping scan: one sequence per duration, driving `transition` on
/// `atom` with the neighbour seeing crosstalk_ratio of the Rabi frequency.
/// With neighbor_blocked the neighbour is first sent to |r> by a Rydberg pi
/// pulse.
inline std::vector<Sequence> rabi_scan(const PhysicalParams& p, Transition transition, Atom atom,
                                       std::span<const double> durations,
                                       bool neighbor_blocked) {
    std::vector<Sequence> scans;
    scans.reserve(durations.size());
    for (double t : durations) {
        if (!(t >= 0.0)) throw ContractViolation("rabi_scan: negative duration");
        Sequence seq;
        if (neighbor_blocked)
            seq.push_back(detail::make_pulse(Transition::Rydberg, partner(atom), kPi, 0.0, 0.0,
                                             "neighbor pi"));
        PulseSpec scan;
        scan.transition = transition;
        scan.targets[atom] = true;
        scan.crosstalk = p.crosstalk_ratio;
        scan.label = "scan";
        scan.area = t * scan.rabi(p);
        seq.push_back(scan);
        scans.push_back(std::move(seq));
    }
    return scans;
}

/// Sum of Rydberg pulse areas over targeted atoms.
inline double total_rydberg_area(std::span<const PulseSpec> seq) {
    double area = 0.0;
    for (const auto& pulse : seq)
        if (pulse.transition == Transition::Rydberg)
            area += pulse.area * (int(pulse.targets.control()) + int(pulse.targets.target()));
    return area;
}

}  // namespace rydcnot
