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

// Shared fixtures for the unit tests.

#include <cmath>

#include "rydcnot/experiment.hpp"

namespace testing_support {

using namespace rydcnot;

/// No noise, atoms at rest, blockade 10^4 times the Rydberg Rabi frequency.
inline ExperimentSetup ideal_setup(double blockade_over_omega = 1e4) {
    ExperimentSetup s;
    s.noise = NoiseConfig::none();
    s.trap.temperature = 0.0;
    s.fixed_blockade = blockade_over_omega * s.physics.omega_ryd;
    return s;
}

/// Final state of one noiseless pass of `seq` from a computational input.
inline TwoAtomState run_ideal(const Sequence& seq, AtomLevel control, AtomLevel target,
                              const ExperimentSetup& s) {
    return run_shot({control, target}, seq, s, ReadoutMode::remove_one(), 0).final_state;
}

/// |<B1|psi>|^2 maximised over single-qubit phases.
inline double bell1_overlap(const TwoAtomState& s) {
    const double a = std::abs(s.amps[joint_index(AtomLevel::G0, AtomLevel::G0)]);
    const double b = std::abs(s.amps[joint_index(AtomLevel::G1, AtomLevel::G1)]);
    return 0.5 * (a + b) * (a + b);
}

}  // namespace testing_support
