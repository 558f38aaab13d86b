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
#include <string>

#include "rydcnot/common.hpp"

namespace rydcnot {

/// Laser and atomic constants of the two-atom setup.  Frequencies are
/// angular (rad/s), times in s, lengths in m.
struct PhysicalParams {
    double omega_ryd = angular(0.81e6);   // two-photon Rydberg Rabi frequency
    double omega_g = kPi / 900e-9;        // ground Raman Rabi, 900 ns pi time
    double omega_10 = angular(6.83e9);    // qubit splitting
    double tau_ryd = 300e-6;              // 97d5/2 radiative lifetime
    double omega_780 = angular(118e6);    // one-photon Rabi, 780 nm leg
    double omega_480 = angular(39e6);     // one-photon Rabi, 480 nm leg
    double delta_f2 = angular(-2e9);      // intermediate detuning from f=2
    double lambda_780 = 780e-9;
    double lambda_480 = 480e-9;
    double omega_ac = angular(0.125e6);   // analysis-pulse Stark phase rate
    double mass = constants::kRb87Mass;
    double t24 = 2.2e-6;                  // Rydberg wait between pulses 2 and 4
    double crosstalk_ratio = 0.02;        // neighbour-site Rabi fraction
    // Rydberg light differentially shifts |0> of the driven atom; see
    // light_shift_per_area().
    bool light_shift = true;

    double delta_f1() const { return delta_f2 - omega_10; }

    /// Effective wavenumber of the counter-propagating two-photon excitation.
    double k_eff() const { return kTwoPi * (1.0 / lambda_480 - 1.0 / lambda_780); }

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw ConfigError(std::string("physics: ") + name + " must be positive");
        };
        positive(omega_ryd, "omega_ryd");
        positive(omega_g, "omega_g");
        positive(omega_10, "omega_10");
        positive(tau_ryd, "tau_ryd");
        positive(omega_780, "omega_780");
        positive(omega_480, "omega_480");
        positive(lambda_780, "lambda_780");
        positive(lambda_480, "lambda_480");
        positive(omega_ac, "omega_ac");
        positive(mass, "mass");
        if (!(t24 >= 0.0)) throw ConfigError("physics: t24 must be non-negative");
        if (!(crosstalk_ratio >= 0.0 && crosstalk_ratio <= 1.0))
            throw ConfigError("physics: crosstalk_ratio must lie in [0, 1]");
        if (!std::isfinite(delta_f2)) throw ConfigError("physics: delta_f2 must be finite");
    }
};

enum class Transition { Ground, Rydberg };

/// One square pulse.  A pulse with zero area is a pure wait of `pre_gap`.
struct PulseSpec {
    Transition transition = Transition::Ground;
    PerAtom<bool> targets{false, false};
    double area = 0.0;                   // rad
    PerAtom<double> phase{0.0, 0.0};     // rad
    double pre_gap = 0.0;                // s of free evolution before the pulse
    double crosstalk = 0.0;              // Rabi fraction leaking onto untargeted atom
    std::string label;

    bool doppler_sensitive() const { return transition == Transition::Rydberg; }

    double rabi(const PhysicalParams& p) const {
        return transition == Transition::Rydberg ? p.omega_ryd : p.omega_g;
    }

    double duration(const PhysicalParams& p) const { return area / rabi(p); }

    /// Relative Rabi amplitude seen by each atom.
    PerAtom<double> drive_weights() const {
        PerAtom<double> w;
        for (Atom a : kAtoms) w[a] = targets[a] ? 1.0 : crosstalk;
        return w;
    }
};

}  // namespace rydcnot
