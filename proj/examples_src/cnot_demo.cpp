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


// Runs the CNOT truth table and a Bell-state preparation with the default
// noise model and prints the fidelities.

#include <cstdio>

#include "rydcnot/analysis.hpp"
#include "rydcnot/config.hpp"

int main() {
    using namespace rydcnot;
    RunConfig cfg;
    cfg.run.shots = 4000;
    const ExperimentSetup setup = make_setup(cfg);
    std::printf("calibrated b0/2pi = %.1f MHz\n", setup.blockade.b0 / kTwoPi / 1e6);

    const TruthTable tt = cnot_truth_table(setup, cfg.run.shots, run_options(cfg));
    std::printf("input  P(00)  P(01)  P(10)  P(11)  loss\n");
    for (int in = 0; in < 4; ++in)
        std::printf("%s     %.3f  %.3f  %.3f  %.3f  %.3f\n", label_name(in), tt.prob[in][0],
                    tt.prob[in][1], tt.prob[in][2], tt.prob[in][3], tt.loss[in]);
    const FidelityReport f = truth_table_report(tt, cnot_ideal(), setup.noise.background_retention());
    std::printf("CNOT fidelity: raw %.3f, background corrected %.3f\n", f.raw, f.background_corrected);

    const PopulationSet b1 = bell_experiment(AtomLevel::G1, setup, cfg.run.shots, run_options(cfg));
    std::printf("B1 populations: %.3f %.3f %.3f %.3f\n", b1.p[0], b1.p[1], b1.p[2], b1.p[3]);
    return 0;
}
