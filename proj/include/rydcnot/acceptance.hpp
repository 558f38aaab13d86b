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

#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rydcnot/analysis.hpp"
#include "rydcnot/config.hpp"
#include "rydcnot/drivers.hpp"

/// \file
/// End-to-end acceptance checks.  Each check prints one PASS/FAIL line with
/// the measured value and its pinned tolerance.

namespace rydcnot::acceptance {

struct Result {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

namespace detail {

inline std::string g(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

inline ExperimentSetup default_setup() {
    return make_setup(RunConfig{});
}

// Fourth-order Runge-Kutta integration of i d/dt psi = H psi.
inline StateVector rk4(const JointMatrix& h, StateVector psi, double t, double dt) {
    const Complex mi(0.0, -1.0);
    const int steps = std::max(1, int(std::ceil(t / dt)));
    const double step = t / steps;
    for (int k = 0; k < steps; ++k) {
        const StateVector k1 = mi * (h * psi);
        const StateVector k2 = mi * (h * (psi + 0.5 * step * k1));
        const StateVector k3 = mi * (h * (psi + 0.5 * step * k2));
        const StateVector k4 = mi * (h * (psi + step * k3));
        psi += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return psi;
}

inline Hamiltonian random_hamiltonian(Rng& rng, double scale) {
    Hamiltonian h;
    for (int i = 0; i < kJointDim; ++i) {
        h.matrix(i, i) = scale * standard_normal(rng);
        for (int j = i + 1; j < kJointDim; ++j) {
            const Complex z(scale * standard_normal(rng), scale * standard_normal(rng));
            h.matrix(i, j) = z;
            h.matrix(j, i) = std::conj(z);
        }
    }
    return h;
}

struct BellRun {
    PopulationSet pops;
    ParityFit fit;
    FidelityReport report;
};

inline BellRun run_bell(const ExperimentSetup& setup, std::size_t shots, const RunOptions& opts) {
    BellRun r;
    const std::vector<double> gaps = linspace(0.0, kParitySpan, kParityGaps);
    r.pops = bell_experiment(AtomLevel::G1, setup, shots, opts);
    r.fit = fit_parity(parity_scan(gaps, shots, setup, opts), setup.physics.omega_ac);
    r.report = bell_fidelity_report(r.pops.p, r.fit.abs_c1, setup.noise.background_retention());
    return r;
}

}  // namespace detail

inline Result intrinsic_error() {
    const PhysicalParams p;
    const double e = intrinsic_gate_error(p.omega_ryd, p.tau_ryd, angular(5.3e6), p.omega_10);
    return {1, "intrinsic gate error", detail::within(e, 6.5e-3, 0.1e-3),
            "E = " + detail::g(e) + " (target 6.5e-3 +- 0.1e-3)"};
}

inline Result dephasing(const Options& o) {
    const PhysicalParams p;
    const double closed = dephasing_factor(150e-6, 2.2e-6, p);
    Rng rng = make_rng({o.seed, 0xde9aULL});
    double sum = 0.0;
    constexpr int n = 100000;
    for (int i = 0; i < n; ++i) {
        const Vec3 v = sample_velocity(150e-6, p.mass, rng);
        sum += std::cos(doppler_phase(v.z(), 2.2e-6, p));
    }
    const double mc = sum / n;
    const bool ok = detail::within(closed, 0.41, 0.02) && detail::within(mc, 0.41, 0.02) &&
                    detail::within(max_fidelity_from_dephasing(closed), 0.71, 0.01) &&
                    detail::within(max_fidelity_from_dephasing(mc), 0.71, 0.01);
    return {2, "dephasing factor", ok,
            "closed " + detail::g(closed) + ", Monte Carlo " + detail::g(mc) + ", fidelity " +
                detail::g(max_fidelity_from_dephasing(closed)) + " / " +
                detail::g(max_fidelity_from_dephasing(mc)) +
                " (targets 0.41 +- 0.02, 0.71 +- 0.01)"};
}

inline Result improvement_projection(const Options& o) {
    ExperimentSetup s = detail::default_setup();
    s.trap.temperature = 50e-6;
    s.physics.t24 = 1.5e-6;
    const double limit = max_fidelity_from_dephasing(dephasing_factor(50e-6, 1.5e-6, s.physics));
    const auto run = detail::run_bell(s, 10000, {o.seed, o.workers});
    const bool ok = limit >= 0.93 && run.report.background_corrected >= 0.88;
    return {3, "improvement projection at 50 uK, t24 = 1.5 us", ok,
            "dephasing limit " + detail::g(limit) + " (>= 0.93), corrected Bell fidelity " +
                detail::g(run.report.background_corrected) + " (>= 0.88)"};
}

inline Result stark_phase() {
    const double xi = ac_stark_phase(PhysicalParams{});
    return {4, "ac Stark phase", detail::within(xi, 14.69, 0.05),
            "xi = " + detail::g(xi, 6) + " rad (target 14.69 +- 0.05)"};
}

inline Result budgets() {
    const double a = gate_error_budget(0.02, 0.02, 0.01, 0.04, 0.04).total;
    const double b = gate_error_budget(0.1, 0.09, 0.01, 0.04, 0.04).total;
    return {5, "quadrature budgets", detail::within(a, 0.064, 5e-4) && detail::within(b, 0.147, 5e-4),
            "totals " + detail::g(a) + " and " + detail::g(b) + " (targets 0.064, 0.147 +- 5e-4)"};
}

inline Result vdw_ratio() {
    const BlockadeModel m{1.0, 8.7e-6};
    const double r = m.blockade(8.7e-6) / m.blockade(10e-6);
    return {6, "van der Waals ratio", detail::within(r, 2.31, 0.01),
            "B(8.7 um)/B(10 um) = " + detail::g(r) + " (target 2.31 +- 0.01)"};
}

inline Result thermal_average(const Options& o) {
    const TrapConfig trap;
    const PhysicalParams p;
    constexpr std::size_t n = 1000000;
    const BlockadeModel m = calibrate_blockade(trap, angular(5.3e6), n, p, o.seed);
    Rng rng = make_rng({o.seed, 0x7e57ULL});
    const SeparationDistribution d = separation_distribution(trap, n, rng);
    const double e = thermal_average_error(m, d.separations, p);
    return {7, "thermal average after calibration", detail::within(e, 6.5e-3, 1.0e-3),
            "b0/2pi = " + detail::g(m.b0 / kTwoPi / 1e6) + " MHz, <E> on an independent sample = " +
                detail::g(e) + " (target 6.5e-3 +- 1.0e-3)"};
}

inline Result correction_arithmetic() {
    ProbabilityTable measured{{{0.08, 0.93, 0.0, 0.0},
                              {0.88, 0.02, 0.02, 0.02},
                              {0.0, 0.0, 0.90, 0.05},
                              {0.02, 0.05, 0.07, 0.94}}};
    const double f = truth_table_fidelity(measured, cnot_ideal());
    const double bg = correct_background(0.74, 0.81);
    const double tr = correct_trace(bg, 0.99);
    const double ent = correct_background(0.58, 0.81);
    const bool ok = detail::within(f, 0.9125, 1e-4) && detail::within(bg, 0.914, 5e-4) &&
                    detail::within(tr, 0.923, 5e-4) && detail::within(ent, 0.716, 5e-4);
    return {8, "truth-table and correction arithmetic", ok,
            "F = " + detail::g(f, 6) + " (0.9125 +- 1e-4), 0.74/0.81 = " + detail::g(bg) +
                ", /0.99 = " + detail::g(tr) + ", 0.58/0.81 = " + detail::g(ent) +
                " (0.914, 0.923, 0.716 +- 5e-4)"};
}

inline Result model_prediction(const Options& o) {
    const ExperimentSetup s = detail::default_setup();
    const auto run = detail::run_bell(s, 10000, {o.seed, o.workers});
    const double f = run.report.background_corrected;
    return {9, "end-to-end Bell fidelity at 175 uK", f >= 0.60 && f <= 0.72,
            "background-corrected F = " + detail::g(f) + " (raw " + detail::g(run.report.raw) +
                ", |C1| = " + detail::g(run.fit.abs_c1) + "; band [0.60, 0.72])"};
}

inline Result parity_pipeline(const Options& o) {
    std::ostringstream msg;
    bool ok = true;

    // Frequency from a simulated default-noise scan.
    const ExperimentSetup s = detail::default_setup();
    const RunOptions ropts{o.seed, o.workers};
    const auto curve = parity_scan(linspace(0.0, kParitySpan, kParityGaps), 10000, s, ropts);
    const ParityFit sim = fit_parity(curve, s.physics.omega_ac);
    const double ratio = sim.omega_fit / s.physics.omega_ac;
    ok = ok && detail::within(ratio, 1.0, 0.05);
    msg << "2 Omega_fit / 2 Omega_AC = " << detail::g(ratio);

    // Noiseless synthetic recovery.
    const double truth[4] = {0.02, 0.35, 2.12, angular(0.125e6)};
    const std::vector<double> gaps = linspace(0.0, kParitySpan, 25);
    auto model = [&](double t) {
        return 2.0 * truth[0] - 2.0 * truth[1] * std::cos(2.0 * truth[3] * t + truth[2]);
    };
    ParityCurve exact;
    for (double t : gaps) exact.push_back({t, model(t), 0.0, 0});
    const ParityFit fe = fit_parity(exact, truth[3]);
    const double dev = std::max({std::abs(fe.re_c2 - truth[0]), std::abs(fe.abs_c1 - truth[1]),
                                 std::abs(fe.xi - truth[2]),
                                 std::abs(fe.omega_fit / truth[3] - 1.0)});
    ok = ok && dev <= 1e-6;
    msg << ", noiseless max deviation " << detail::g(dev);

    // Unbiasedness under noise.
    constexpr int trials = 200;
    constexpr double sigma = 0.03;
    Rng rng = make_rng({o.seed, 0xf17ULL});
    double mean[4] = {}, var_fit[4] = {};
    for (int k = 0; k < trials; ++k) {
        ParityCurve c;
        for (double t : gaps) c.push_back({t, model(t) + sigma * standard_normal(rng), sigma, 0});
        const ParityFit f = fit_parity(c, truth[3]);
        double xi = f.xi;
        if (xi - truth[2] > kPi) xi -= kTwoPi;
        if (xi - truth[2] < -kPi) xi += kTwoPi;
        const double est[4] = {f.re_c2, f.abs_c1, xi, f.omega_fit};
        for (int q = 0; q < 4; ++q) {
            mean[q] += est[q] / trials;
            var_fit[q] += f.covariance(q, q) / trials;
        }
    }
    double worst = 0.0;
    for (int q = 0; q < 4; ++q)
        worst = std::max(worst, std::abs(mean[q] - truth[q]) / std::sqrt(var_fit[q] / trials));
    ok = ok && worst <= 3.0;
    msg << ", worst bias " << detail::g(worst, 3) << " sigma";

    // Separable state: no blockade, so the CNOT cannot entangle.
    ExperimentSetup sep = s;
    sep.fixed_blockade = 0.0;
    const auto run = detail::run_bell(sep, 10000, ropts);
    const auto& p = run.pops;
    const double sf = std::sqrt(0.25 * (p.stderr_[0] * p.stderr_[0] + p.stderr_[3] * p.stderr_[3]) +
                                run.fit.covariance(1, 1));
    ok = ok && run.report.raw <= 0.5 + 3.0 * sf;
    msg << ", separable F = " << detail::g(run.report.raw) << " (<= 0.5 + 3 x " << detail::g(sf, 3)
        << ")";
    return {10, "parity pipeline", ok, msg.str()};
}

inline Result numerical_core(const Options& o) {
    std::ostringstream msg;
    bool ok = true;
    Rng rng = make_rng({o.seed, 0xc07eULL});

    double unitarity = 0.0, agreement = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Hamiltonian h = detail::random_hamiltonian(rng, angular(1e6));
        const double t = 1e-6 * (0.1 + uniform01(rng));
        const Propagator u(h, t);
        unitarity = std::max(unitarity,
                             (u.matrix().adjoint() * u.matrix() - JointMatrix::Identity()).cwiseAbs().maxCoeff());
        StateVector psi;
        for (int j = 0; j < kJointDim; ++j) psi[j] = Complex(standard_normal(rng), standard_normal(rng));
        psi.normalize();
        const StateVector a = u.matrix() * psi;
        const StateVector b = detail::rk4(h.matrix, psi, t, 1e-9);
        agreement = std::max(agreement, (a - b).cwiseAbs().maxCoeff());
    }
    ok = ok && unitarity <= 1e-10 && agreement <= 1e-6;
    msg << "unitarity " << detail::g(unitarity, 3) << ", propagator vs RK4 " << detail::g(agreement, 3);

    // Simultaneous pi pulse on both atoms deep in the blockade regime.
    const PhysicalParams p;
    const double b = angular(500e6);
    const Hamiltonian h = rydberg_hamiltonian({p.omega_ryd, p.omega_ryd}, {0.0, 0.0}, b);
    double leak = 0.0;
    TwoAtomState s = computational_state(AtomLevel::G1, AtomLevel::G1);
    const double dt = kPi / p.omega_ryd / 50.0;
    for (int k = 0; k < 100; ++k) {
        s = evolve(s, h, dt);
        leak = std::max(leak, s.population(AtomLevel::R, AtomLevel::R));
    }
    ok = ok && leak < 1e-3;
    msg << ", blockade leakage " << detail::g(leak, 3);

    // Born rule.
    TwoAtomState st;
    for (int j = 0; j < kJointDim; ++j) st.amps[j] = Complex(standard_normal(rng), standard_normal(rng));
    st.amps.normalize();
    double worst = 0.0;
    for (int c = 0; c < 2; ++c)
        for (int t = 0; t < 2; ++t) {
            const ReadoutMode mode = ReadoutMode::certifying(c, t);
            const auto probs = readout_probabilities(st, mode);
            constexpr int n = 20000;
            std::array<int, 4> counts{};
            for (int k = 0; k < n; ++k) ++counts[measure(st, mode, rng).code()];
            for (int q = 0; q < 4; ++q) {
                const double sd = std::sqrt(probs[q] * (1.0 - probs[q]) / n);
                const double z = sd > 0 ? std::abs(counts[q] / double(n) - probs[q]) / sd
                                        : (counts[q] == 0 ? 0.0 : INFINITY);
                worst = std::max(worst, z);
            }
        }
    ok = ok && worst <= 3.0;
    msg << ", Born rule worst " << detail::g(worst, 3) << " sigma";
    return {11, "numerical core", ok, msg.str()};
}

inline Result determinism(const Options& o) {
    RunConfig cfg;
    cfg.run.seed = o.seed + 1;
    cfg.run.shots = 2000;
    const ExperimentSetup s = make_setup(cfg);
    std::string reference;
    bool ok = true;
    for (unsigned w : {1u, 4u, 8u}) {
        cfg.run.workers = w;
        std::string blob;
        using Driver = DriverOutput (*)(const RunConfig&, const ExperimentSetup&);
        for (Driver driver : {Driver(&parity), Driver(&truth_tables)})
            for (const auto& [name, table] : driver(cfg, s).files) blob += name + "\n" + table.str();
        if (w == 1)
            reference = blob;
        else
            ok = ok && blob == reference;
    }
    return {12, "determinism across worker counts", ok,
            ok ? "parity and truth-table CSVs byte-identical for 1, 4, 8 workers"
               : "CSV output differs between worker counts"};
}

inline std::string format(const Result& r) {
    char head[96];
    std::snprintf(head, sizeof head, "[%s] %2d %s: ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str());
    char tail[32];
    std::snprintf(tail, sizeof tail, " (%.1f s)\n", r.seconds);
    return head + r.detail + tail;
}

/// Every check in order, timed.
inline std::vector<Result> run_all(const Options& o, std::ostream* live = nullptr) {
    const std::vector<std::function<Result()>> checks{
        [] { return intrinsic_error(); },
        [&] { return dephasing(o); },
        [&] { return improvement_projection(o); },
        [] { return stark_phase(); },
        [] { return budgets(); },
        [] { return vdw_ratio(); },
        [&] { return thermal_average(o); },
        [] { return correction_arithmetic(); },
        [&] { return model_prediction(o); },
        [&] { return parity_pipeline(o); },
        [&] { return numerical_core(o); },
        [&] { return determinism(o); },
    };
    std::vector<Result> results;
    for (const auto& check : checks) {
        const auto t0 = std::chrono::steady_clock::now();
        Result r;
        try {
            r = check();
        } catch (const std::exception& e) {
            r.id = int(results.size()) + 1;
            r.name = "check " + std::to_string(r.id);
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (live) *live << format(r) << std::flush;
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace rydcnot::acceptance
