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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rydcnot/common.hpp"
#include "rydcnot/experiment.hpp"

namespace rydcnot {

/// Least-squares fit of y(t) = offset + amplitude * cos(omega t + phase) with
/// amplitude >= 0 and phase in [0, 2 pi).  Parameter order in `covariance`:
/// offset, amplitude, phase, omega.
struct SinusoidFit {
    double offset = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;
    double omega = 0.0;
    Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();
    double residual_rms = 0.0;
    double chi2 = 0.0;
    int iterations = 0;
};

class FitError : public std::runtime_error {
  public:
    FitError(const std::string& what, SinusoidFit best_grid)
        : std::runtime_error(what), best_grid_(std::move(best_grid)) {}
    const SinusoidFit& best_grid() const { return best_grid_; }

  private:
    SinusoidFit best_grid_;
};

inline constexpr int kFitGridPoints = 200;
inline constexpr int kFitMaxIterations = 100;
inline constexpr double kFitRelTol = 1e-8;

namespace detail {

inline double wrap_2pi(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r >= kTwoPi ? 0.0 : r;
}

struct FitData {
    Eigen::VectorXd t, y, w;  // t in scaled units
};

inline double chi2_at(const FitData& d, const Eigen::Vector4d& q) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < d.t.size(); ++i) {
        const double r = d.y[i] - (q[0] + q[1] * std::cos(q[3] * d.t[i] + q[2]));
        s += d.w[i] * r * r;
    }
    return s;
}

// Best linear fit at fixed omega; returns (offset, amplitude, phase, omega).
inline Eigen::Vector4d linear_at(const FitData& d, double omega, double& chi2) {
    const Eigen::Index n = d.t.size();
    Eigen::MatrixXd a(n, 3);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double sw = std::sqrt(d.w[i]);
        a(i, 0) = sw;
        a(i, 1) = sw * std::cos(omega * d.t[i]);
        a(i, 2) = sw * std::sin(omega * d.t[i]);
        b[i] = sw * d.y[i];
    }
    const Eigen::Vector3d x = a.colPivHouseholderQr().solve(b);
    // c cos(wt) + s sin(wt) = A cos(wt + phi) with A cos phi = c, A sin phi = -s.
    Eigen::Vector4d q(x[0], std::hypot(x[1], x[2]), std::atan2(-x[2], x[1]), omega);
    chi2 = chi2_at(d, q);
    return q;
}

inline SinusoidFit to_fit(const FitData& d, Eigen::Vector4d q, double time_scale) {
    if (q[1] < 0.0) {
        q[1] = -q[1];
        q[2] += kPi;
    }
    SinusoidFit f;
    f.offset = q[0];
    f.amplitude = q[1];
    f.phase = wrap_2pi(q[2]);
    f.omega = q[3] * time_scale;
    f.chi2 = chi2_at(d, q);
    double ss = 0.0;
    for (Eigen::Index i = 0; i < d.t.size(); ++i) {
        const double r = d.y[i] - (q[0] + q[1] * std::cos(q[3] * d.t[i] + q[2]));
        ss += r * r;
    }
    f.residual_rms = std::sqrt(ss / double(d.t.size()));
    return f;
}

}  // namespace detail

/// Weighted sinusoid fit.  Frequency is initialised by a grid search over
/// [omega_lo, omega_hi] with the linear parameters solved exactly at each
/// grid point, then all four parameters are refined by Gauss-Newton.
/// `sigma` holds per-point standard errors; non-positive entries are
/// replaced by the smallest positive one (or 1 if there is none).
inline SinusoidFit fit_sinusoid(std::span<const double> t, std::span<const double> y,
                                std::span<const double> sigma, double omega_lo, double omega_hi) {
    const std::size_t n = t.size();
    if (y.size() != n || sigma.size() != n)
        throw ContractViolation("fit_sinusoid: mismatched input lengths");
    if (n < 5) throw ContractViolation("fit_sinusoid: need at least 5 points");
    if (!(omega_lo > 0.0 && omega_hi > omega_lo))
        throw ContractViolation("fit_sinusoid: invalid frequency range");

    double sigma_floor = 0.0;
    for (double s : sigma)
        if (s > 0.0 && (sigma_floor == 0.0 || s < sigma_floor)) sigma_floor = s;
    if (sigma_floor == 0.0) sigma_floor = 1.0;

    // Work in units where the grid centre frequency is 1.
    const double scale = 0.5 * (omega_lo + omega_hi);
    detail::FitData d{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
    for (std::size_t i = 0; i < n; ++i) {
        d.t[i] = t[i] * scale;
        d.y[i] = y[i];
        const double s = sigma[i] > 0.0 ? sigma[i] : sigma_floor;
        d.w[i] = 1.0 / (s * s);
    }

    Eigen::Vector4d best;
    double best_chi2 = INFINITY;
    for (int k = 0; k < kFitGridPoints; ++k) {
        const double omega =
            (omega_lo + (omega_hi - omega_lo) * k / double(kFitGridPoints - 1)) / scale;
        double c2 = 0.0;
        const Eigen::Vector4d q = detail::linear_at(d, omega, c2);
        if (c2 < best_chi2) {
            best_chi2 = c2;
            best = q;
        }
    }
    const SinusoidFit grid_fit = detail::to_fit(d, best, scale);

    Eigen::Vector4d q = best;
    double chi2 = best_chi2;
    Eigen::Matrix4d jtj;
    int iter = 0;
    bool converged = false;
    for (; iter < kFitMaxIterations && !converged; ++iter) {
        jtj.setZero();
        Eigen::Vector4d jtr = Eigen::Vector4d::Zero();
        for (Eigen::Index i = 0; i < d.t.size(); ++i) {
            const double arg = q[3] * d.t[i] + q[2];
            const double c = std::cos(arg), s = std::sin(arg);
            const Eigen::Vector4d g(1.0, c, -q[1] * s, -q[1] * s * d.t[i]);
            const double r = d.y[i] - (q[0] + q[1] * c);
            jtj.noalias() += d.w[i] * g * g.transpose();
            jtr.noalias() += d.w[i] * r * g;
        }
        Eigen::Vector4d step = jtj.ldlt().solve(jtr);
        if (!step.allFinite()) break;
        // Halve the step until chi2 does not increase.
        double trial = detail::chi2_at(d, q + step);
        for (int h = 0; h < 30 && trial > chi2; ++h) {
            step *= 0.5;
            trial = detail::chi2_at(d, q + step);
        }
        q += step;
        const double prev = chi2;
        chi2 = std::min(trial, chi2);
        converged = true;
        for (int k = 0; k < 4; ++k)
            if (std::abs(step[k]) > kFitRelTol * std::max(std::abs(q[k]), 1.0)) converged = false;
        if (prev - chi2 <= kFitRelTol * kFitRelTol * std::max(prev, 1e-300) &&
            step.norm() <= kFitRelTol)
            converged = true;
    }
    if (!converged) throw FitError("fit_sinusoid: Gauss-Newton did not converge", grid_fit);

    SinusoidFit f = detail::to_fit(d, q, scale);
    f.iterations = iter;
    // Covariance in physical units; omega carries the time scale.
    Eigen::Matrix4d cov = jtj.inverse();
    const Eigen::Vector4d unit(1.0, 1.0, 1.0, scale);
    f.covariance = unit.asDiagonal() * cov * unit.asDiagonal();
    return f;
}

/// Coherences recovered from a parity oscillation
/// P(t) = 2 re_c2 - 2 abs_c1 cos(2 omega_fit t + xi).
/// Covariance order: re_c2, abs_c1, xi, omega_fit.
struct ParityFit {
    double re_c2 = 0.0;
    double abs_c1 = 0.0;
    double xi = 0.0;
    double omega_fit = 0.0;
    Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();
    double residual_rms = 0.0;

    double sigma(int k) const { return std::sqrt(covariance(k, k)); }
};

inline constexpr double kParityGridSpan = 0.2;

inline ParityFit parity_from_sinusoid(const SinusoidFit& s) {
    ParityFit f;
    f.re_c2 = 0.5 * s.offset;
    f.abs_c1 = 0.5 * s.amplitude;
    f.xi = detail::wrap_2pi(s.phase - kPi);
    f.omega_fit = 0.5 * s.omega;
    const Eigen::Vector4d jac(0.5, 0.5, 1.0, 0.5);
    f.covariance = jac.asDiagonal() * s.covariance * jac.asDiagonal();
    f.residual_rms = s.residual_rms;
    return f;
}

/// Fits a parity curve; `omega_ac` is the nominal analysis-phase rate and
/// the frequency grid covers +-20% around it.
inline ParityFit fit_parity(const ParityCurve& curve, double omega_ac) {
    if (curve.size() < 8) throw ContractViolation("fit_parity: need at least 8 points");
    std::vector<double> t, y, s;
    for (const auto& pt : curve) {
        t.push_back(pt.gap);
        y.push_back(pt.parity);
        s.push_back(pt.stderr_);
    }
    const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
    if ((*hi - *lo) * 2.0 * omega_ac < kTwoPi)
        throw ContractViolation("fit_parity: gaps must span at least one period");
    const double w = 2.0 * omega_ac;
    return parity_from_sinusoid(
        fit_sinusoid(t, y, s, (1.0 - kParityGridSpan) * w, (1.0 + kParityGridSpan) * w));
}

/// F = (p00 + p11) / 2 + |C1|.  Warns when the inputs are not those of a
/// physical state.
inline double entanglement_fidelity(double p00, double p11, double abs_c1) {
    constexpr double tol = 0.02;
    if (p00 + p11 > 1.0 + tol) warn("entanglement_fidelity: p00 + p11 exceeds 1");
    if (abs_c1 > 0.5 * (p00 + p11) + tol)
        warn("entanglement_fidelity: |C1| exceeds (p00 + p11) / 2");
    return 0.5 * (p00 + p11) + abs_c1;
}

using ProbabilityTable = std::array<std::array<double, 4>, 4>;

/// CNOT that flips the target when the control is |0>.
inline ProbabilityTable cnot_ideal() {
    ProbabilityTable m{};
    m[0][1] = m[1][0] = m[2][2] = m[3][3] = 1.0;
    return m;
}

inline ProbabilityTable identity_table() {
    ProbabilityTable m{};
    for (int k = 0; k < 4; ++k) m[k][k] = 1.0;
    return m;
}

/// Tr(|ideal|^T |measured|) / 4 with element-wise absolute values.
inline double truth_table_fidelity(const ProbabilityTable& measured, const ProbabilityTable& ideal) {
    double tr = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) tr += std::abs(ideal[i][j]) * std::abs(measured[i][j]);
    return 0.25 * tr;
}

inline double truth_table_fidelity(const TruthTable& measured, const ProbabilityTable& ideal) {
    return truth_table_fidelity(measured.prob, ideal);
}

namespace detail {
inline double divide_and_clamp(double value, double retention, const char* who) {
    if (retention == 0.0) throw DomainError(std::string(who) + ": retention is zero");
    if (!(retention > 0.0 && retention <= 1.0))
        throw DomainError(std::string(who) + ": retention outside (0, 1]");
    const double v = value / retention;
    if (v > 1.0 || v < 0.0) {
        warn(std::string(who) + ": corrected value clamped to [0, 1]");
        return std::clamp(v, 0.0, 1.0);
    }
    return v;
}
}  // namespace detail

/// Removes background (collisional) loss by dividing by the two-atom
/// survival probability.
inline double correct_background(double value, double retention) {
    return detail::divide_and_clamp(value, retention, "correct_background");
}

/// Removes trace loss (population outside the computational space).
inline double correct_trace(double value, double trace_retention) {
    return detail::divide_and_clamp(value, trace_retention, "correct_trace");
}

/// Fraction of the computational population left after dividing out
/// background loss, capped at 1.
inline double trace_retention(const std::array<double, 4>& raw_populations,
                              double background_retention) {
    double sum = 0.0;
    for (double p : raw_populations) sum += p;
    const double r = sum / background_retention;
    return std::clamp(r, 1e-12, 1.0);
}

struct FidelityReport {
    double raw = 0.0;
    double background_corrected = 0.0;
    double trace_corrected = 0.0;
    std::array<double, 4> populations{};  // raw, by computational label
    double abs_c1 = 0.0;                  // raw
    double background_retention = 1.0;
    double trace_retention = 1.0;
};

/// Bell-state fidelity from raw populations and the raw parity-fit |C1|.
inline FidelityReport bell_fidelity_report(const std::array<double, 4>& populations,
                                           double abs_c1, double background_retention) {
    FidelityReport r;
    r.populations = populations;
    r.abs_c1 = abs_c1;
    r.background_retention = background_retention;
    r.trace_retention = trace_retention(populations, background_retention);
    r.raw = entanglement_fidelity(populations[0], populations[3], abs_c1);
    r.background_corrected = correct_background(r.raw, background_retention);
    r.trace_corrected = correct_trace(r.background_corrected, r.trace_retention);
    return r;
}

/// Truth-table fidelity with the same corrections; the trace retention is
/// averaged over the four inputs.
inline FidelityReport truth_table_report(const TruthTable& tt, const ProbabilityTable& ideal,
                                         double background_retention) {
    FidelityReport r;
    r.background_retention = background_retention;
    double tr = 0.0;
    for (int in = 0; in < 4; ++in) tr += trace_retention(tt.prob[in], background_retention);
    r.trace_retention = tr / 4.0;
    r.raw = truth_table_fidelity(tt, ideal);
    r.background_corrected = correct_background(r.raw, background_retention);
    r.trace_corrected = correct_trace(r.background_corrected, r.trace_retention);
    return r;
}

/// Rabi flopping summary: pi time and peak-to-peak amplitude of a
/// sinusoid fit to one population column.
struct RabiFit {
    SinusoidFit sinusoid;
    double pi_time = 0.0;        // s
    double peak_to_peak = 0.0;
};

inline RabiFit fit_rabi(std::span<const double> durations, std::span<const double> population,
                        std::span<const double> sigma, double omega_lo, double omega_hi) {
    RabiFit r;
    r.sinusoid = fit_sinusoid(durations, population, sigma, omega_lo, omega_hi);
    r.pi_time = kPi / r.sinusoid.omega;
    r.peak_to_peak = 2.0 * r.sinusoid.amplitude;
    return r;
}

}  // namespace rydcnot
