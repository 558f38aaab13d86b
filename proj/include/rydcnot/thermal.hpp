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
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "rydcnot/common.hpp"
#include "rydcnot/noise.hpp"
#include "rydcnot/params.hpp"
#include "rydcnot/rng.hpp"

/// \file
/// Thermal atoms in Gaussian-beam dipole traps and the van der Waals
/// blockade model.  Coordinates: z along the trap beams, x along the line
/// joining the two traps.

namespace rydcnot {

using Vec3 = Eigen::Vector3d;

struct TrapConfig {
    double depth = 4.5e-3;            // U0 / k_B in K
    double waist = 3.2e-6;
    double trap_wavelength = 1064e-9;
    double separation_x = 8.7e-6;
    double temperature = 175e-6;
    int doppler_axis = 2;             // axis of the Rydberg beams, z by default

    double rayleigh_range() const { return kPi * waist * waist / trap_wavelength; }

    /// Harmonic-approximation position spreads.
    double sigma_radial() const { return 0.5 * waist * std::sqrt(temperature / depth); }
    double sigma_axial() const {
        return rayleigh_range() * std::sqrt(temperature / (2.0 * depth));
    }

    void validate() const {
        if (!(depth > 0.0 && waist > 0.0 && trap_wavelength > 0.0 && separation_x > 0.0))
            throw ConfigError("trap: depth, waist, wavelength and separation must be positive");
        if (!(temperature >= 0.0)) throw ConfigError("trap: temperature must be non-negative");
        if (!(temperature < depth)) throw ConfigError("trap: temperature must be below depth");
        if (doppler_axis < 0 || doppler_axis > 2)
            throw ConfigError("trap: doppler_axis must be 0, 1 or 2");
    }
};

/// Isotropic 1/R^6 blockade shift, b0 at separation r0.
struct BlockadeModel {
    double b0 = angular(5.3e6);
    double r0 = 8.7e-6;

    double blockade(double r) const {
        if (!(r > 0.0)) throw DomainError("BlockadeModel: separation must be positive");
        const double x = r0 / r;
        const double x3 = x * x * x;
        return b0 * x3 * x3;
    }
};

struct ThermalSample {
    PerAtom<Vec3> positions{Vec3::Zero(), Vec3::Zero()};
    PerAtom<Vec3> velocities{Vec3::Zero(), Vec3::Zero()};
    double separation = 0.0;
    double blockade = 0.0;
};

inline Vec3 sample_velocity(double temperature, double mass, Rng& rng) {
    if (!(temperature >= 0.0)) throw DomainError("sample_velocity: negative temperature");
    if (temperature == 0.0) return Vec3::Zero();
    const double sigma = std::sqrt(constants::kBoltzmann * temperature / mass);
    Vec3 v;
    for (int k = 0; k < 3; ++k) v[k] = sigma * standard_normal(rng);
    return v;
}

/// Trap potential above its minimum, in units of k_B T.
inline double trap_energy_over_kt(const TrapConfig& trap, const Vec3& pos) {
    const double zr = trap.rayleigh_range();
    const double w_ratio2 = 1.0 / (1.0 + (pos.z() / zr) * (pos.z() / zr));
    const double wz2 = trap.waist * trap.waist / w_ratio2;
    const double r2 = pos.x() * pos.x() + pos.y() * pos.y();
    return trap.depth / trap.temperature * (1.0 - w_ratio2 * std::exp(-2.0 * r2 / wz2));
}

inline constexpr double kEnvelopeInflation = 1.5;
inline constexpr long kMaxRejections = 1'000'000;

/// Boltzmann-distributed position in the Gaussian-beam trap by rejection
/// against the harmonic Gaussian with each sigma inflated by 1.5.  The
/// far tail where the envelope drops below the target (beyond ~8 axial
/// sigma at typical T/U) is truncated; it holds unbound atoms.
inline Vec3 sample_position(const TrapConfig& trap, Rng& rng) {
    if (!(trap.temperature < trap.depth))
        throw SamplingError("sample_position: temperature must be below the trap depth");
    if (trap.temperature == 0.0) return Vec3::Zero();
    const double sr = kEnvelopeInflation * trap.sigma_radial();
    const double sz = kEnvelopeInflation * trap.sigma_axial();
    const double zr = trap.rayleigh_range();
    const double u_over_kt = trap.depth / trap.temperature;
    for (long attempt = 0; attempt < kMaxRejections; ++attempt) {
        const Vec3 pos{sr * standard_normal(rng), sr * standard_normal(rng),
                       sz * standard_normal(rng)};
        const double harmonic =
            u_over_kt * (2.0 * (pos.x() * pos.x() + pos.y() * pos.y()) /
                             (trap.waist * trap.waist) +
                         (pos.z() / zr) * (pos.z() / zr));
        const double log_ratio = -trap_energy_over_kt(trap, pos) +
                                 harmonic / (kEnvelopeInflation * kEnvelopeInflation);
        if (std::log(uniform01(rng)) < std::min(0.0, log_ratio)) return pos;
    }
    throw SamplingError("sample_position: rejection sampling failed; temperature too close to depth");
}

/// Distance between the atoms; the target trap sits at +separation_x.
inline double atom_separation(const TrapConfig& trap, const Vec3& control, const Vec3& target) {
    Vec3 d = target - control;
    d.x() += trap.separation_x;
    return d.norm();
}

struct Histogram {
    double bin_width = 0.25e-6;
    std::vector<double> density;  // probability per metre

    double bin_center(std::size_t i) const { return (double(i) + 0.5) * bin_width; }

    /// Non-negative samples into a normalized density.  Samples past the
    /// last bin extend the histogram.
    static Histogram from_samples(const std::vector<double>& samples, double bin_width) {
        Histogram h;
        h.bin_width = bin_width;
        for (double s : samples) {
            const auto bin = static_cast<std::size_t>(std::max(0.0, s) / bin_width);
            if (bin >= h.density.size()) h.density.resize(bin + 1, 0.0);
            h.density[bin] += 1.0;
        }
        const double norm = double(samples.size()) * bin_width;
        for (double& d : h.density) d /= norm;
        return h;
    }

    /// Two columns: bin centre in micrometres, probability density in 1/um.
    void write(std::ostream& os) const {
        os << "# bin_center_um probability_density_per_um\n";
        for (std::size_t i = 0; i < density.size(); ++i)
            os << bin_center(i) * 1e6 << ' ' << density[i] * 1e-6 << '\n';
    }
};

struct SeparationDistribution {
    Histogram axial;        // |z1 - z2|
    Histogram full;         // 3-D separation
    double mean_dz = 0.0;   // signed z1 - z2
    double sd_dz = 0.0;
    double mean_separation = 0.0;
    double sd_separation = 0.0;
    std::vector<double> separations;
};

inline SeparationDistribution separation_distribution(const TrapConfig& trap, std::size_t n,
                                                      Rng& rng, double bin_width = 0.25e-6) {
    if (n < 1000) throw ContractViolation("separation_distribution: need at least 1000 pairs");
    std::vector<double> dz(n), adz(n), sep(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 c = sample_position(trap, rng);
        const Vec3 t = sample_position(trap, rng);
        dz[i] = c.z() - t.z();
        adz[i] = std::abs(dz[i]);
        sep[i] = atom_separation(trap, c, t);
    }
    auto moments = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m += x;
        m /= double(v.size());
        double s = 0.0;
        for (double x : v) s += (x - m) * (x - m);
        return std::pair{m, std::sqrt(s / double(v.size() - 1))};
    };
    SeparationDistribution out;
    out.axial = Histogram::from_samples(adz, bin_width);
    out.full = Histogram::from_samples(sep, bin_width);
    std::tie(out.mean_dz, out.sd_dz) = moments(dz);
    std::tie(out.mean_separation, out.sd_separation) = moments(sep);
    out.separations = std::move(sep);
    return out;
}

/// Mean intrinsic gate error over a set of separations.
inline double thermal_average_error(const BlockadeModel& model, const std::vector<double>& separations,
                                    const PhysicalParams& p) {
    double sum = 0.0;
    for (double r : separations)
        sum += intrinsic_gate_error(p.omega_ryd, p.tau_ryd, model.blockade(r), p.omega_10);
    return sum / double(separations.size());
}

inline constexpr double kCalibrationRelTol = 1e-3;

/// Fixes r0 = separation_x and bisects (in log b0) for the b0 whose thermal
/// average of the intrinsic gate error matches the error at `target_mean`.
inline BlockadeModel calibrate_blockade(const TrapConfig& trap, double target_mean,
                                        std::size_t n, const PhysicalParams& p,
                                        std::uint64_t seed = 0) {
    if (!(target_mean > 0.0)) throw DomainError("calibrate_blockade: target must be positive");
    std::vector<double> seps;
    seps.reserve(n);
    Rng rng = make_rng({seed, 0xb10cadeULL});
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 c = sample_position(trap, rng);
        const Vec3 t = sample_position(trap, rng);
        seps.push_back(atom_separation(trap, c, t));
    }
    const double goal = intrinsic_gate_error(p.omega_ryd, p.tau_ryd, target_mean, p.omega_10);
    auto excess = [&](double b0) {
        return thermal_average_error(BlockadeModel{b0, trap.separation_x}, seps, p) - goal;
    };
    double lo = target_mean * 1e-3;
    double hi = target_mean * 1e6;
    if (!(excess(lo) > 0.0 && excess(hi) < 0.0))
        throw CalibrationError("calibrate_blockade: root not bracketed");
    while (hi / lo - 1.0 > kCalibrationRelTol) {
        const double mid = std::sqrt(lo * hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    return BlockadeModel{std::sqrt(lo * hi), trap.separation_x};
}

/// Leading-order population of |rr> under simultaneous drive.
inline double double_excitation_prob(double omega, double blockade) {
    if (!(blockade > 0.0)) throw DomainError("double_excitation_prob: blockade must be positive");
    return omega * omega / (2.0 * blockade * blockade);
}

inline ThermalSample draw_shot_sample(const TrapConfig& trap, const BlockadeModel& model,
                                      double mass, Rng& rng) {
    ThermalSample s;
    for (Atom a : kAtoms) s.positions[a] = sample_position(trap, rng);
    for (Atom a : kAtoms) s.velocities[a] = sample_velocity(trap.temperature, mass, rng);
    s.separation = atom_separation(trap, s.positions.control(), s.positions.target());
    s.blockade = model.blockade(s.separation);
    return s;
}

}  // namespace rydcnot
