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

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "rydcnot/experiment.hpp"
#include "rydcnot/thermal.hpp"

/// \file
/// Run configuration in a flat sectioned text format:
///
///     # comment
///     [physics]
///     omega_ryd = 5089380.098815465   # rad/s
///
/// Every key has a default.  Unknown sections or keys, malformed values and
/// duplicate keys are errors.  dump() writes every field with enough digits
/// to reload bit-identically.

namespace rydcnot {

/// How the van der Waals reference shift b0 is obtained.
struct BlockadeSection {
    double target_mean = angular(5.3e6);     // rad/s, averaged shift to reproduce
    double calibration_temperature = 175e-6; // K, trap temperature of the calibration
    std::uint64_t calibration_samples = 100000;
    std::uint64_t calibration_seed = 0;
    double b0 = 0.0;                         // rad/s; > 0 skips calibration
};

struct RunSection {
    std::uint64_t seed = 0;
    std::uint64_t shots = 10000;  // per data point
    std::uint64_t workers = 1;
    std::string out_dir = "out";
};

struct RunConfig {
    PhysicalParams physics{};
    TrapConfig trap{};
    BlockadeSection blockade{};
    NoiseConfig noise{};
    RunSection run{};

    void validate() const {
        physics.validate();
        trap.validate();
        noise.validate();
        if (!(blockade.target_mean > 0.0)) throw ConfigError("blockade: target_mean must be positive");
        if (!(blockade.calibration_temperature >= 0.0 &&
              blockade.calibration_temperature < trap.depth))
            throw ConfigError("blockade: calibration_temperature must lie in [0, depth)");
        if (blockade.calibration_samples < 1000)
            throw ConfigError("blockade: calibration_samples must be at least 1000");
        if (!(blockade.b0 >= 0.0)) throw ConfigError("blockade: b0 must be non-negative");
        if (run.shots < 4) throw ConfigError("run: shots must be at least 4");
        if (run.workers < 1) throw ConfigError("run: workers must be at least 1");
    }
};

namespace detail {

using FieldRef = std::variant<double*, bool*, int*, std::uint64_t*, std::string*>;

struct Field {
    std::string section;
    std::string key;
    FieldRef ref;
    std::string unit;
};

template <class Config>
std::vector<Field> fields_of(Config& c) {
    auto& p = c.physics;
    auto& t = c.trap;
    auto& b = c.blockade;
    auto& n = c.noise;
    auto& r = c.run;
    return {
        {"physics", "omega_ryd", &p.omega_ryd, "rad/s"},
        {"physics", "omega_g", &p.omega_g, "rad/s"},
        {"physics", "omega_10", &p.omega_10, "rad/s"},
        {"physics", "tau_ryd", &p.tau_ryd, "s"},
        {"physics", "omega_780", &p.omega_780, "rad/s"},
        {"physics", "omega_480", &p.omega_480, "rad/s"},
        {"physics", "delta_f2", &p.delta_f2, "rad/s"},
        {"physics", "lambda_780", &p.lambda_780, "m"},
        {"physics", "lambda_480", &p.lambda_480, "m"},
        {"physics", "omega_ac", &p.omega_ac, "rad/s"},
        {"physics", "mass", &p.mass, "kg"},
        {"physics", "t24", &p.t24, "s"},
        {"physics", "crosstalk_ratio", &p.crosstalk_ratio, "1"},
        {"physics", "light_shift", &p.light_shift, "bool"},
        {"trap", "depth", &t.depth, "K"},
        {"trap", "waist", &t.waist, "m"},
        {"trap", "trap_wavelength", &t.trap_wavelength, "m"},
        {"trap", "separation_x", &t.separation_x, "m"},
        {"trap", "temperature", &t.temperature, "K"},
        {"trap", "doppler_axis", &t.doppler_axis, "0=x 1=y 2=z"},
        {"blockade", "target_mean", &b.target_mean, "rad/s"},
        {"blockade", "calibration_temperature", &b.calibration_temperature, "K"},
        {"blockade", "calibration_samples", &b.calibration_samples, "count"},
        {"blockade", "calibration_seed", &b.calibration_seed, ""},
        {"blockade", "b0", &b.b0, "rad/s, 0 = calibrate"},
        {"noise", "p_bg_single", &n.p_bg_single, "1"},
        {"noise", "p_loss_before", &n.p_loss_before, "1"},
        {"noise", "p_pump_err", &n.p_pump_err, "1"},
        {"noise", "p_se_total", &n.p_se_total, "1"},
        {"noise", "se_reset_to_one", &n.se_reset_to_one, "1"},
        {"noise", "background_loss", &n.enabled.background_loss, "bool"},
        {"noise", "optical_pumping", &n.enabled.optical_pumping, "bool"},
        {"noise", "spontaneous_emission", &n.enabled.spontaneous_emission, "bool"},
        {"noise", "doppler_broadening", &n.enabled.doppler_broadening, "bool"},
        {"noise", "doppler_dephasing", &n.enabled.doppler_dephasing, "bool"},
        {"noise", "thermal_blockade", &n.enabled.thermal_blockade, "bool"},
        {"run", "seed", &r.seed, ""},
        {"run", "shots", &r.shots, "per data point"},
        {"run", "workers", &r.workers, ""},
        {"run", "out_dir", &r.out_dir, ""},
    };
}

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& text, const std::string& where) {
    T v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError(where + ": cannot parse '" + text + "'");
    return v;
}

inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace detail

inline RunConfig parse_config(std::istream& in, const std::string& source = "<config>") {
    RunConfig cfg;
    auto fields = detail::fields_of(cfg);
    std::map<std::string, bool> seen;
    std::string section;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = source + ":" + std::to_string(lineno);
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string text = detail::trim(line);
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']') throw ConfigError(where + ": malformed section header");
            section = detail::trim(std::string_view(text).substr(1, text.size() - 2));
            bool known = false;
            for (const auto& f : fields) known = known || f.section == section;
            if (!known) throw ConfigError(where + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        if (section.empty()) throw ConfigError(where + ": key outside a section");
        const std::string key = detail::trim(std::string_view(text).substr(0, eq));
        const std::string value = detail::trim(std::string_view(text).substr(eq + 1));
        const std::string full = section + "." + key;
        auto it = std::find_if(fields.begin(), fields.end(), [&](const detail::Field& f) {
            return f.section == section && f.key == key;
        });
        if (it == fields.end()) throw ConfigError(where + ": unknown key '" + full + "'");
        if (seen[full]) throw ConfigError(where + ": duplicate key '" + full + "'");
        seen[full] = true;
        std::visit(
            [&](auto* ptr) {
                using T = std::remove_pointer_t<decltype(ptr)>;
                if constexpr (std::is_same_v<T, bool>) {
                    if (value == "true")
                        *ptr = true;
                    else if (value == "false")
                        *ptr = false;
                    else
                        throw ConfigError(where + ": expected true or false for '" + full + "'");
                } else if constexpr (std::is_same_v<T, std::string>) {
                    *ptr = value;
                } else {
                    *ptr = detail::parse_number<T>(value, where);
                }
            },
            it->ref);
    }
    cfg.validate();
    return cfg;
}

inline RunConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

/// Writes every field, grouped by section, in a form parse_config() reads
/// back to an identical RunConfig.
inline void dump_config(const RunConfig& cfg, std::ostream& os) {
    RunConfig copy = cfg;
    std::string section;
    for (const auto& f : detail::fields_of(copy)) {
        if (f.section != section) {
            if (!section.empty()) os << '\n';
            section = f.section;
            os << '[' << section << "]\n";
        }
        os << f.key << " = ";
        std::visit(
            [&](auto* ptr) {
                using T = std::remove_pointer_t<decltype(ptr)>;
                if constexpr (std::is_same_v<T, bool>)
                    os << (*ptr ? "true" : "false");
                else if constexpr (std::is_same_v<T, double>)
                    os << detail::format_double(*ptr);
                else
                    os << *ptr;
            },
            f.ref);
        if (!f.unit.empty()) os << "  # " << f.unit;
        os << '\n';
    }
}

inline std::string dump_config(const RunConfig& cfg) {
    std::ostringstream os;
    dump_config(cfg, os);
    return os.str();
}

inline bool operator==(const RunConfig& a, const RunConfig& b) {
    return dump_config(a) == dump_config(b);
}

/// Builds the simulation setup, calibrating b0 against the configured
/// reference temperature unless it is given explicitly.
inline ExperimentSetup make_setup(const RunConfig& cfg) {
    ExperimentSetup s;
    s.physics = cfg.physics;
    s.trap = cfg.trap;
    s.noise = cfg.noise;
    if (cfg.blockade.b0 > 0.0) {
        s.blockade = BlockadeModel{cfg.blockade.b0, cfg.trap.separation_x};
    } else {
        TrapConfig reference = cfg.trap;
        reference.temperature = cfg.blockade.calibration_temperature;
        s.blockade = calibrate_blockade(reference, cfg.blockade.target_mean,
                                        cfg.blockade.calibration_samples, cfg.physics,
                                        cfg.blockade.calibration_seed);
    }
    return s;
}

inline RunOptions run_options(const RunConfig& cfg) {
    return RunOptions{cfg.run.seed, static_cast<unsigned>(cfg.run.workers)};
}

}  // namespace rydcnot
