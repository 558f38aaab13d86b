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
#include <cstdint>
#include <functional>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace rydcnot {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace constants {
inline constexpr double kBoltzmann = 1.380649e-23;         // J/K
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg
inline constexpr double kRb87Mass = 86.909180527 * kAtomicMassUnit;
}  // namespace constants

// Frequencies are angular throughout; this converts an ordinary frequency.
constexpr double angular(double hz) { return kTwoPi * hz; }

/// Index of an atom within the pair.  The control atom is the first tensor
/// factor of the joint basis.
enum class Atom : std::uint8_t { Control = 0, Target = 1 };

inline constexpr std::array<Atom, 2> kAtoms{Atom::Control, Atom::Target};

constexpr std::size_t index_of(Atom a) { return static_cast<std::size_t>(a); }
constexpr Atom partner(Atom a) {
    return a == Atom::Control ? Atom::Target : Atom::Control;
}

/// A value per atom, indexed by Atom.
template <typename T>
struct PerAtom {
    std::array<T, 2> values{};

    constexpr PerAtom() = default;
    constexpr PerAtom(T control, T target) : values{control, target} {}

    constexpr T& operator[](Atom a) { return values[index_of(a)]; }
    constexpr const T& operator[](Atom a) const { return values[index_of(a)]; }
    constexpr T& control() { return values[0]; }
    constexpr const T& control() const { return values[0]; }
    constexpr T& target() { return values[1]; }
    constexpr const T& target() const { return values[1]; }

    friend constexpr bool operator==(const PerAtom&, const PerAtom&) = default;
};

// Error types.  Everything derives from std::runtime_error or
// std::logic_error so callers can catch broadly.

/// A documented precondition of a numerical routine was violated.
class ContractViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// An argument lies outside the domain of an analytic formula.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

class SamplingError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class CalibrationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Non-fatal diagnostics (clamped corrections, unphysical inputs) go through a
// process-wide handler.  The default writes to stderr.
using WarningHandler = std::function<void(std::string_view)>;

namespace detail {
inline WarningHandler& warning_handler() {
    static WarningHandler handler = [](std::string_view msg) {
        std::cerr << "warning: " << msg << '\n';
    };
    return handler;
}
}  // namespace detail

/// Replaces the warning handler and returns the previous one.
inline WarningHandler set_warning_handler(WarningHandler handler) {
    return std::exchange(detail::warning_handler(), std::move(handler));
}

inline void warn(std::string_view msg) {
    if (detail::warning_handler()) detail::warning_handler()(msg);
}

}  // namespace rydcnot
