#pragma once

#include <numbers>

// Frequencies are angular (rad/s) everywhere inside the library. Config files
// and CLI flags speak linear frequency; convert at the boundary with these.
namespace bswap::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double ghz(double f) { return two_pi * f * 1e9; }
constexpr double mhz(double f) { return two_pi * f * 1e6; }
constexpr double khz(double f) { return two_pi * f * 1e3; }
constexpr double hz(double f) { return two_pi * f; }

constexpr double to_ghz(double w) { return w / two_pi / 1e9; }
constexpr double to_mhz(double w) { return w / two_pi / 1e6; }
constexpr double to_khz(double w) { return w / two_pi / 1e3; }

constexpr double ns(double t) { return t * 1e-9; }
constexpr double us(double t) { return t * 1e-6; }
constexpr double to_ns(double t) { return t * 1e9; }
constexpr double to_us(double t) { return t * 1e6; }

}  // namespace bswap::units
