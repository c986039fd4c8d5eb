#pragma once

#include <complex>
#include <numbers>

namespace lossypdc {

using cd = std::complex<double>;

inline constexpr cd kI{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;

/// CODATA 2018 exact/recommended values, SI units.
namespace constants {
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double epsilon0 = 8.8541878128e-12;   // F/m
inline constexpr double c = 299792458.0;               // m/s
}  // namespace constants

}  // namespace lossypdc
