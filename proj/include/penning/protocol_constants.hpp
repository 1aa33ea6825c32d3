#pragma once

#include <numbers>

namespace penning::durations {

// Resonant-pulse durations of the composite pi/2 sequences, in units of 1/Omega.
inline constexpr double kPrepareFirst = 1.027;
inline constexpr double kPrepareLast = 1.140;
inline constexpr double kReadoutFirst = 1.425;
inline constexpr double kReadoutLast = 1.538;

// Partial protocol: first resonant pulse, in 1/Omega.
inline constexpr double kPartialFirst = 0.76;

// Off-resonant segment: t = pi * Delta / (6 Omega^2), i.e. (pi/6) * (Delta/Omega) in 1/Omega.
constexpr double off_resonant(double delta_over_omega) {
  return std::numbers::pi * delta_over_omega / 6.0;
}

// Full Rabi cycle of the two-excitation manifold: 2 pi / (sqrt(6) Omega).
inline constexpr double kTwoExcitationCycle = 2.0 * std::numbers::pi / (2.449489742783178098197284);

}  // namespace penning::durations
