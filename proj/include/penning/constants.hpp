#pragma once

namespace penning {

/// CODATA 2018 recommended values, SI units.
struct PhysicalConstants {
  double elementary_charge = 1.602176634e-19;     // C (exact)
  double electron_mass = 9.1093837015e-31;        // kg
  double bohr_magneton = 9.2740100783e-24;        // J/T
  double reduced_planck = 1.054571817e-34;        // J s
  double boltzmann = 1.380649e-23;                // J/K (exact)
  double vacuum_permittivity = 8.8541878128e-12;  // F/m
  double g_over_2 = 1.00115965218;
};

inline constexpr PhysicalConstants codata2018{};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

}  // namespace penning
