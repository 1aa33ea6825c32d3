#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

#include "penning/constants.hpp"

namespace penning {

/// Experiment parameters, SI units throughout (angular frequencies in rad/s).
struct TrapConfig {
  double b_field = 0.0;            // T
  double omega_z = 0.0;            // rad/s, axial
  double beta2 = 0.0;              // T/m^2, magnetic bottle
  double wall_epsilon = 0.0;       // rotating-wall strength delta
  double omega_wall = 0.0;         // rad/s, wall rotation frequency
  double axial_temperature = 0.0;  // K
  double z0_drive = 0.0;           // m, driven axial amplitude
  double delta_over_omega = 10.0;  // detuning of off-resonant pulses in units of Omega
  int fock_cutoff = 8;

  bool operator==(const TrapConfig&) const = default;
};

/// B = 5.36 T, omega_z/2pi = 200 MHz, beta2 = 1540 T/m^2, wall at twice the
/// magnetron frequency with delta = 0.01, T_z = 300 mK, z0 = 100 um.
TrapConfig representative_config();

/// Throws ConfigError for out-of-range fields and PhysicsDomainError when
/// omega_c^2 <= 2 omega_z^2.
void validate(const TrapConfig& config);

double cyclotron_frequency(double b_field);

struct ModeFrequencies {
  double omega_c = 0.0;
  double omega_c_prime = 0.0;
  double omega_m = 0.0;
  double omega_s = 0.0;
  double omega_a_prime = 0.0;
  double omega_rho_prime_sq = 0.0;  // rad^2/s^2, rotating-frame radial curvature
};

ModeFrequencies derive_frequencies(const TrapConfig& config);

/// Single-particle small-oscillation frequencies in the frame co-rotating with
/// the wall (all positive, rad/s). Includes the wall anisotropy.
struct RotatingFrameFrequencies {
  double cyclotron = 0.0;
  double axial = 0.0;
  double magnetron = 0.0;
};

RotatingFrameFrequencies single_particle_rotating(const TrapConfig& config);

struct Equilibrium {
  double x0 = 0.0;  // m, electron separation
  std::array<Eigen::Vector3d, 2> positions;
  double window_low = 0.0;   // rad/s, small-delta lower bound on omega_wall (omega_m)
  double window_high = 0.0;  // rad/s, small-delta upper bound (3 omega_m)
  double radial_curvature = 0.0;  // rad^2/s^2, omega_rho'^2 - omega_z^2 delta
};

/// Throws PhysicsDomainError "no_radial_confinement" below the window and
/// "separation_axis_not_x" above it.
Equilibrium rotating_wall_equilibrium(const TrapConfig& config);

/// Omega (rad/s) for the configured drive amplitude.
double rabi_frequency(const TrapConfig& config);

/// Axial amplitude (m) that yields the requested Rabi frequency.
double drive_amplitude_for_rabi(const TrapConfig& config, double rabi);

/// Upper bound on the coherence time from thermal axial amplitude fluctuations.
/// Returns +infinity at T_z = 0.
double decoherence_bound(const TrapConfig& config);

enum class ModeSymmetry { cm, stretch };
enum class ModeBranch { cyclotron, axial, magnetron };

std::string to_string(ModeSymmetry s);
std::string to_string(ModeBranch b);

struct NormalMode {
  ModeSymmetry symmetry = ModeSymmetry::cm;
  ModeBranch branch = ModeBranch::cyclotron;
  double frequency = 0.0;  // rad/s, rotating frame, positive
  // Rotating-frame phase-space vector (x1 y1 z1 x2 y2 z2 | velocities), unit norm.
  Eigen::VectorXcd eigenvector;
  // Norm of the opposite-symmetry component relative to the whole vector.
  double cross_block = 0.0;
};

struct ModeSpectrum {
  std::vector<NormalMode> modes;          // 6 entries for two electrons
  Eigen::VectorXcd eigenvalues;           // all 12 eigenvalues, rad/s
  double rotation_frequency = 0.0;        // rad/s, the wall frequency of the frame

  const NormalMode& find(ModeSymmetry s, ModeBranch b) const;
  /// |omega_stretch - omega_cm| for the given branch.
  double splitting(ModeBranch b) const;
};

/// Linearized two-electron dynamics about the rotating-wall equilibrium.
/// Throws PhysicsDomainError "unstable_mode" if any eigenvalue has a real part.
ModeSpectrum normal_modes(const TrapConfig& config);

struct LeakageEntry {
  std::string term;
  double coupling = 0.0;  // rad/s
  double detuning = 0.0;  // rad/s
  double ratio = 0.0;     // (coupling/detuning)^2
};

LeakageEntry make_leakage_entry(std::string term, double coupling, double detuning);

struct LeakageReport {
  std::vector<LeakageEntry> entries;
  double max_ratio = 0.0;
};

/// Audits the couplings dropped by the rotating-wave approximation for a
/// resonant anomaly drive:
///   spin x cm-cyclotron, counter-rotating
///   spin x stretch-cyclotron
///   spin x cm-magnetron
///   spin x stretch-magnetron
LeakageReport leakage_audit(const TrapConfig& config, const ModeSpectrum& spectrum);

struct TimingBudget {
  double t_dec = 0.0;           // s
  double t_meas = 0.0;          // s, 10% of t_dec
  double pulse_budget = 0.0;    // s, 10% of t_meas
  double required_rabi = 0.0;   // rad/s
  double required_z0 = 0.0;     // m
};

TimingBudget timing_budget(const TrapConfig& config);

}  // namespace penning
