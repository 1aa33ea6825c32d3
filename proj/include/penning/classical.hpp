#pragma once

#include <Eigen/Dense>

#include <vector>

#include "penning/trap_model.hpp"

namespace penning {

/// One or two electrons, lab frame.
struct ClassicalState {
  std::vector<Eigen::Vector3d> positions;   // m
  std::vector<Eigen::Vector3d> velocities;  // m/s
  double time = 0.0;                        // s
};

struct AxialDrive {
  bool enabled = false;
  double acceleration = 0.0;  // m/s^2, uniform on both electrons
  double frequency = 0.0;     // rad/s
};

/// Everything the equations of motion need, precomputed from a TrapConfig.
struct ClassicalModel {
  double omega_c = 0.0;
  double omega_z = 0.0;
  double wall_epsilon = 0.0;
  double omega_wall = 0.0;
  double coulomb_strength = 0.0;  // e^2 / (4 pi eps0 m), m^3/s^2
  bool coulomb = true;
  AxialDrive drive;
};

ClassicalModel make_model(const TrapConfig& config);

/// Electrons closer than this abort the integration.
inline constexpr double kMinSeparation = 1e-9;  // m

/// Electric accelerations: quadrupole, lab-frame rotating wall, Coulomb, drive.
std::vector<Eigen::Vector3d> electric_accelerations(const ClassicalState& state, const ClassicalModel& model);

/// Total accelerations including the magnetic force -e v x B.
std::vector<Eigen::Vector3d> forces(const ClassicalState& state, const ClassicalModel& model);

enum class RotationRule {
  tangent,     // angle 2 atan(omega_c dt / 2): E x B drift exact
  exact_angle  // angle omega_c dt: gyration phase exact
};

struct IntegratorParams {
  double dt = 0.0;            // s; may be negative to run backwards
  int sample_every = 1;       // steps between stored samples
  RotationRule rotation = RotationRule::tangent;
  double max_cyclotron_phase = 0.05;  // limit on omega_c |dt|
};

/// Length and time scales of the trap units: sqrt(hbar / (m omega_z)) and 1/omega_z.
struct TrapUnits {
  double length = 0.0;
  double time = 0.0;
};
TrapUnits trap_units(double omega_z);

struct Trajectory {
  std::vector<double> time;              // s
  std::vector<ClassicalState> lab;
  // Rotating-frame relative coordinate r1 - r2 in trap units (empty for one electron).
  std::vector<Eigen::Vector3d> stretch;
  std::vector<double> energy;            // J, rotating-frame energy
  TrapUnits units;
};

/// Position of the frame co-rotating with the wall: angle omega_wall * t.
Eigen::Vector3d to_rotating(const Eigen::Vector3d& lab, double omega_wall, double t);

/// Acceleration of each electron as seen in the frame co-rotating with the wall
/// (lab components), i.e. with the Coriolis and centrifugal terms removed.
std::vector<Eigen::Vector3d> rotating_frame_accelerations(const ClassicalState& state, const ClassicalModel& model);

/// Energy in the rotating frame; conserved when the drive is off.
double rotating_frame_energy(const ClassicalState& state, const ClassicalModel& model);

/// One split step: half drift, half electric kick, magnetic rotation, half
/// kick, half drift. Symmetric, so stepping with -dt retraces the path.
void step(ClassicalState& state, const ClassicalModel& model, double dt, RotationRule rule);

/// Fixed-step integration over `duration` (sign of params.dt sets direction).
/// Throws ConfigError when omega_c |dt| exceeds the limit, NumericalAbort on
/// coincident electrons or non-finite state.
Trajectory integrate(const ClassicalState& initial, double duration, const ClassicalModel& model,
                     const IntegratorParams& params);

/// Same physics with omega_c = ratio * omega_z; delta and omega_wall/omega_m
/// are kept, as are the other fields.
TrapConfig scaled_config(const TrapConfig& config, double cyclotron_ratio);

/// Two electrons at the rotating-wall equilibrium, co-rotating, both displaced
/// axially by z_offset. stretch_offset (units of x0) is added to r1 - r2.
ClassicalState equilibrium_state(const TrapConfig& config, double z_offset = 0.0,
                                 const Eigen::Vector3d& stretch_offset = Eigen::Vector3d::Zero());

enum class Excitation { initial_displacement, continuous_drive };

struct StabilityOptions {
  Excitation excitation = Excitation::initial_displacement;
  double drive_detuning = 0.01;  // continuous drive at omega_z (1 + detuning)
  double threshold = 0.5;        // bounded if deviation < threshold (units of x0)
  Eigen::Vector3d stretch_offset = Eigen::Vector3d::Zero();  // units of x0
  double cyclotron_phase_per_step = 0.05;
  int sample_every = 20;
  RotationRule rotation = RotationRule::tangent;
};

struct StabilityReport {
  double x0 = 0.0;                // m
  double max_deviation = 0.0;     // units of x0
  double energy_drift_total = 0.0;       // max |E - E0| / |E0|
  double energy_drift_per_period = 0.0;  // |E_end - E0| / |E0| per axial period
  double axial_periods = 0.0;
  double threshold = 0.0;
  bool bounded = false;
};

struct StabilityRun {
  StabilityReport report;
  Trajectory trajectory;
};

StabilityRun stretch_stability(const TrapConfig& config, double z0_amplitude, double duration,
                               const StabilityOptions& options = {});

}  // namespace penning
