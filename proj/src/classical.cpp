#include "penning/classical.hpp"

#include <cmath>
#include <sstream>

#include "penning/errors.hpp"

namespace penning {
namespace {

constexpr const PhysicalConstants& K = codata2018;

Eigen::Vector3d rotate_z(const Eigen::Vector3d& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y(), v.z()};
}

void check_state(const ClassicalState& s) {
  for (std::size_t i = 0; i < s.positions.size(); ++i) {
    if (!s.positions[i].allFinite() || !s.velocities[i].allFinite()) {
      std::ostringstream os;
      os << "non-finite classical state at t = " << s.time << " s";
      throw NumericalAbort(os.str());
    }
  }
  if (s.positions.size() == 2 && (s.positions[0] - s.positions[1]).norm() < kMinSeparation) {
    std::ostringstream os;
    os << "electrons closer than " << kMinSeparation << " m at t = " << s.time << " s";
    throw NumericalAbort(os.str());
  }
}

void check_shape(const ClassicalState& s) {
  const std::size_t n = s.positions.size();
  if ((n != 1 && n != 2) || s.velocities.size() != n) {
    throw std::invalid_argument("classical state must hold one or two electrons");
  }
}

}  // namespace

ClassicalModel make_model(const TrapConfig& config) {
  validate(config);
  ClassicalModel m;
  m.omega_c = cyclotron_frequency(config.b_field);
  m.omega_z = config.omega_z;
  m.wall_epsilon = config.wall_epsilon;
  m.omega_wall = config.omega_wall;
  m.coulomb_strength =
      K.elementary_charge * K.elementary_charge / (4.0 * kPi * K.vacuum_permittivity * K.electron_mass);
  return m;
}

std::vector<Eigen::Vector3d> electric_accelerations(const ClassicalState& s, const ClassicalModel& m) {
  check_shape(s);
  const double wz2 = m.omega_z * m.omega_z;
  const double phase = 2.0 * m.omega_wall * s.time;
  const double c2 = std::cos(phase);
  const double s2 = std::sin(phase);
  std::vector<Eigen::Vector3d> a(s.positions.size());
  for (std::size_t i = 0; i < s.positions.size(); ++i) {
    const Eigen::Vector3d& r = s.positions[i];
    a[i] = Eigen::Vector3d(0.5 * wz2 * r.x(), 0.5 * wz2 * r.y(), -wz2 * r.z());
    a[i].x() += wz2 * m.wall_epsilon * (r.x() * c2 + r.y() * s2);
    a[i].y() += wz2 * m.wall_epsilon * (r.x() * s2 - r.y() * c2);
    if (m.drive.enabled) a[i].z() += m.drive.acceleration * std::cos(m.drive.frequency * s.time);
  }
  if (s.positions.size() == 2 && m.coulomb) {
    const Eigen::Vector3d d = s.positions[0] - s.positions[1];
    const double r = d.norm();
    const Eigen::Vector3d f = m.coulomb_strength * d / (r * r * r);
    a[0] += f;
    a[1] -= f;
  }
  return a;
}

std::vector<Eigen::Vector3d> forces(const ClassicalState& s, const ClassicalModel& m) {
  std::vector<Eigen::Vector3d> a = electric_accelerations(s, m);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Eigen::Vector3d& v = s.velocities[i];
    a[i] += m.omega_c * Eigen::Vector3d(-v.y(), v.x(), 0.0);
  }
  return a;
}

TrapUnits trap_units(double omega_z) {
  return {std::sqrt(K.reduced_planck / (K.electron_mass * omega_z)), 1.0 / omega_z};
}

Eigen::Vector3d to_rotating(const Eigen::Vector3d& lab, double omega_wall, double t) {
  return rotate_z(lab, -omega_wall * t);
}

std::vector<Eigen::Vector3d> rotating_frame_accelerations(const ClassicalState& s, const ClassicalModel& m) {
  std::vector<Eigen::Vector3d> a = forces(s, m);
  const double w = m.omega_wall;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Eigen::Vector3d& r = s.positions[i];
    const Eigen::Vector3d v_rel = s.velocities[i] - w * Eigen::Vector3d(-r.y(), r.x(), 0.0);
    a[i] -= 2.0 * w * Eigen::Vector3d(-v_rel.y(), v_rel.x(), 0.0);
    a[i] += w * w * Eigen::Vector3d(r.x(), r.y(), 0.0);
  }
  return a;
}

double rotating_frame_energy(const ClassicalState& s, const ClassicalModel& m) {
  check_shape(s);
  const double wz2 = m.omega_z * m.omega_z;
  const double rho2_coeff = (m.omega_c - m.omega_wall) * m.omega_wall - 0.5 * wz2;
  double e = 0.0;
  for (std::size_t i = 0; i < s.positions.size(); ++i) {
    const Eigen::Vector3d& r = s.positions[i];
    const Eigen::Vector3d v_frame = s.velocities[i] - m.omega_wall * Eigen::Vector3d(-r.y(), r.x(), 0.0);
    const Eigen::Vector3d rr = to_rotating(r, m.omega_wall, s.time);
    e += 0.5 * v_frame.squaredNorm();
    e += 0.5 * (rho2_coeff * (rr.x() * rr.x() + rr.y() * rr.y()) + wz2 * rr.z() * rr.z() -
                wz2 * m.wall_epsilon * (rr.x() * rr.x() - rr.y() * rr.y()));
  }
  if (s.positions.size() == 2 && m.coulomb) {
    e += m.coulomb_strength / (s.positions[0] - s.positions[1]).norm();
  }
  return K.electron_mass * e;
}

void step(ClassicalState& s, const ClassicalModel& m, double dt, RotationRule rule) {
  const double half = 0.5 * dt;
  for (std::size_t i = 0; i < s.positions.size(); ++i) s.positions[i] += half * s.velocities[i];
  const double t0 = s.time;
  s.time = t0 + half;
  const std::vector<Eigen::Vector3d> a = electric_accelerations(s, m);
  const double angle =
      rule == RotationRule::tangent ? 2.0 * std::atan(0.5 * m.omega_c * dt) : m.omega_c * dt;
  for (std::size_t i = 0; i < s.positions.size(); ++i) {
    Eigen::Vector3d v = s.velocities[i] + half * a[i];
    v = rotate_z(v, angle);
    s.velocities[i] = v + half * a[i];
    s.positions[i] += half * s.velocities[i];
  }
  s.time = t0 + dt;
}

Trajectory integrate(const ClassicalState& initial, double duration, const ClassicalModel& m,
                     const IntegratorParams& p) {
  check_shape(initial);
  if (!std::isfinite(p.dt) || p.dt == 0.0) throw ConfigError("integration step must be finite and nonzero");
  if (m.omega_c * std::abs(p.dt) > p.max_cyclotron_phase * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "omega_c |dt| = " << m.omega_c * std::abs(p.dt) << " exceeds the limit " << p.max_cyclotron_phase;
    throw ConfigError(os.str());
  }
  if (p.sample_every < 1) throw ConfigError("sample_every must be >= 1");
  if (!std::isfinite(duration) || duration * p.dt < 0.0) {
    throw ConfigError("duration must be finite with the same sign as dt");
  }
  const auto steps = static_cast<long long>(std::ceil(duration / p.dt - 1e-9));

  Trajectory traj;
  traj.units = trap_units(m.omega_z);
  const bool pair = initial.positions.size() == 2;
  auto record = [&](const ClassicalState& s) {
    traj.time.push_back(s.time);
    traj.lab.push_back(s);
    traj.energy.push_back(rotating_frame_energy(s, m));
    if (pair) {
      traj.stretch.push_back(to_rotating(s.positions[0] - s.positions[1], m.omega_wall, s.time) /
                             traj.units.length);
    }
  };

  ClassicalState s = initial;
  check_state(s);
  record(s);
  for (long long k = 1; k <= steps; ++k) {
    step(s, m, p.dt, p.rotation);
    check_state(s);
    if (k % p.sample_every == 0 || k == steps) record(s);
  }
  return traj;
}

TrapConfig scaled_config(const TrapConfig& config, double cyclotron_ratio) {
  const ModeFrequencies f = derive_frequencies(config);
  if (!(cyclotron_ratio * cyclotron_ratio > 2.0)) throw ConfigError("cyclotron ratio must exceed sqrt(2)");
  TrapConfig out = config;
  out.b_field = cyclotron_ratio * config.omega_z * K.electron_mass / K.elementary_charge;
  const double wall_ratio = config.omega_wall / f.omega_m;
  out.omega_wall = 0.0;
  out.omega_wall = wall_ratio * derive_frequencies(out).omega_m;
  return out;
}

ClassicalState equilibrium_state(const TrapConfig& config, double z_offset, const Eigen::Vector3d& stretch_offset) {
  const Equilibrium eq = rotating_wall_equilibrium(config);
  ClassicalState s;
  for (int i = 0; i < 2; ++i) {
    const double sign = i == 0 ? 0.5 : -0.5;
    Eigen::Vector3d r = eq.positions[i] + sign * eq.x0 * stretch_offset;
    r.z() += z_offset;
    s.positions.push_back(r);
    s.velocities.push_back(config.omega_wall * Eigen::Vector3d(-r.y(), r.x(), 0.0));
  }
  return s;
}

StabilityRun stretch_stability(const TrapConfig& config, double z0_amplitude, double duration,
                               const StabilityOptions& o) {
  if (!(duration > 0.0)) throw ConfigError("stability run duration must be > 0");
  if (!std::isfinite(z0_amplitude)) throw ConfigError("axial amplitude must be finite");
  const Equilibrium eq = rotating_wall_equilibrium(config);
  ClassicalModel model = make_model(config);
  const ClassicalState initial = equilibrium_state(config, z0_amplitude, o.stretch_offset);
  if (o.excitation == Excitation::continuous_drive) {
    const double wd = config.omega_z * (1.0 + o.drive_detuning);
    model.drive = {true, z0_amplitude * (config.omega_z * config.omega_z - wd * wd), wd};
  }

  IntegratorParams p;
  p.dt = o.cyclotron_phase_per_step / model.omega_c;
  p.sample_every = o.sample_every;
  p.rotation = o.rotation;

  StabilityRun run;
  run.trajectory = integrate(initial, duration, model, p);
  StabilityReport& r = run.report;
  r.x0 = eq.x0;
  r.threshold = o.threshold;
  const Eigen::Vector3d target(eq.x0, 0.0, 0.0);
  const double ell = run.trajectory.units.length;
  for (const auto& st : run.trajectory.stretch) {
    r.max_deviation = std::max(r.max_deviation, (st * ell - target).norm() / eq.x0);
  }
  const auto& e = run.trajectory.energy;
  const double e0 = std::abs(e.front());
  for (double v : e) r.energy_drift_total = std::max(r.energy_drift_total, std::abs(v - e.front()) / e0);
  r.axial_periods = (run.trajectory.time.back() - run.trajectory.time.front()) * config.omega_z / kTwoPi;
  r.energy_drift_per_period = std::abs(e.back() - e.front()) / e0 / std::max(1.0, r.axial_periods);
  r.bounded = r.max_deviation < r.threshold;
  return run;
}

}  // namespace penning
