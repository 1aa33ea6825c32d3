#include "penning/trap_model.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "penning/errors.hpp"
#include "penning/protocol_constants.hpp"

namespace penning {
namespace {

const PhysicalConstants& K = codata2018;

bool finite_all(const TrapConfig& c) {
  for (double v : {c.b_field, c.omega_z, c.beta2, c.wall_epsilon, c.omega_wall,
                   c.axial_temperature, c.z0_drive, c.delta_over_omega}) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

// Per-particle linear coefficients in the rotating frame, in units where time
// is measured in 1/omega_z.
struct RotatingCoefficients {
  double gyro = 0.0;  // (omega_c - 2 omega) / omega_z
  double kx = 0.0;
  double ky = 0.0;
  double kz = 1.0;
};

RotatingCoefficients rotating_coefficients(const TrapConfig& c) {
  const ModeFrequencies f = derive_frequencies(c);
  const double wz2 = c.omega_z * c.omega_z;
  RotatingCoefficients r;
  r.gyro = (f.omega_c - 2.0 * c.omega_wall) / c.omega_z;
  r.kx = (f.omega_rho_prime_sq - wz2 * c.wall_epsilon) / wz2;
  r.ky = (f.omega_rho_prime_sq + wz2 * c.wall_epsilon) / wz2;
  return r;
}

// Q(i w) = -w^2 I + i w G + K. Hermitian for real symmetric K, antisymmetric G.
Eigen::MatrixXcd quadratic_pencil(const Eigen::MatrixXd& stiffness, const Eigen::MatrixXd& gyro,
                                  double w) {
  const std::complex<double> iw(0.0, w);
  Eigen::MatrixXcd q = stiffness.cast<std::complex<double>>() + iw * gyro.cast<std::complex<double>>();
  q.diagonal().array() -= w * w;
  return q;
}

// Newton iteration on log det Q(i w) along the imaginary axis.
double polish_frequency(const Eigen::MatrixXd& stiffness, const Eigen::MatrixXd& gyro, double w) {
  for (int it = 0; it < 50; ++it) {
    const Eigen::MatrixXcd q = quadratic_pencil(stiffness, gyro, w);
    Eigen::MatrixXcd dq = std::complex<double>(0.0, 1.0) * gyro.cast<std::complex<double>>();
    dq.diagonal().array() -= 2.0 * w;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(q);
    const double trace = (lu.solve(dq)).trace().real();
    if (!std::isfinite(trace) || trace == 0.0) break;
    const double step = 1.0 / trace;
    w -= step;
    if (std::abs(step) <= 1e-16 * std::abs(w)) break;
  }
  return w;
}

}  // namespace

TrapConfig representative_config() {
  TrapConfig c;
  c.b_field = 5.36;
  c.omega_z = kTwoPi * 200.0e6;
  c.beta2 = 1540.0;
  c.wall_epsilon = 0.01;
  c.axial_temperature = 0.3;
  c.z0_drive = 100.0e-6;
  c.delta_over_omega = 10.0;
  c.fock_cutoff = 8;
  c.omega_wall = 0.0;
  c.omega_wall = 2.0 * derive_frequencies(c).omega_m;
  return c;
}

void validate(const TrapConfig& c) {
  if (!finite_all(c)) throw ConfigError("config contains a non-finite value");
  if (!(c.b_field > 0.0)) throw ConfigError("b_field must be > 0");
  if (!(c.omega_z > 0.0)) throw ConfigError("omega_z must be > 0");
  if (c.beta2 < 0.0) throw ConfigError("beta2 must be >= 0");
  if (c.z0_drive < 0.0) throw ConfigError("z0_drive must be >= 0");
  if (c.axial_temperature < 0.0) throw ConfigError("axial_temperature must be >= 0");
  if (c.omega_wall < 0.0) throw ConfigError("omega_wall must be >= 0");
  if (c.wall_epsilon < 0.0) throw ConfigError("wall_epsilon must be >= 0");
  if (c.fock_cutoff < 4) throw ConfigError("fock_cutoff must be >= 4");
  const double wc = cyclotron_frequency(c.b_field);
  if (!(wc * wc > 2.0 * c.omega_z * c.omega_z)) {
    std::ostringstream os;
    os << "omega_c^2 = " << wc * wc << " <= 2 omega_z^2 = " << 2.0 * c.omega_z * c.omega_z;
    throw trap_instability(os.str());
  }
}

double cyclotron_frequency(double b_field) {
  return K.elementary_charge * b_field / K.electron_mass;
}

ModeFrequencies derive_frequencies(const TrapConfig& c) {
  validate(c);
  ModeFrequencies f;
  f.omega_c = cyclotron_frequency(c.b_field);
  const double half_wz2 = 0.5 * c.omega_z * c.omega_z;
  // Roots of w^2 - omega_c w + omega_z^2/2; the small one via the product to
  // keep full relative precision.
  const double root = std::sqrt(f.omega_c * f.omega_c - 4.0 * half_wz2);
  f.omega_c_prime = 0.5 * (f.omega_c + root);
  f.omega_m = half_wz2 / f.omega_c_prime;
  f.omega_s = K.g_over_2 * f.omega_c;
  f.omega_a_prime = f.omega_s - f.omega_c_prime;
  f.omega_rho_prime_sq = (f.omega_c - c.omega_wall) * c.omega_wall - half_wz2;
  return f;
}

RotatingFrameFrequencies single_particle_rotating(const TrapConfig& c) {
  const RotatingCoefficients r = rotating_coefficients(c);
  if (!(r.kx > 0.0 && r.ky > 0.0)) {
    throw PhysicsDomainError("no_radial_confinement",
                             "single-particle motion is not confined in the rotating frame");
  }
  // In-plane: s^2 - (kx + ky + gyro^2) s + kx ky = 0 with s = w^2.
  const double b = r.kx + r.ky + r.gyro * r.gyro;
  const double cc = r.kx * r.ky;
  const double s_big = 0.5 * (b + std::sqrt(b * b - 4.0 * cc));
  const double s_small = cc / s_big;
  return {std::sqrt(s_big) * c.omega_z, c.omega_z, std::sqrt(s_small) * c.omega_z};
}

Equilibrium rotating_wall_equilibrium(const TrapConfig& c) {
  const ModeFrequencies f = derive_frequencies(c);
  if (!(c.wall_epsilon > 0.0)) {
    throw PhysicsDomainError("no_wall", "rotating-wall strength wall_epsilon must be > 0");
  }
  const double wz2 = c.omega_z * c.omega_z;
  const double curvature = f.omega_rho_prime_sq - wz2 * c.wall_epsilon;
  if (!(curvature > 0.0)) {
    throw PhysicsDomainError("no_radial_confinement",
                             "omega_wall below the confinement window (omega_rho'^2 - omega_z^2 delta <= 0)");
  }
  if (!(curvature < wz2)) {
    throw PhysicsDomainError("separation_axis_not_x",
                             "omega_wall above the confinement window (x is no longer the weakest axis)");
  }
  Equilibrium eq;
  const double e2 = K.elementary_charge * K.elementary_charge;
  eq.x0 = std::cbrt(e2 / (2.0 * kPi * K.vacuum_permittivity * K.electron_mass * curvature));
  eq.positions[0] = Eigen::Vector3d(0.5 * eq.x0, 0.0, 0.0);
  eq.positions[1] = -eq.positions[0];
  eq.window_low = f.omega_m;
  eq.window_high = 3.0 * f.omega_m;
  eq.radial_curvature = curvature;
  return eq;
}

double rabi_frequency(const TrapConfig& c) {
  const ModeFrequencies f = derive_frequencies(c);
  const double denom = std::sqrt(4.0 * K.electron_mass * K.reduced_planck) *
                       std::pow(f.omega_c * f.omega_c - 2.0 * c.omega_z * c.omega_z, 0.25);
  return K.g_over_2 * K.bohr_magneton * c.beta2 * c.z0_drive / denom;
}

double drive_amplitude_for_rabi(const TrapConfig& c, double rabi) {
  TrapConfig unit = c;
  unit.z0_drive = 1.0;
  const double per_metre = rabi_frequency(unit);
  if (!(per_metre > 0.0)) throw PhysicsDomainError("no_coupling", "beta2 = 0: no drive amplitude reaches a nonzero Rabi frequency");
  return rabi / per_metre;
}

double decoherence_bound(const TrapConfig& c) {
  const ModeFrequencies f = derive_frequencies(c);
  const double rate = f.omega_a_prime * (c.beta2 / c.b_field) * K.boltzmann * c.axial_temperature /
                      (2.0 * K.electron_mass * c.omega_z * c.omega_z);
  if (rate == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / rate;
}

std::string to_string(ModeSymmetry s) { return s == ModeSymmetry::cm ? "cm" : "stretch"; }

std::string to_string(ModeBranch b) {
  switch (b) {
    case ModeBranch::cyclotron: return "cyclotron";
    case ModeBranch::axial: return "axial";
    case ModeBranch::magnetron: return "magnetron";
  }
  return "?";
}

const NormalMode& ModeSpectrum::find(ModeSymmetry s, ModeBranch b) const {
  for (const auto& m : modes) {
    if (m.symmetry == s && m.branch == b) return m;
  }
  throw std::out_of_range("mode not present: " + to_string(s) + " " + to_string(b));
}

double ModeSpectrum::splitting(ModeBranch b) const {
  return std::abs(find(ModeSymmetry::stretch, b).frequency - find(ModeSymmetry::cm, b).frequency);
}

ModeSpectrum normal_modes(const TrapConfig& c) {
  rotating_wall_equilibrium(c);
  const RotatingCoefficients r = rotating_coefficients(c);

  // Coulomb Hessian on the relative coordinate at separation x0 along x,
  // expressed through the equilibrium condition kx x0^3 = e^2 / (2 pi eps0 m).
  const Eigen::Vector3d coulomb(-r.kx, 0.5 * r.kx, 0.5 * r.kx);

  Eigen::MatrixXd stiffness = Eigen::MatrixXd::Zero(6, 6);
  Eigen::MatrixXd gyro = Eigen::MatrixXd::Zero(6, 6);
  for (int p = 0; p < 2; ++p) {
    const int o = 3 * p;
    stiffness(o + 0, o + 0) = r.kx;
    stiffness(o + 1, o + 1) = r.ky;
    stiffness(o + 2, o + 2) = r.kz;
    gyro(o + 0, o + 1) = r.gyro;
    gyro(o + 1, o + 0) = -r.gyro;
  }
  for (int k = 0; k < 3; ++k) {
    stiffness(k, k) -= coulomb[k];
    stiffness(3 + k, 3 + k) -= coulomb[k];
    stiffness(k, 3 + k) += coulomb[k];
    stiffness(3 + k, k) += coulomb[k];
  }

  // First-order form x' = A x with x = (q, q').
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(12, 12);
  a.topRightCorner(6, 6).setIdentity();
  a.bottomLeftCorner(6, 6) = -stiffness;
  a.bottomRightCorner(6, 6) = -gyro;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  const Eigen::VectorXcd raw = solver.eigenvalues();

  const double scale = a.cwiseAbs().rowwise().sum().maxCoeff();
  std::vector<std::complex<double>> unstable;
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    if (std::abs(raw[i].real()) > 1e-10 * scale) unstable.push_back(raw[i] * c.omega_z);
  }
  if (!unstable.empty()) {
    std::ostringstream os;
    os << "linearized dynamics has growing/decaying eigenvalues (rad/s):";
    for (const auto& u : unstable) os << " (" << u.real() << "," << u.imag() << ")";
    throw PhysicsDomainError("unstable_mode", os.str());
  }

  std::vector<double> freqs;
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    if (raw[i].imag() > 0.0) freqs.push_back(polish_frequency(stiffness, gyro, raw[i].imag()));
  }
  if (freqs.size() != 6) {
    throw NumericalAbort("normal-mode solve did not return 6 positive-frequency eigenvalues");
  }
  std::sort(freqs.begin(), freqs.end());

  ModeSpectrum spec;
  spec.rotation_frequency = c.omega_wall;
  spec.eigenvalues.resize(12);
  for (std::size_t i = 0; i < 6; ++i) {
    spec.eigenvalues[2 * i] = {0.0, freqs[i] * c.omega_z};
    spec.eigenvalues[2 * i + 1] = {0.0, -freqs[i] * c.omega_z};
  }

  for (double w : freqs) {
    const Eigen::MatrixXcd q = quadratic_pencil(stiffness, gyro, w);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(q, Eigen::ComputeFullV);
    const Eigen::VectorXcd v = svd.matrixV().col(5);
    NormalMode m;
    m.frequency = w * c.omega_z;
    m.eigenvector.resize(12);
    m.eigenvector.head(6) = v;
    m.eigenvector.tail(6) = std::complex<double>(0.0, w) * v;
    m.eigenvector.normalize();
    const Eigen::VectorXcd sym = (v.head(3) + v.tail(3)) / std::sqrt(2.0);
    const Eigen::VectorXcd anti = (v.head(3) - v.tail(3)) / std::sqrt(2.0);
    const double ns = sym.norm();
    const double na = anti.norm();
    m.symmetry = ns >= na ? ModeSymmetry::cm : ModeSymmetry::stretch;
    m.cross_block = std::min(ns, na) / v.norm();
    spec.modes.push_back(std::move(m));
  }

  // Branch labels: per symmetry block, the mode with the largest axial weight
  // is axial; of the remaining two, the faster is cyclotron.
  for (ModeSymmetry s : {ModeSymmetry::cm, ModeSymmetry::stretch}) {
    std::vector<NormalMode*> block;
    for (auto& m : spec.modes) {
      if (m.symmetry == s) block.push_back(&m);
    }
    if (block.size() != 3) throw NumericalAbort("normal-mode symmetry classification failed");
    auto axial_weight = [](const NormalMode* m) {
      const auto& v = m->eigenvector;
      return std::norm(v[2]) + std::norm(v[5]);
    };
    auto ax = std::max_element(block.begin(), block.end(), [&](auto* x, auto* y) {
      return axial_weight(x) < axial_weight(y);
    });
    (*ax)->branch = ModeBranch::axial;
    std::vector<NormalMode*> planar;
    for (auto* m : block) {
      if (m != *ax) planar.push_back(m);
    }
    if (planar[0]->frequency < planar[1]->frequency) std::swap(planar[0], planar[1]);
    planar[0]->branch = ModeBranch::cyclotron;
    planar[1]->branch = ModeBranch::magnetron;
  }
  std::sort(spec.modes.begin(), spec.modes.end(), [](const NormalMode& x, const NormalMode& y) {
    return std::pair(x.symmetry, x.branch) < std::pair(y.symmetry, y.branch);
  });
  return spec;
}

LeakageEntry make_leakage_entry(std::string term, double coupling, double detuning) {
  LeakageEntry e;
  e.term = std::move(term);
  e.coupling = coupling;
  e.detuning = detuning;
  const double q = coupling / detuning;
  e.ratio = q * q;
  return e;
}

LeakageReport leakage_audit(const TrapConfig& c, const ModeSpectrum& spectrum) {
  const ModeFrequencies f = derive_frequencies(c);
  const double drive = f.omega_a_prime;
  const double w = spectrum.rotation_frequency;
  const double field_per_length =
      K.g_over_2 * K.bohr_magneton * c.beta2 * c.z0_drive / K.reduced_planck;

  // Single-spin coupling through the radial zero-point amplitude of the
  // cyclotron/magnetron pair of one symmetry block. The stretch coordinate
  // enters the bottle term with a factor 1/2 and has reduced mass m/2.
  auto coupling = [&](ModeSymmetry s) {
    const double pair = spectrum.find(s, ModeBranch::cyclotron).frequency +
                        spectrum.find(s, ModeBranch::magnetron).frequency;
    const double mass = s == ModeSymmetry::cm ? 2.0 * K.electron_mass : 0.5 * K.electron_mass;
    const double geometry = s == ModeSymmetry::cm ? 1.0 : 0.5;
    return field_per_length * geometry * std::sqrt(K.reduced_planck / (2.0 * mass * pair));
  };
  // Lab-frame frequencies: cyclotron co-rotates with the frame, magnetron
  // appears counter-rotating when omega_wall > omega_m.
  auto lab_cyclotron = [&](ModeSymmetry s) { return spectrum.find(s, ModeBranch::cyclotron).frequency + w; };
  auto lab_magnetron = [&](ModeSymmetry s) {
    return std::abs(w - spectrum.find(s, ModeBranch::magnetron).frequency);
  };
  auto magnetron_detuning = [&](ModeSymmetry s) {
    const double wm = lab_magnetron(s);
    return std::min(std::abs(f.omega_s - wm - drive), std::abs(f.omega_s + wm - drive));
  };

  LeakageReport rep;
  rep.entries.push_back(make_leakage_entry("spin_x_cm_cyclotron_counter_rotating", coupling(ModeSymmetry::cm),
                                           f.omega_s + lab_cyclotron(ModeSymmetry::cm) - drive));
  rep.entries.push_back(make_leakage_entry("spin_x_stretch_cyclotron", coupling(ModeSymmetry::stretch),
                                           spectrum.splitting(ModeBranch::cyclotron)));
  rep.entries.push_back(make_leakage_entry("spin_x_cm_magnetron", coupling(ModeSymmetry::cm),
                                           magnetron_detuning(ModeSymmetry::cm)));
  rep.entries.push_back(make_leakage_entry("spin_x_stretch_magnetron", coupling(ModeSymmetry::stretch),
                                           magnetron_detuning(ModeSymmetry::stretch)));
  for (const auto& e : rep.entries) rep.max_ratio = std::max(rep.max_ratio, e.ratio);
  return rep;
}

TimingBudget timing_budget(const TrapConfig& c) {
  TimingBudget b;
  b.t_dec = decoherence_bound(c);
  b.t_meas = 0.1 * b.t_dec;
  b.pulse_budget = 0.1 * b.t_meas;
  // Second composite pulse: (1.425 + 1.538)/Omega + pi (Delta/Omega) / (6 Omega).
  const double in_inverse_rabi = durations::kReadoutFirst + durations::kReadoutLast +
                                 durations::off_resonant(c.delta_over_omega);
  b.required_rabi = in_inverse_rabi / b.pulse_budget;
  b.required_z0 = drive_amplitude_for_rabi(c, b.required_rabi);
  return b;
}

}  // namespace penning
