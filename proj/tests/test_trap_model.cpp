#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "penning/errors.hpp"
#include "penning/trap_model.hpp"

using namespace penning;

namespace {

constexpr double kE = 1.602176634e-19;
constexpr double kMe = 9.1093837015e-31;
constexpr double kEps0 = 8.8541878128e-12;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string domain_kind(const TrapConfig& c) {
  try {
    rotating_wall_equilibrium(c);
  } catch (const PhysicsDomainError& e) {
    return e.kind();
  }
  return "";
}

// Rotating-frame potential energy of two electrons: trap + wall + Coulomb.
double rotating_potential(const TrapConfig& c, const Eigen::Matrix<double, 6, 1>& q) {
  const ModeFrequencies f = derive_frequencies(c);
  const double wz2 = c.omega_z * c.omega_z;
  double v = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double x = q[3 * i], y = q[3 * i + 1], z = q[3 * i + 2];
    v += 0.5 * kMe * (f.omega_rho_prime_sq * (x * x + y * y) + wz2 * z * z - wz2 * c.wall_epsilon * (x * x - y * y));
  }
  const Eigen::Vector3d d = q.head<3>() - q.tail<3>();
  return v + kE * kE / (4.0 * M_PI * kEps0 * d.norm());
}

}  // namespace

TEST_CASE("cyclotron frequency from e B / m") {
  const double expected = kE * 5.36 / kMe;
  CHECK(rel(cyclotron_frequency(5.36), expected) < 1e-15);
  CHECK(rel(cyclotron_frequency(5.36) / (2.0 * M_PI), 150.0e9) < 1e-3);
}

TEST_CASE("derived frequencies satisfy the exact identities for random configs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> b(0.5, 8.0), fz(20e6, 400e6);
  for (int k = 0; k < 500; ++k) {
    TrapConfig c = representative_config();
    c.b_field = b(rng);
    c.omega_z = 2.0 * M_PI * fz(rng);
    const ModeFrequencies f = derive_frequencies(c);
    CHECK(rel(f.omega_c_prime + f.omega_m, f.omega_c) < 1e-12);
    CHECK(rel(f.omega_c_prime * f.omega_m, 0.5 * c.omega_z * c.omega_z) < 1e-12);
    CHECK(rel(f.omega_c_prime * f.omega_c_prime + c.omega_z * c.omega_z + f.omega_m * f.omega_m,
              f.omega_c * f.omega_c) < 1e-12);
    CHECK(f.omega_a_prime == f.omega_s - f.omega_c_prime);
  }
}

TEST_CASE("weak axial confinement limit") {
  TrapConfig c = representative_config();
  c.omega_z = 2.0 * M_PI * 1.0;
  const ModeFrequencies f = derive_frequencies(c);
  CHECK(f.omega_m < 1e-9 * f.omega_c);
  CHECK(rel(f.omega_c_prime, f.omega_c) < 1e-15);
}

TEST_CASE("config validation") {
  TrapConfig c = representative_config();
  c.b_field = 0.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = representative_config();
  c.fock_cutoff = 3;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = representative_config();
  c.beta2 = -1.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = representative_config();
  c.b_field = 1e-3;
  try {
    validate(c);
    FAIL("expected a trap instability");
  } catch (const PhysicsDomainError& e) {
    CHECK(e.kind() == "trap_instability");
  }
}

TEST_CASE("equilibrium separation") {
  const TrapConfig c = representative_config();
  const Equilibrium eq = rotating_wall_equilibrium(c);
  CHECK(rel(eq.x0, 8.6e-6) < 0.02);
  CHECK(eq.positions[0].x() == doctest::Approx(0.5 * eq.x0));
  CHECK(eq.positions[1].x() == doctest::Approx(-0.5 * eq.x0));
  const ModeFrequencies f = derive_frequencies(c);
  CHECK(eq.window_low == f.omega_m);
  CHECK(eq.window_high == 3.0 * f.omega_m);

  SUBCASE("minimizes the diametric energy") {
    const double kappa = eq.radial_curvature;
    auto energy = [&](double x) { return 0.25 * kMe * kappa * x * x + kE * kE / (4.0 * M_PI * kEps0 * x); };
    double a = 0.2 * eq.x0, b = 5.0 * eq.x0;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 200; ++it) {
      const double c1 = b - g * (b - a), c2 = a + g * (b - a);
      if (energy(c1) < energy(c2)) {
        b = c2;
      } else {
        a = c1;
      }
    }
    CHECK(rel(0.5 * (a + b), eq.x0) < 1e-6);
  }

  SUBCASE("force balance in the rotating frame") {
    Eigen::Matrix<double, 6, 1> q;
    q << eq.positions[0], eq.positions[1];
    const double scale = kE * kE / (4.0 * M_PI * kEps0 * eq.x0 * eq.x0);
    const double h = 1e-5 * eq.x0;
    for (int k = 0; k < 6; ++k) {
      Eigen::Matrix<double, 6, 1> p = q, m = q;
      p[k] += h;
      m[k] -= h;
      const double grad = (rotating_potential(c, p) - rotating_potential(c, m)) / (2.0 * h);
      CHECK(std::abs(grad) < 1e-8 * scale);
    }
  }
}

TEST_CASE("x0 scales as curvature^(-1/3)") {
  const TrapConfig a = representative_config();
  const Equilibrium ea = rotating_wall_equilibrium(a);
  const ModeFrequencies f = derive_frequencies(a);
  // Choose omega_wall so the curvature is eight times smaller.
  const double rhs = ea.radial_curvature / 8.0 + a.omega_z * a.omega_z * (0.5 + a.wall_epsilon);
  TrapConfig b = a;
  b.omega_wall = 0.5 * (f.omega_c - std::sqrt(f.omega_c * f.omega_c - 4.0 * rhs));
  const Equilibrium eb = rotating_wall_equilibrium(b);
  CHECK(rel(eb.radial_curvature, ea.radial_curvature / 8.0) < 1e-9);
  CHECK(rel(eb.x0, 2.0 * ea.x0) < 1e-9);
}

TEST_CASE("equilibrium window errors") {
  TrapConfig c = representative_config();
  const double wm = derive_frequencies(c).omega_m;
  c.omega_wall = wm * (1.0 - 1e-3);
  CHECK(domain_kind(c) == "no_radial_confinement");
  c.omega_wall = 3.2 * wm;
  CHECK(domain_kind(c) == "separation_axis_not_x");
  c = representative_config();
  c.wall_epsilon = 0.0;
  CHECK(domain_kind(c) == "no_wall");
}

TEST_CASE("Rabi frequency") {
  TrapConfig c = representative_config();
  const double w = rabi_frequency(c);
  CHECK(w / (2.0 * M_PI) >= 8.0);
  CHECK(w / (2.0 * M_PI) <= 15.0);

  TrapConfig d = c;
  d.z0_drive *= 2.0;
  CHECK(rel(rabi_frequency(d), 2.0 * w) < 1e-15);
  d = c;
  d.beta2 *= 3.0;
  CHECK(rel(rabi_frequency(d), 3.0 * w) < 1e-15);
  d = c;
  d.z0_drive = 0.0;
  CHECK(rabi_frequency(d) == 0.0);

  const double z57 = drive_amplitude_for_rabi(c, 2.0 * M_PI * 57.0);
  CHECK(rel(z57, 0.48e-3) < 0.05);
  d = c;
  d.z0_drive = z57;
  CHECK(rel(rabi_frequency(d), 2.0 * M_PI * 57.0) < 1e-12);
}

TEST_CASE("decoherence bound") {
  TrapConfig c = representative_config();
  const double t = decoherence_bound(c);
  CHECK(rel(t, 2.3) < 0.2);
  c.axial_temperature *= 2.0;
  CHECK(rel(decoherence_bound(c), 0.5 * t) < 1e-15);
  c.axial_temperature = 0.0;
  CHECK(decoherence_bound(c) == std::numeric_limits<double>::infinity());
}

TEST_CASE("timing budget") {
  TrapConfig c = representative_config();
  const TimingBudget b = timing_budget(c);
  CHECK(rel(b.required_rabi / (2.0 * M_PI), 57.0) < 0.05);
  CHECK(b.required_z0 > 0.4e-3);
  CHECK(b.required_z0 < 0.6e-3);
  CHECK(rel(b.t_meas, 0.1 * b.t_dec) < 1e-15);
  const double closure = (1.425 + 1.538 + M_PI * c.delta_over_omega / 6.0) / b.required_rabi;
  CHECK(rel(closure, b.pulse_budget) < 1e-12);

  c.axial_temperature *= b.t_dec / 2.3;
  CHECK(rel(timing_budget(c).pulse_budget, 0.023) < 1e-12);
}

TEST_CASE("normal modes") {
  const TrapConfig c = representative_config();
  const ModeSpectrum s = normal_modes(c);
  REQUIRE(s.modes.size() == 6);
  for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
    CHECK(std::abs(s.eigenvalues[k].real()) <= 1e-9 * std::abs(s.eigenvalues[k].imag()));
  }

  SUBCASE("cm modes equal the single-particle frequencies") {
    const RotatingFrameFrequencies sp = single_particle_rotating(c);
    CHECK(rel(s.find(ModeSymmetry::cm, ModeBranch::cyclotron).frequency, sp.cyclotron) < 1e-10);
    CHECK(rel(s.find(ModeSymmetry::cm, ModeBranch::axial).frequency, sp.axial) < 1e-10);
    CHECK(rel(s.find(ModeSymmetry::cm, ModeBranch::magnetron).frequency, sp.magnetron) < 1e-10);
  }

  SUBCASE("stretch modes from the closed-form stretch stiffness") {
    const ModeFrequencies f = derive_frequencies(c);
    const double wz2 = c.omega_z * c.omega_z;
    const double kx = (f.omega_rho_prime_sq - wz2 * c.wall_epsilon) / wz2;
    const double ky = (f.omega_rho_prime_sq + wz2 * c.wall_epsilon) / wz2;
    const double gyro = (f.omega_c - 2.0 * c.omega_wall) / c.omega_z;
    const double sx = 3.0 * kx, sy = ky - kx;
    const double bsum = sx + sy + gyro * gyro;
    const double big = 0.5 * (bsum + std::sqrt(bsum * bsum - 4.0 * sx * sy));
    CHECK(rel(s.find(ModeSymmetry::stretch, ModeBranch::cyclotron).frequency, std::sqrt(big) * c.omega_z) < 1e-10);
    CHECK(rel(s.find(ModeSymmetry::stretch, ModeBranch::magnetron).frequency,
              std::sqrt(sx * sy / big) * c.omega_z) < 1e-9);
    CHECK(rel(s.find(ModeSymmetry::stretch, ModeBranch::axial).frequency, std::sqrt(1.0 - kx) * c.omega_z) < 1e-10);
  }

  SUBCASE("eigenvectors have definite symmetry") {
    for (const auto& m : s.modes) CHECK(m.cross_block < 1e-8);
  }

  SUBCASE("cyclotron splitting") {
    const double split = s.splitting(ModeBranch::cyclotron);
    CHECK(split / (2.0 * M_PI) >= 10e3);
    CHECK(split / (2.0 * M_PI) <= 100e3);
    const double x0 = rotating_wall_equilibrium(c).x0;
    const double curvature = kE * kE / (2.0 * M_PI * kEps0 * x0 * x0 * x0);
    const double estimate = curvature / (2.0 * kMe * cyclotron_frequency(c.b_field));
    CHECK(rel(split, estimate) < 0.2);
  }
}

TEST_CASE("leakage audit") {
  const TrapConfig c = representative_config();
  const ModeSpectrum s = normal_modes(c);
  const LeakageReport r = leakage_audit(c, s);
  REQUIRE(r.entries.size() == 4);
  double mx = 0.0;
  for (const auto& e : r.entries) {
    CHECK(e.ratio >= 0.0);
    CHECK(e.ratio == doctest::Approx((e.coupling / e.detuning) * (e.coupling / e.detuning)).epsilon(1e-14));
    mx = std::max(mx, e.ratio);
  }
  CHECK(r.max_ratio == mx);
  CHECK(r.max_ratio < 1e-4);
  CHECK(r.entries[1].detuning == s.splitting(ModeBranch::cyclotron));
  CHECK(make_leakage_entry("synthetic", 3.0, 3.0).ratio == 1.0);
}
