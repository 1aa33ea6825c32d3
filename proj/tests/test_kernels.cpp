#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "penning/kernels.hpp"
#include "penning/protocols.hpp"
#include "penning/spectral.hpp"

using namespace penning;

TEST_CASE("periodic phase grid") {
  const std::vector<double> g = periodic_phase_grid(1e-3);
  CHECK(g.size() == 6284);
  CHECK(g[1] - g[0] <= 1e-3);
  CHECK(g.front() == doctest::Approx(0.5 * (g[1] - g[0])));
  CHECK(g.back() < 2.0 * M_PI);
  CHECK(is_periodic_grid(g));
  std::vector<double> open(g.begin(), g.end() - 1);
  CHECK_FALSE(is_periodic_grid(open));
  CHECK_THROWS(periodic_phase_grid(0.0));
}

TEST_CASE("serial and parallel fringe scans are bit-identical") {
  const double rabi = 1.0;
  const HilbertSpace space(8);
  const GhzSequences g = ghz_pi2_sequences(rabi, 10.0 * rabi);
  const QuantumState prepared = apply_sequence(basis_state(space, Spin::up, Spin::up, 0), g.prepare);
  const OperatorMatrix readout = sequence_propagator(space, g.readout);
  const std::vector<double> phases = periodic_phase_grid(1e-3);
  const FringeCurve a = fringe_scan(prepared, readout, phases, Exec::serial);
  const FringeCurve b = fringe_scan(prepared, readout, phases, Exec::parallel);
  CHECK(a.mean == b.mean);
  CHECK(a.variance == b.variance);
  CHECK(a.periodic);
}

TEST_CASE("serial and parallel partial scans are bit-identical") {
  const std::vector<double> grid = partial_t3_grid(1.0, 12);
  const PartialScan a = partial_protocol_scan(1.0, grid, 2e-3, 8, Exec::serial);
  const PartialScan b = partial_protocol_scan(1.0, grid, 2e-3, 8, Exec::parallel);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    CHECK(a.rows[k].figure == b.rows[k].figure);
    CHECK(a.rows[k].optimal_phase == b.rows[k].optimal_phase);
  }
  CHECK(a.best == b.best);
}

TEST_CASE("dominant frequency of synthetic signals") {
  const double dt = 1e-3;
  const int n = 20000;
  std::vector<double> x(n);
  std::vector<std::complex<double>> z(n);
  for (int k = 0; k < n; ++k) {
    const double t = k * dt;
    x[k] = 0.3 + std::cos(47.3 * t + 0.4) + 0.2 * std::sin(311.0 * t);
    z[k] = std::polar(1.0, 123.4 * t) + 0.5 * std::polar(1.0, -80.0 * t);
  }
  CHECK(dominant_frequency(x, dt, 10.0, 100.0) == doctest::Approx(47.3).epsilon(1e-6));
  CHECK(dominant_frequency(x, dt, 200.0, 400.0) == doctest::Approx(311.0).epsilon(1e-6));
  CHECK(dominant_frequency(z, dt, 0.0, 200.0) == doctest::Approx(123.4).epsilon(1e-6));
  CHECK(dominant_frequency(z, dt, -200.0, 0.0) == doctest::Approx(-80.0).epsilon(1e-6));
  CHECK(dominant_frequency(x, dt, 10.0, 100.0, Exec::serial) == dominant_frequency(x, dt, 10.0, 100.0, Exec::parallel));
  CHECK_THROWS(dominant_frequency(x, dt, 100.0, 10.0));
  CHECK_THROWS(dominant_frequency(std::vector<double>(4, 0.0), dt, 1.0, 2.0));
}
