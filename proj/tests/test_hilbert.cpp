#include "doctest.h"

#include <cmath>

#include "penning/gates.hpp"
#include "penning/hilbert.hpp"

using namespace penning;

namespace {

OperatorMatrix excitation(const HilbertSpace& s) { return excitation_number(s); }

}  // namespace

TEST_CASE("basis layout") {
  const HilbertSpace s(8);
  CHECK(s.dimension() == 36);
  CHECK(s.levels() == 9);
  for (int i = 0; i < s.dimension(); ++i) {
    const auto l = s.label(i);
    CHECK(s.index(l.s1, l.s2, l.n) == i);
  }
  CHECK(s.index(Spin::down, Spin::down, 0) == 0);
  CHECK(s.index(Spin::up, Spin::up, 8) == 35);
  CHECK_THROWS_AS(s.index(Spin::down, Spin::down, 9), std::out_of_range);
  CHECK_THROWS_AS(HilbertSpace(0), std::invalid_argument);
}

TEST_CASE("basis states") {
  const HilbertSpace s(4);
  const QuantumState b = basis_state(s, Spin::down, Spin::down, 1);
  CHECK(b.amplitudes[s.index(Spin::down, Spin::down, 1)] == cplx(1.0));
  CHECK(b.amplitudes.cwiseAbs().sum() == 1.0);
  CHECK(basis_state(s, Spin::up, Spin::up, 0).norm() == 1.0);
  CHECK_THROWS(basis_state(s, Spin::up, Spin::up, 5));
}

TEST_CASE("ladder and spin operators") {
  const HilbertSpace s(6);
  const LadderOps a = ladder_ops(s);
  const QuantumState vac = basis_state(s, Spin::down, Spin::up, 0);
  const QuantumState one = apply(a.raise, vac);
  CHECK((one.amplitudes - basis_state(s, Spin::down, Spin::up, 1).amplitudes).norm() == 0.0);
  const QuantumState two = apply(a.raise, one);
  CHECK(std::abs(two.amplitudes[s.index(Spin::down, Spin::up, 2)] - std::sqrt(2.0)) < 1e-15);

  const Eigen::MatrixXcd comm = a.lower.entries * a.raise.entries - a.raise.entries * a.lower.entries;
  for (int i = 0; i < s.dimension(); ++i) {
    const bool top = s.label(i).n == s.fock_cutoff();
    for (int j = 0; j < s.dimension(); ++j) {
      const cplx expected = (i == j && !top) ? 1.0 : 0.0;
      if (!top) CHECK(std::abs(comm(i, j) - expected) < 1e-14);
    }
  }
  CHECK(std::abs(comm(s.index(Spin::up, Spin::up, 6), s.index(Spin::up, Spin::up, 6)) - cplx(-6.0)) < 1e-14);

  for (int p = 0; p < 2; ++p) {
    const SpinOps sp = spin_ops(s, p);
    const Eigen::MatrixXcd anti = sp.raise.entries * sp.lower.entries + sp.lower.entries * sp.raise.entries;
    CHECK((anti - Eigen::MatrixXcd::Identity(s.dimension(), s.dimension())).norm() < 1e-15);
    const Eigen::MatrixXcd z = sp.raise.entries * sp.lower.entries - sp.lower.entries * sp.raise.entries;
    CHECK((z - sp.z.entries).norm() < 1e-15);
  }
  const SpinOps s1 = spin_ops(s, 0), s2 = spin_ops(s, 1);
  CHECK(commutator_norm(s1.raise, s2.lower) == 0.0);
  CHECK(commutator_norm(s1.raise, a.lower) == 0.0);
}

TEST_CASE("propagators are unitary and compose") {
  const HilbertSpace s(8);
  const double rabi = 2.0 * M_PI * 11.9;
  const OperatorMatrix h = h_detuned_static(s, rabi, 10.0 * rabi);
  CHECK(hermiticity_defect(h) < 1e-12);
  const OperatorMatrix u = propagator(h, 0.037);
  CHECK(unitarity_defect(u) < 1e-12);

  const QuantumState psi = superpose(s, {{{Spin::up, Spin::down, 2}, cplx(0.3, 0.1)}, {{Spin::down, Spin::down, 3}, 0.7}});
  const QuantumState a = evolve(evolve(psi, h, 0.011), h, 0.023);
  const QuantumState b = evolve(psi, h, 0.034);
  CHECK((a.amplitudes - b.amplitudes).norm() < 1e-10);
  CHECK(std::abs(b.norm() - 1.0) < 1e-12);

  const OperatorMatrix zero{s, Eigen::MatrixXcd::Zero(s.dimension(), s.dimension())};
  CHECK((evolve(psi, zero, 5.0).amplitudes - psi.amplitudes).norm() == 0.0);

  OperatorMatrix bad = h;
  bad.entries(0, 1) += cplx(0.0, 1.0);
  CHECK_THROWS_AS(propagator(bad, 1.0), std::invalid_argument);
}

TEST_CASE("two-level Rabi transfer") {
  const HilbertSpace s(5);
  const double g = 1.7;
  // Coupling g between |up down,0> and |down down,0> only.
  OperatorMatrix h{s, Eigen::MatrixXcd::Zero(s.dimension(), s.dimension())};
  const int i = s.index(Spin::up, Spin::down, 0), j = s.index(Spin::down, Spin::down, 0);
  h.entries(i, j) = g;
  h.entries(j, i) = g;
  const QuantumState psi = basis_state(s, Spin::down, Spin::down, 0);
  for (double t : {0.1, 0.4, 0.77, 1.3, 2.9}) {
    const QuantumState out = evolve(psi, h, t);
    CHECK(std::abs(std::norm(out.amplitudes[i]) - std::pow(std::sin(g * t), 2)) < 1e-10);
  }
}

TEST_CASE("number measurement") {
  const HilbertSpace s(8);
  NumberStatistics st = measure_number(basis_state(s, Spin::down, Spin::down, 1));
  CHECK(st.probabilities[1] == 1.0);
  CHECK(st.mean == 1.0);
  CHECK(st.variance == 0.0);

  const QuantumState ghz = superpose(s, {{{Spin::up, Spin::up, 0}, 1.0}, {{Spin::down, Spin::down, 2}, 1.0}});
  st = measure_number(ghz);
  CHECK(std::abs(st.probabilities[0] - 0.5) < 1e-15);
  CHECK(std::abs(st.probabilities[2] - 0.5) < 1e-15);
  CHECK(std::abs(st.mean - 1.0) < 1e-15);
  CHECK(std::abs(st.variance - 1.0) < 1e-15);
  double total = 0.0;
  for (double p : st.probabilities) total += p;
  CHECK(std::abs(total - 1.0) < 1e-12);

  const NumberStatistics a = sample_number(ghz, 20000, 42);
  const NumberStatistics b = sample_number(ghz, 20000, 42);
  CHECK(a.mean == b.mean);
  CHECK(std::abs(a.mean - 1.0) < 0.05);
}

TEST_CASE("fidelity and concurrence") {
  const HilbertSpace s(4);
  const QuantumState bell = superpose(s, {{{Spin::up, Spin::down, 0}, 1.0}, {{Spin::down, Spin::up, 0}, 1.0}});
  CHECK(std::abs(fidelity(bell, bell) - 1.0) < 1e-15);
  QuantumState rotated = bell;
  rotated.amplitudes *= std::polar(1.0, 0.7);
  CHECK(std::abs(fidelity(rotated, bell) - 1.0) < 1e-15);
  CHECK(std::abs(concurrence(bell) - 1.0) < 1e-12);
  CHECK(concurrence(basis_state(s, Spin::up, Spin::up, 0)) < 1e-12);
  const QuantumState partial = superpose(s, {{{Spin::up, Spin::down, 0}, 1.0}, {{Spin::down, Spin::up, 0}, 1.0},
                                             {{Spin::down, Spin::down, 1}, std::sqrt(2.0)}});
  CHECK(std::abs(concurrence(partial) - 0.5) < 1e-12);
  CHECK_THROWS_AS(fidelity(bell, basis_state(HilbertSpace(5), Spin::up, Spin::up, 0)), std::invalid_argument);
}

TEST_CASE("excitation number commutes with the gate Hamiltonians") {
  const HilbertSpace s(8);
  const OperatorMatrix c = excitation(s);
  const double rabi = 3.0;
  CHECK(commutator_norm(h_resonant(s, rabi), c) < 1e-12);
  CHECK(commutator_norm(h_detuned_static(s, rabi, 30.0), c) < 1e-12);
  CHECK(commutator_norm(h_free(s, 0.4), c) < 1e-12);
  CHECK(commutator_norm(h_effective_offres_all(s, rabi, 30.0), c) < 1e-12);
}

TEST_CASE("state text round trip") {
  const HilbertSpace s(6);
  QuantumState psi = superpose(s, {{{Spin::up, Spin::down, 2}, cplx(0.3, -0.1)}, {{Spin::down, Spin::down, 3}, 0.7}});
  psi = evolve(psi, h_resonant(s, 1.3), 0.77);
  const std::string text = to_text(psi);
  const QuantumState back = state_from_text(text);
  CHECK(back.space == psi.space);
  CHECK(back.amplitudes == psi.amplitudes);
  CHECK(to_text(back) == text);
  CHECK_THROWS(state_from_text("0 1 0\n"));
}
