#include "doctest.h"

#include <cmath>

#include "penning/errors.hpp"
#include "penning/gates.hpp"
#include "penning/protocols.hpp"

using namespace penning;

namespace {

// Omega sum_i (sigma_i^+ a e^{-i Delta t} + h.c.): the time-dependent gate
// Hamiltonian in the interaction picture.
OperatorMatrix h_interaction(const HilbertSpace& s, double rabi, double detuning, double t) {
  const LadderOps a = ladder_ops(s);
  const cplx ph = std::polar(1.0, -detuning * t);
  OperatorMatrix h{s, Eigen::MatrixXcd::Zero(s.dimension(), s.dimension())};
  for (int i = 0; i < 2; ++i) {
    const SpinOps sp = spin_ops(s, i);
    h.entries += rabi * (ph * sp.raise.entries * a.lower.entries + std::conj(ph) * sp.lower.entries * a.raise.entries);
  }
  return h;
}

// Fourth-order commutator-free product of exponentials at Gauss nodes.
QuantumState time_ordered(QuantumState psi, double rabi, double detuning, double duration, int steps) {
  const double h = duration / steps;
  const double r3 = std::sqrt(3.0);
  const double c1 = 0.5 - r3 / 6.0, c2 = 0.5 + r3 / 6.0;
  const double a1 = 0.25 + r3 / 6.0, a2 = 0.25 - r3 / 6.0;
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const OperatorMatrix h1 = h_interaction(psi.space, rabi, detuning, t + c1 * h);
    const OperatorMatrix h2 = h_interaction(psi.space, rabi, detuning, t + c2 * h);
    const OperatorMatrix first{psi.space, a1 * h1.entries + a2 * h2.entries};
    const OperatorMatrix second{psi.space, a2 * h1.entries + a1 * h2.entries};
    psi = evolve(psi, first, h);
    psi = evolve(psi, second, h);
  }
  return psi;
}

double infidelity_exact_vs_effective(double ratio) {
  const HilbertSpace s(8);
  const QuantumState psi = basis_state(s, Spin::up, Spin::up, 0);
  const double t = M_PI * ratio / 6.0;
  const QuantumState a = apply_pulse(psi, PulseSpec::detuned_exact(1.0, ratio, t));
  const QuantumState b = apply_pulse(psi, PulseSpec::effective(1.0, ratio, t));
  return 1.0 - fidelity(a, b);
}

}  // namespace

TEST_CASE("resonant Hamiltonian") {
  const HilbertSpace s(6);
  const double rabi = 2.3;
  const OperatorMatrix h = h_resonant(s, rabi);
  CHECK(hermiticity_defect(h) < 1e-12);
  const QuantumState bell = bell_target(s);
  const QuantumState in = basis_state(s, Spin::down, Spin::down, 1);
  const cplx element = bell.amplitudes.dot(h.entries * in.amplitudes);
  CHECK(std::abs(element - cplx(std::sqrt(2.0) * rabi)) < 1e-14);
  CHECK(h_detuned_static(s, rabi, 0.0).entries == h.entries);
}

TEST_CASE("detuned static frame matches time-ordered evolution") {
  const HilbertSpace s(4);
  const double rabi = 1.0, detuning = 10.0, duration = 1.3;
  const QuantumState psi = superpose(s, {{{Spin::up, Spin::up, 0}, 1.0}, {{Spin::down, Spin::up, 1}, cplx(0.2, 0.5)}});
  const QuantumState oracle = time_ordered(psi, rabi, detuning, duration, 4000);
  const QuantumState exact = apply_pulse(psi, PulseSpec::detuned_exact(rabi, detuning, duration));
  CHECK((exact.amplitudes - oracle.amplitudes).norm() < 1e-8);

  const OperatorMatrix h = h_detuned_static(s, rabi, detuning);
  const QuantumState via_frame = detuned_frame_to_interaction(evolve(psi, h, duration), detuning, duration);
  CHECK((via_frame.amplitudes - oracle.amplitudes).norm() < 1e-8);
  const QuantumState back = interaction_to_detuned_frame(via_frame, detuning, duration);
  CHECK((back.amplitudes - evolve(psi, h, duration).amplitudes).norm() < 1e-14);
}

TEST_CASE("effective off-resonant Hamiltonian") {
  const HilbertSpace s(6);
  const double rabi = 1.0, detuning = 20.0;
  const OperatorMatrix h0 = h_effective_offres(s, rabi, detuning, 0);
  CHECK(hermiticity_defect(h0) < 1e-12);
  const int ud = s.index(Spin::up, Spin::down, 0), du = s.index(Spin::down, Spin::up, 0);
  CHECK(std::abs(std::abs(h0.entries(ud, du)) - rabi * rabi / detuning) < 1e-15);
  const QuantumState dd = basis_state(s, Spin::down, Spin::down, 0);
  CHECK((h0.entries * dd.amplitudes).norm() == 0.0);
  CHECK(hermiticity_defect(h_effective_offres_all(s, rabi, detuning)) < 1e-12);
  CHECK_THROWS_AS(h_effective_offres(s, rabi, 0.0, 0), std::invalid_argument);
  // Only the selected Fock level is touched.
  const QuantumState other = basis_state(s, Spin::up, Spin::down, 1);
  CHECK((h0.entries * other.amplitudes).norm() == 0.0);
}

TEST_CASE("effective elimination error shrinks as (Omega/Delta)^2") {
  const double at50 = infidelity_exact_vs_effective(50.0);
  const double at100 = infidelity_exact_vs_effective(100.0);
  CHECK(at50 < 5e-3);
  CHECK(at100 / at50 == doctest::Approx(0.25).epsilon(0.3));
}

TEST_CASE("free evolution") {
  const HilbertSpace s(6);
  const double dw = 0.37, t = 2.1;
  const QuantumState ghz = ghz_target(s);
  const QuantumState out = evolve(ghz, h_free(s, dw), t);
  const cplx up = out.amplitudes[s.index(Spin::up, Spin::up, 0)];
  const cplx down = out.amplitudes[s.index(Spin::down, Spin::down, 2)];
  CHECK(std::abs(std::arg(up / down) - std::remainder(2.0 * dw * t, 2.0 * M_PI)) < 1e-12);

  const QuantumState bell = bell_target(s);
  CHECK(std::abs(fidelity(evolve(bell, h_free(s, dw), t), bell) - 1.0) < 1e-14);
  CHECK(evolve(bell, h_free(s, 0.0), t).amplitudes == bell.amplitudes);
}

TEST_CASE("pulse validation") {
  try {
    validate(PulseSpec::effective(1.0, 4.0, 1.0));
    FAIL("expected adiabatic premise error");
  } catch (const PhysicsDomainError& e) {
    CHECK(e.kind() == "adiabatic_premise");
  }
  CHECK_THROWS_AS(validate(PulseSpec::resonant(1.0, -1.0)), std::invalid_argument);
  CHECK_NOTHROW(validate(PulseSpec::effective(1.0, 5.0, 1.0)));
}

TEST_CASE("propagators of every pulse kind are unitary and conserve excitation") {
  const HilbertSpace s(8);
  const OperatorMatrix c = excitation_number(s);
  for (const PulseSpec& p : {PulseSpec::resonant(1.0, 0.7), PulseSpec::detuned_exact(1.0, 10.0, 5.2),
                             PulseSpec::effective(1.0, 10.0, 5.2), PulseSpec::free(0.3, 1.9)}) {
    const OperatorMatrix u = pulse_propagator(s, p);
    CHECK(unitarity_defect(u) < 1e-12);
    CHECK(commutator_norm(u, c) < 1e-12);
  }
}

TEST_CASE("sequences") {
  const HilbertSpace s(6);
  const QuantumState psi = basis_state(s, Spin::down, Spin::down, 1);
  PulseSequence zero{{PulseSpec::resonant(1.0, 0.0), PulseSpec::free(0.5, 0.0)}};
  CHECK(apply_sequence(psi, zero).amplitudes == psi.amplitudes);

  PulseSequence bell{{PulseSpec::resonant(1.0, M_PI / (2.0 * std::sqrt(2.0)))}};
  CHECK(fidelity(apply_sequence(psi, bell), bell_target(s)) >= 1.0 - 1e-9);

  const PulseSequence a{{PulseSpec::resonant(1.0, 0.3), PulseSpec::detuned_exact(1.0, 10.0, 0.8)}};
  const PulseSequence b{{PulseSpec::effective(1.0, 10.0, 1.1), PulseSpec::free(0.2, 0.4)}};
  PulseSequence ab = a;
  ab.pulses.insert(ab.pulses.end(), b.pulses.begin(), b.pulses.end());
  const Eigen::MatrixXcd composed = sequence_propagator(s, b).entries * sequence_propagator(s, a).entries;
  CHECK((sequence_propagator(s, ab).entries - composed).norm() < 1e-10);
  CHECK(ab.total_duration() == doctest::Approx(2.6));
}

TEST_CASE("pulse sequence text round trip") {
  const double rabi = 2.0 * M_PI * 11.956566201308481;
  const GhzSequences g = ghz_pi2_sequences(rabi, 10.0 * rabi);
  for (const PulseSequence* seq : {&g.prepare, &g.readout}) {
    const std::string text = to_text(*seq, rabi);
    const PulseSequence back = sequence_from_text(text);
    CHECK(to_text(back, rabi) == text);
    REQUIRE(back.pulses.size() == seq->pulses.size());
    for (std::size_t k = 0; k < back.pulses.size(); ++k) {
      CHECK(back.pulses[k].kind == seq->pulses[k].kind);
      CHECK(back.pulses[k].duration == doctest::Approx(seq->pulses[k].duration).epsilon(1e-15));
    }
  }
  const PulseSequence simple{{PulseSpec::resonant(2.0, 0.5), PulseSpec::free(1.0, 0.25)}};
  CHECK(sequence_from_text(to_text(simple, 2.0)) == simple);
  CHECK_THROWS(sequence_from_text("resonant 1 0 0 1\n"));
  CHECK_THROWS(sequence_from_text("rabi 1\nwobble 1 0 0 1\n"));
}
