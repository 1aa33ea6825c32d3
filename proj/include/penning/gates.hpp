#pragma once

#include <string>
#include <vector>

#include "penning/hilbert.hpp"

namespace penning {

/// Omega * sum_i (sigma_i^+ a + sigma_i^- a^dag), in rad/s.
OperatorMatrix h_resonant(const HilbertSpace& space, double rabi);

/// Delta a^dag a + Omega * sum_i (sigma_i^+ a + sigma_i^- a^dag).
///
/// Time-independent form of the detuned interaction-picture Hamiltonian
/// Omega sum_i (sigma_i^+ a e^{-i Delta t} + h.c.). If phi(t) evolves under this
/// operator, the interaction-picture state is psi(t) = exp(i Delta t a^dag a) phi(t),
/// with phi(0) = psi(0) when t is measured from the start of the pulse.
OperatorMatrix h_detuned_static(const HilbertSpace& space, double rabi, double detuning);

/// Adiabatically eliminated off-resonant Hamiltonian restricted to Fock level n:
///   (Omega^2/Delta) sum_{i,j} [ -(n+1) sigma_i^+ sigma_j^- + n sigma_i^- sigma_j^+ ] (x) |n><n|
/// The double sum runs over all ordered pairs, i = j included.
OperatorMatrix h_effective_offres(const HilbertSpace& space, double rabi, double detuning, int n);

/// Sum of h_effective_offres over every Fock level: each level sees its own n.
OperatorMatrix h_effective_offres_all(const HilbertSpace& space, double rabi, double detuning);

/// delta_omega * a^dag a. Equal to the free anomaly precession up to a global
/// phase on any eigenstate of the excitation number.
OperatorMatrix h_free(const HilbertSpace& space, double free_detuning);

/// Multiplies Fock level n by exp(i Delta t n): static detuned frame -> interaction picture.
QuantumState detuned_frame_to_interaction(const QuantumState& state, double detuning, double t);
QuantumState interaction_to_detuned_frame(const QuantumState& state, double detuning, double t);

enum class PulseKind { resonant_tc, detuned_tc_exact, off_resonant_effective, free_evolution };

std::string to_string(PulseKind k);
PulseKind pulse_kind_from_string(const std::string& s);

struct PulseSpec {
  PulseKind kind = PulseKind::resonant_tc;
  double duration = 0.0;       // s
  double rabi = 0.0;           // rad/s, TC kinds
  double detuning = 0.0;       // rad/s, detuned/effective kinds
  double free_detuning = 0.0;  // rad/s, free evolution

  static PulseSpec resonant(double rabi, double duration);
  static PulseSpec detuned_exact(double rabi, double detuning, double duration);
  static PulseSpec effective(double rabi, double detuning, double duration);
  static PulseSpec free(double free_detuning, double duration);

  bool operator==(const PulseSpec&) const = default;
};

/// Minimum |Delta|/Omega accepted by off_resonant_effective pulses.
inline constexpr double kAdiabaticMinRatio = 5.0;

/// Throws std::invalid_argument for negative/non-finite durations and
/// PhysicsDomainError("adiabatic_premise") when an effective pulse has |Delta| < 5 Omega.
void validate(const PulseSpec& pulse);

struct PulseSequence {
  std::vector<PulseSpec> pulses;

  double total_duration() const;
  bool operator==(const PulseSequence&) const = default;
};

/// Interaction-picture propagator of one pulse, drive phase zero at the pulse start.
OperatorMatrix pulse_propagator(const HilbertSpace& space, const PulseSpec& pulse);

QuantumState apply_pulse(const QuantumState& state, const PulseSpec& pulse);
QuantumState apply_sequence(const QuantumState& state, const PulseSequence& seq);

/// Product of the pulse propagators, last pulse leftmost.
OperatorMatrix sequence_propagator(const HilbertSpace& space, const PulseSequence& seq);

/// Text form, durations and frequencies in units of the reference Rabi frequency:
///
///   # pulse-sequence v1
///   rabi <Omega in rad/s>
///   <kind> <duration*Omega> <Delta/Omega> <delta_omega/Omega> <rabi/Omega>
std::string to_text(const PulseSequence& seq, double reference_rabi);
PulseSequence sequence_from_text(const std::string& text);

}  // namespace penning
