#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "penning/gates.hpp"
#include "penning/hilbert.hpp"
#include "penning/kernels.hpp"

namespace penning {

/// (|up down> + |down up>)/sqrt2 (x) |0>.
QuantumState bell_target(const HilbertSpace& space);

/// (|up up>|0> + |down down>|2>)/sqrt2.
QuantumState ghz_target(const HilbertSpace& space);

struct ProtocolResult {
  QuantumState final_state;
  double target_fidelity = 0.0;
  PulseSequence sequence;
  double rabi = 0.0;
  // Named timings, stored in seconds; "*_inv_rabi" entries in units of 1/Omega.
  std::vector<std::pair<std::string, double>> metadata;
};

/// |dd>|0> -> (heralded injection) |dd>|1> -> resonant pulse of length
/// pi / (2 sqrt2 Omega), or pulse_time when given.
ProtocolResult bell_protocol(double rabi, int fock_cutoff = 8, std::optional<double> pulse_time = std::nullopt);

/// How the off-resonant segment of a composite pulse is simulated.
enum class Elimination { effective, exact };

std::string to_string(Elimination m);

struct GhzSequences {
  PulseSequence prepare;  // 1.027/Omega, pi Delta/(6 Omega^2), 1.140/Omega
  PulseSequence readout;  // 1.425/Omega, pi Delta/(6 Omega^2), 1.538/Omega
};

/// Three resonant-durations triple in units of 1/Omega: {first, middle, last}.
/// The middle entry is the off-resonant duration in 1/Omega.
using DurationTriple = std::array<double, 3>;

DurationTriple prepare_triple(double delta_over_omega);
DurationTriple readout_triple(double delta_over_omega);

PulseSequence composite_pi2(double rabi, double detuning, const DurationTriple& triple,
                            Elimination mode = Elimination::effective);

/// Throws PhysicsDomainError("adiabatic_premise") when Delta < 5 Omega.
GhzSequences ghz_pi2_sequences(double rabi, double detuning, Elimination mode = Elimination::effective);

/// Starts from |up up>|0> and applies the preparation sequence; fidelity to
/// ghz_target is |<target|psi>|^2, i.e. maximized over a global phase only.
ProtocolResult ghz_prepare(double rabi, double detuning, Elimination mode, int fock_cutoff = 8,
                           std::optional<DurationTriple> triple = std::nullopt);

struct TripleOptimum {
  DurationTriple triple;
  double fidelity = 0.0;
};

/// Compass search for the preparation triple maximizing GHZ fidelity inside
/// the box |triple_k - start_k| <= half_width (all in units of 1/Omega).
TripleOptimum optimize_ghz_triple(double rabi, double detuning, Elimination mode, const DurationTriple& start,
                                  double half_width, int fock_cutoff = 8);

struct RamseyPoint {
  double mean = 0.0;
  double variance = 0.0;
  std::vector<double> probabilities;
};

/// Preparation sequence -> free evolution at detuning free_detuning for t_free
/// -> readout sequence -> boson-number statistics.
RamseyPoint ramsey_run(double rabi, double detuning, double free_detuning, double t_free,
                       Elimination mode = Elimination::effective, int fock_cutoff = 8);

/// Fringe of the full two-electron protocol over a phase grid.
FringeCurve metrology_curve(double rabi, double detuning, std::span<const double> phases,
                            Elimination mode = Elimination::effective, int fock_cutoff = 8,
                            Exec exec = Exec::parallel);

/// Ideal pi/2 rotation on span{|up up>|0>, |down down>|2>}, identity elsewhere.
OperatorMatrix ideal_ghz_pi2(const HilbertSpace& space);

/// Fringe with the ideal GHZ state and ideal readout rotation.
FringeCurve ideal_ghz_curve(std::span<const double> phases, int fock_cutoff = 8);

/// Standard Ramsey fringe of `particles` independent spins counted together.
FringeCurve uncorrelated_ramsey_curve(int particles, std::span<const double> phases);

class DegenerateFringe : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct UncertaintyFigure {
  double figure = 0.0;         // delta omega * sqrt(T t)
  double optimal_phase = 0.0;  // rad
  std::vector<double> phase;
  std::vector<double> mean;
  std::vector<double> variance;
};

/// min over phi of sqrt(Var N) / |d<N>/dphi|, slope by central difference on
/// the grid (wrapping when the grid is periodic). Throws DegenerateFringe when
/// the slope vanishes everywhere.
UncertaintyFigure uncertainty_figure(const FringeCurve& curve);

inline constexpr double kShotNoiseFigure = 0.70710678118654752440;  // 1/sqrt2
inline constexpr double kHeisenbergFigure = 0.5;

struct PartialScanRow {
  double sqrt6_omega_t3 = 0.0;
  double t3 = 0.0;  // s
  double figure = 0.0;
  double optimal_phase = 0.0;
};

struct PartialScan {
  std::vector<PartialScanRow> rows;  // sorted by t3
  std::size_t best = 0;              // first row attaining the minimum
};

/// Cell-centred grid of `points` values of t3 over (0, 2 pi / (sqrt6 Omega)).
std::vector<double> partial_t3_grid(double rabi, int points);

/// Resonant t3 -> free phase (scanned) -> resonant 2 pi/(sqrt6 Omega) - t3 for
/// each t3. The curve is mirror-symmetric under t3 -> 2 pi/(sqrt6 Omega) - t3;
/// `best` resolves the tie toward the shorter first pulse.
PartialScan partial_protocol_scan(double rabi, std::span<const double> t3_grid, double phase_step = 1e-3,
                                  int fock_cutoff = 8, Exec exec = Exec::parallel);

/// Figure for a single t3 (shared by the scan and its serial reference).
PartialScanRow partial_protocol_point(double rabi, double t3, std::span<const double> phases, int fock_cutoff);

}  // namespace penning
