#pragma once

#include <span>
#include <vector>

#include "penning/hilbert.hpp"

namespace penning {

/// Every data-parallel loop in the library comes in a serial reference form
/// and an OpenMP form. Both write into preallocated slots indexed by the loop
/// variable, so results are bit-identical regardless of thread count.
enum class Exec { serial, parallel };

struct FringeCurve {
  std::vector<double> phase;     // rad
  std::vector<double> mean;      // <N>
  std::vector<double> variance;  // Var N
  bool periodic = false;         // phase grid tiles [0, 2 pi) uniformly
};

/// Cell-centred grid phi_k = (k + 1/2) 2 pi / N on [0, 2 pi) with spacing <= max_step.
std::vector<double> periodic_phase_grid(double max_step);

/// True for grids produced by periodic_phase_grid (cell-centred, spanning [0, 2 pi)).
bool is_periodic_grid(std::span<const double> phases);

/// For each phase: readout * exp(-i phi a^dag a) * prepared, then the exact
/// boson-number mean and variance.
FringeCurve fringe_scan(const QuantumState& prepared, const OperatorMatrix& readout,
                        std::span<const double> phases, Exec exec = Exec::parallel);

}  // namespace penning
