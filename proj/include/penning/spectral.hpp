#pragma once

#include <complex>
#include <span>

#include "penning/kernels.hpp"

namespace penning {

/// Angular frequency of the strongest spectral line of a uniformly sampled
/// signal inside [omega_lo, omega_hi]. Hann-windowed DFT on a grid eight times
/// finer than the Fourier resolution, then golden-section refinement of the peak.
double dominant_frequency(std::span<const double> samples, double dt, double omega_lo, double omega_hi,
                          Exec exec = Exec::parallel);

/// Same for a complex signal such as x + i y. A signal rotating counterclockwise
/// exp(+i w t) peaks at +w; negative bands resolve clockwise rotation.
double dominant_frequency(std::span<const std::complex<double>> samples, double dt, double omega_lo,
                          double omega_hi, Exec exec = Exec::parallel);

}  // namespace penning
