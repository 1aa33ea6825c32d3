#include "penning/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "parallel.hpp"
#include "penning/constants.hpp"

namespace penning {
namespace {

using cplx = std::complex<double>;

struct Windowed {
  std::vector<cplx> data;
  double dt = 0.0;
};

Windowed prepare(std::span<const cplx> samples, double dt) {
  const std::size_t n = samples.size();
  if (n < 8) throw std::invalid_argument("spectral estimate needs at least 8 samples");
  if (!(dt > 0.0)) throw std::invalid_argument("sample interval must be > 0");
  cplx mean = 0.0;
  for (const auto& s : samples) mean += s;
  mean /= static_cast<double>(n);
  Windowed w{std::vector<cplx>(n), dt};
  for (std::size_t k = 0; k < n; ++k) {
    const double hann = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(k) / static_cast<double>(n - 1));
    w.data[k] = (samples[k] - mean) * hann;
  }
  return w;
}

// |sum_k x_k exp(-i w t_k)| with a rotating phasor, re-anchored every block.
double power(const Windowed& w, double omega) {
  const cplx step = std::polar(1.0, -omega * w.dt);
  cplx acc = 0.0;
  cplx phasor = 1.0;
  constexpr std::size_t kBlock = 256;
  for (std::size_t k = 0; k < w.data.size(); ++k) {
    if (k % kBlock == 0) phasor = std::polar(1.0, -omega * w.dt * static_cast<double>(k));
    acc += w.data[k] * phasor;
    phasor *= step;
  }
  return std::norm(acc);
}

double peak(std::span<const cplx> samples, double dt, double lo, double hi, Exec exec) {
  if (!(hi > lo)) throw std::invalid_argument("frequency band must satisfy omega_hi > omega_lo");
  const Windowed w = prepare(samples, dt);
  const double span = dt * static_cast<double>(samples.size());
  const double resolution = kTwoPi / span;
  const auto points = static_cast<std::ptrdiff_t>(std::max(64.0, std::ceil(8.0 * (hi - lo) / resolution))) + 1;
  const double h = (hi - lo) / static_cast<double>(points - 1);
  std::vector<double> p(points);
  detail::for_each_index(points, exec, [&](std::ptrdiff_t i) { p[i] = power(w, lo + h * static_cast<double>(i)); });
  const auto best = std::max_element(p.begin(), p.end()) - p.begin();

  double a = std::max(lo, lo + h * static_cast<double>(best - 1));
  double b = std::min(hi, lo + h * static_cast<double>(best + 1));
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = power(w, c);
  double fd = power(w, d);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * std::abs(b) + 1e-300; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = power(w, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = power(w, d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double dominant_frequency(std::span<const double> samples, double dt, double omega_lo, double omega_hi, Exec exec) {
  std::vector<cplx> z(samples.begin(), samples.end());
  return peak(z, dt, omega_lo, omega_hi, exec);
}

double dominant_frequency(std::span<const std::complex<double>> samples, double dt, double omega_lo,
                          double omega_hi, Exec exec) {
  return peak(samples, dt, omega_lo, omega_hi, exec);
}

}  // namespace penning
