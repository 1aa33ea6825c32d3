#include "penning/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "parallel.hpp"
#include "penning/constants.hpp"

namespace penning {

std::vector<double> periodic_phase_grid(double max_step) {
  if (!(max_step > 0.0)) throw std::invalid_argument("phase step must be > 0");
  const auto n = static_cast<std::size_t>(std::ceil(kTwoPi / max_step));
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = (static_cast<double>(k) + 0.5) * kTwoPi / static_cast<double>(n);
  return g;
}

bool is_periodic_grid(std::span<const double> phases) {
  const std::size_t n = phases.size();
  if (n < 2) return false;
  const double step = kTwoPi / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(phases[k] - (static_cast<double>(k) + 0.5) * step) > 1e-9 * step) return false;
  }
  return true;
}

FringeCurve fringe_scan(const QuantumState& prepared, const OperatorMatrix& readout,
                        std::span<const double> phases, Exec exec) {
  if (!(prepared.space == readout.space)) throw std::invalid_argument("fringe_scan: space mismatch");
  const auto n = static_cast<std::ptrdiff_t>(phases.size());
  FringeCurve c;
  c.phase.assign(phases.begin(), phases.end());
  c.mean.assign(phases.size(), 0.0);
  c.variance.assign(phases.size(), 0.0);
  const int levels = prepared.space.levels();
  const Eigen::Index dim = prepared.amplitudes.size();

  detail::for_each_index(n, exec, [&](std::ptrdiff_t i) {
    Eigen::VectorXcd shifted(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      shifted[k] = prepared.amplitudes[k] * std::polar(1.0, -phases[i] * static_cast<double>(k % levels));
    }
    const Eigen::VectorXcd out = readout.entries * shifted;
    std::vector<double> p(levels, 0.0);
    for (Eigen::Index k = 0; k < dim; ++k) p[k % levels] += std::norm(out[k]);
    double mean = 0.0;
    for (int m = 0; m < levels; ++m) mean += m * p[m];
    double var = 0.0;
    for (int m = 0; m < levels; ++m) var += p[m] * (m - mean) * (m - mean);
    c.mean[i] = mean;
    c.variance[i] = var;
  });

  c.periodic = is_periodic_grid(phases);
  return c;
}

}  // namespace penning
