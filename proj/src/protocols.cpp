#include "penning/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "parallel.hpp"
#include "penning/constants.hpp"
#include "penning/errors.hpp"
#include "penning/protocol_constants.hpp"

namespace penning {
namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt6 = std::sqrt(6.0);

void require_positive_rabi(double rabi) {
  if (!(rabi > 0.0) || !std::isfinite(rabi)) throw std::invalid_argument("rabi frequency must be > 0");
}

void require_adiabatic(double rabi, double detuning) {
  if (!(detuning >= kAdiabaticMinRatio * rabi)) {
    std::ostringstream os;
    os << "composite pi/2 pulses need Delta >= " << kAdiabaticMinRatio << " Omega (Delta/Omega = "
       << detuning / rabi << ")";
    throw PhysicsDomainError("adiabatic_premise", os.str());
  }
}

void add_sequence_metadata(ProtocolResult& r, const std::string& prefix) {
  for (std::size_t k = 0; k < r.sequence.pulses.size(); ++k) {
    const double t = r.sequence.pulses[k].duration;
    r.metadata.emplace_back(prefix + std::to_string(k) + "_s", t);
    r.metadata.emplace_back(prefix + std::to_string(k) + "_inv_rabi", t * r.rabi);
  }
  r.metadata.emplace_back("total_s", r.sequence.total_duration());
  r.metadata.emplace_back("total_inv_rabi", r.sequence.total_duration() * r.rabi);
}

}  // namespace

QuantumState bell_target(const HilbertSpace& space) {
  return superpose(space, {{{Spin::up, Spin::down, 0}, 1.0}, {{Spin::down, Spin::up, 0}, 1.0}});
}

QuantumState ghz_target(const HilbertSpace& space) {
  return superpose(space, {{{Spin::up, Spin::up, 0}, 1.0}, {{Spin::down, Spin::down, 2}, 1.0}});
}

ProtocolResult bell_protocol(double rabi, int fock_cutoff, std::optional<double> pulse_time) {
  require_positive_rabi(rabi);
  const HilbertSpace space(fock_cutoff);
  // The heralded one-quantum injection is taken as ideal: |dd>|0> -> |dd>|1>.
  const QuantumState injected = basis_state(space, Spin::down, Spin::down, 1);
  ProtocolResult r{injected, 0.0, {}, rabi, {}};
  const double t = pulse_time.value_or(kPi / (2.0 * kSqrt2 * rabi));
  r.sequence.pulses.push_back(PulseSpec::resonant(rabi, t));
  r.final_state = apply_sequence(injected, r.sequence);
  r.target_fidelity = std::clamp(fidelity(r.final_state, bell_target(space)), 0.0, 1.0);
  add_sequence_metadata(r, "pulse");
  return r;
}

std::string to_string(Elimination m) { return m == Elimination::effective ? "effective" : "exact"; }

DurationTriple prepare_triple(double delta_over_omega) {
  return {durations::kPrepareFirst, durations::off_resonant(delta_over_omega), durations::kPrepareLast};
}

DurationTriple readout_triple(double delta_over_omega) {
  return {durations::kReadoutFirst, durations::off_resonant(delta_over_omega), durations::kReadoutLast};
}

PulseSequence composite_pi2(double rabi, double detuning, const DurationTriple& triple, Elimination mode) {
  require_positive_rabi(rabi);
  PulseSequence s;
  s.pulses.push_back(PulseSpec::resonant(rabi, triple[0] / rabi));
  const double middle = triple[1] / rabi;
  s.pulses.push_back(mode == Elimination::effective ? PulseSpec::effective(rabi, detuning, middle)
                                                    : PulseSpec::detuned_exact(rabi, detuning, middle));
  s.pulses.push_back(PulseSpec::resonant(rabi, triple[2] / rabi));
  return s;
}

GhzSequences ghz_pi2_sequences(double rabi, double detuning, Elimination mode) {
  require_positive_rabi(rabi);
  require_adiabatic(rabi, detuning);
  const double ratio = detuning / rabi;
  GhzSequences g;
  g.prepare = composite_pi2(rabi, detuning, prepare_triple(ratio), mode);
  g.readout = composite_pi2(rabi, detuning, readout_triple(ratio), mode);
  // pi Delta / (6 Omega^2) directly, not via the ratio.
  g.prepare.pulses[1].duration = kPi * detuning / (6.0 * rabi * rabi);
  g.readout.pulses[1].duration = g.prepare.pulses[1].duration;
  return g;
}

ProtocolResult ghz_prepare(double rabi, double detuning, Elimination mode, int fock_cutoff,
                           std::optional<DurationTriple> triple) {
  const GhzSequences seqs = ghz_pi2_sequences(rabi, detuning, mode);
  const HilbertSpace space(fock_cutoff);
  const QuantumState initial = basis_state(space, Spin::up, Spin::up, 0);
  ProtocolResult r{initial, 0.0, seqs.prepare, rabi, {}};
  if (triple) r.sequence = composite_pi2(rabi, detuning, *triple, mode);
  r.final_state = apply_sequence(initial, r.sequence);
  r.target_fidelity = std::clamp(fidelity(r.final_state, ghz_target(space)), 0.0, 1.0);
  add_sequence_metadata(r, "pulse");
  return r;
}

TripleOptimum optimize_ghz_triple(double rabi, double detuning, Elimination mode, const DurationTriple& start,
                                  double half_width, int fock_cutoff) {
  auto score = [&](const DurationTriple& t) { return ghz_prepare(rabi, detuning, mode, fock_cutoff, t).target_fidelity; };
  TripleOptimum best{start, score(start)};
  double step = 0.5 * half_width;
  while (step > 1e-7 * std::max(1.0, half_width)) {
    bool improved = false;
    for (int k = 0; k < 3; ++k) {
      for (double sign : {1.0, -1.0}) {
        DurationTriple trial = best.triple;
        trial[k] = std::clamp(trial[k] + sign * step, start[k] - half_width, start[k] + half_width);
        if (trial[k] == best.triple[k]) continue;
        const double f = score(trial);
        if (f > best.fidelity) {
          best = {trial, f};
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

RamseyPoint ramsey_run(double rabi, double detuning, double free_detuning, double t_free, Elimination mode,
                       int fock_cutoff) {
  const GhzSequences seqs = ghz_pi2_sequences(rabi, detuning, mode);
  const HilbertSpace space(fock_cutoff);
  PulseSequence all = seqs.prepare;
  all.pulses.push_back(PulseSpec::free(free_detuning, t_free));
  all.pulses.insert(all.pulses.end(), seqs.readout.pulses.begin(), seqs.readout.pulses.end());
  const QuantumState out = apply_sequence(basis_state(space, Spin::up, Spin::up, 0), all);
  const NumberStatistics st = measure_number(out);
  return {st.mean, st.variance, st.probabilities};
}

FringeCurve metrology_curve(double rabi, double detuning, std::span<const double> phases, Elimination mode,
                            int fock_cutoff, Exec exec) {
  const GhzSequences seqs = ghz_pi2_sequences(rabi, detuning, mode);
  const HilbertSpace space(fock_cutoff);
  const QuantumState prepared = apply_sequence(basis_state(space, Spin::up, Spin::up, 0), seqs.prepare);
  return fringe_scan(prepared, sequence_propagator(space, seqs.readout), phases, exec);
}

OperatorMatrix ideal_ghz_pi2(const HilbertSpace& space) {
  OperatorMatrix u = identity(space);
  const int a = space.index(Spin::up, Spin::up, 0);
  const int b = space.index(Spin::down, Spin::down, 2);
  const double h = 1.0 / kSqrt2;
  u.entries(a, a) = h;
  u.entries(b, a) = h;
  u.entries(a, b) = -h;
  u.entries(b, b) = h;
  return u;
}

FringeCurve ideal_ghz_curve(std::span<const double> phases, int fock_cutoff) {
  const HilbertSpace space(fock_cutoff);
  return fringe_scan(ghz_target(space), ideal_ghz_pi2(space), phases, Exec::serial);
}

FringeCurve uncorrelated_ramsey_curve(int particles, std::span<const double> phases) {
  if (particles < 1) throw std::invalid_argument("particles must be >= 1");
  FringeCurve c;
  c.phase.assign(phases.begin(), phases.end());
  // pi/2 about x on (down, up), free phase on up, pi/2 about x; start in down.
  const cplx i(0.0, 1.0);
  for (double phi : phases) {
    const cplx down1 = 1.0 / kSqrt2;
    const cplx up1 = -i / kSqrt2 * std::polar(1.0, -phi);
    const cplx up2 = (-i * down1 + up1) / kSqrt2;
    const double p = std::norm(up2);
    c.mean.push_back(particles * p);
    c.variance.push_back(particles * p * (1.0 - p));
  }
  c.periodic = is_periodic_grid(phases);
  return c;
}

UncertaintyFigure uncertainty_figure(const FringeCurve& curve) {
  const std::size_t n = curve.phase.size();
  if (n < 3 || curve.mean.size() != n || curve.variance.size() != n) {
    throw std::invalid_argument("fringe curve needs >= 3 consistent samples");
  }
  std::vector<double> slope(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t lo = k - 1;
    std::size_t hi = k + 1;
    double span = 0.0;
    if (k == 0 || k + 1 == n) {
      if (!curve.periodic) continue;
      lo = (k + n - 1) % n;
      hi = (k + 1) % n;
      span = curve.phase[hi] - curve.phase[lo] + kTwoPi;
    } else {
      span = curve.phase[hi] - curve.phase[lo];
    }
    slope[k] = (curve.mean[hi] - curve.mean[lo]) / span;
  }
  double max_slope = 0.0;
  for (double s : slope) {
    if (std::isfinite(s)) max_slope = std::max(max_slope, std::abs(s));
  }
  if (!(max_slope > 1e-12)) throw DegenerateFringe("fringe has zero slope everywhere");

  UncertaintyFigure u;
  u.figure = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(slope[k]) || std::abs(slope[k]) <= 1e-12 * max_slope) continue;
    const double f = std::sqrt(std::max(curve.variance[k], 0.0)) / std::abs(slope[k]);
    if (f < u.figure) {
      u.figure = f;
      u.optimal_phase = curve.phase[k];
    }
  }
  u.phase = curve.phase;
  u.mean = curve.mean;
  u.variance = curve.variance;
  return u;
}

std::vector<double> partial_t3_grid(double rabi, int points) {
  require_positive_rabi(rabi);
  if (points < 1) throw std::invalid_argument("t3 grid needs >= 1 point");
  std::vector<double> g(points);
  for (int k = 0; k < points; ++k) g[k] = (k + 0.5) * kTwoPi / points / (kSqrt6 * rabi);
  return g;
}

PartialScanRow partial_protocol_point(double rabi, double t3, std::span<const double> phases, int fock_cutoff) {
  require_positive_rabi(rabi);
  const double cycle = kTwoPi / (kSqrt6 * rabi);
  if (!(t3 > 0.0 && t3 < cycle)) {
    throw std::out_of_range("t3 must lie in (0, 2 pi/(sqrt6 Omega))");
  }
  const HilbertSpace space(fock_cutoff);
  const OperatorMatrix h = h_resonant(space, rabi);
  const QuantumState prepared = evolve(basis_state(space, Spin::up, Spin::up, 0), h, t3);
  const OperatorMatrix readout = propagator(h, cycle - t3);
  const UncertaintyFigure u = uncertainty_figure(fringe_scan(prepared, readout, phases, Exec::serial));
  return {kSqrt6 * rabi * t3, t3, u.figure, u.optimal_phase};
}

PartialScan partial_protocol_scan(double rabi, std::span<const double> t3_grid, double phase_step, int fock_cutoff,
                                  Exec exec) {
  std::vector<double> t3(t3_grid.begin(), t3_grid.end());
  std::sort(t3.begin(), t3.end());
  const std::vector<double> phases = periodic_phase_grid(phase_step);
  PartialScan scan;
  scan.rows.resize(t3.size());
  detail::for_each_index(static_cast<std::ptrdiff_t>(t3.size()), exec, [&](std::ptrdiff_t i) {
    scan.rows[i] = partial_protocol_point(rabi, t3[i], phases, fock_cutoff);
  });
  if (scan.rows.empty()) return scan;
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& r : scan.rows) lowest = std::min(lowest, r.figure);
  for (std::size_t k = 0; k < scan.rows.size(); ++k) {
    if (scan.rows[k].figure <= lowest * (1.0 + 1e-9)) {
      scan.best = k;
      break;
    }
  }
  return scan;
}

}  // namespace penning
