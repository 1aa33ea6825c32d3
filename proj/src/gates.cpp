#include "penning/gates.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "penning/errors.hpp"

namespace penning {
namespace {

OperatorMatrix tavis_cummings(const HilbertSpace& space, double rabi) {
  const LadderOps boson = ladder_ops(space);
  OperatorMatrix h{space, Eigen::MatrixXcd::Zero(space.dimension(), space.dimension())};
  for (int i = 0; i < 2; ++i) {
    const SpinOps s = spin_ops(space, i);
    h.entries += s.raise.entries * boson.lower.entries + s.lower.entries * boson.raise.entries;
  }
  h.entries *= rabi;
  return h;
}

QuantumState fock_phase(const QuantumState& state, double angle_per_quantum) {
  QuantumState out = state;
  const int levels = state.space.levels();
  for (Eigen::Index i = 0; i < out.amplitudes.size(); ++i) {
    out.amplitudes[i] *= std::polar(1.0, angle_per_quantum * static_cast<double>(i % levels));
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse(const std::string& s) {
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad number in pulse sequence: " + s);
  }
  return v;
}

// Dimensionless value x ~ value * scale such that re-parsing and re-scaling
// reproduces x exactly; keeps the text form a fixed point of parse/format.
double stable_scaled(double value, double scale) {
  double x = value * scale;
  for (int k = 0; k < 8; ++k) {
    const double back = (x / scale) * scale;
    if (back == x) break;
    x = back;
  }
  return x;
}

}  // namespace

OperatorMatrix h_resonant(const HilbertSpace& space, double rabi) {
  if (rabi < 0.0) throw std::invalid_argument("rabi frequency must be >= 0");
  return tavis_cummings(space, rabi);
}

OperatorMatrix h_detuned_static(const HilbertSpace& space, double rabi, double detuning) {
  OperatorMatrix h = h_resonant(space, rabi);
  h.entries += detuning * ladder_ops(space).number.entries;
  return h;
}

OperatorMatrix h_effective_offres(const HilbertSpace& space, double rabi, double detuning, int n) {
  if (detuning == 0.0) throw std::invalid_argument("effective Hamiltonian needs a nonzero detuning");
  if (n < 0 || n > space.fock_cutoff()) throw std::out_of_range("Fock label outside the truncated space");
  const int d = space.dimension();
  Eigen::MatrixXcd spin_part = Eigen::MatrixXcd::Zero(d, d);
  const SpinOps s[2] = {spin_ops(space, 0), spin_ops(space, 1)};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      spin_part += -(n + 1.0) * s[i].raise.entries * s[j].lower.entries +
                   static_cast<double>(n) * s[i].lower.entries * s[j].raise.entries;
    }
  }
  Eigen::MatrixXcd projector = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    if (k % space.levels() == n) projector(k, k) = 1.0;
  }
  return {space, (rabi * rabi / detuning) * spin_part * projector};
}

OperatorMatrix h_effective_offres_all(const HilbertSpace& space, double rabi, double detuning) {
  OperatorMatrix h{space, Eigen::MatrixXcd::Zero(space.dimension(), space.dimension())};
  for (int n = 0; n <= space.fock_cutoff(); ++n) h.entries += h_effective_offres(space, rabi, detuning, n).entries;
  return h;
}

OperatorMatrix h_free(const HilbertSpace& space, double free_detuning) {
  OperatorMatrix h = ladder_ops(space).number;
  h.entries *= free_detuning;
  return h;
}

QuantumState detuned_frame_to_interaction(const QuantumState& state, double detuning, double t) {
  return fock_phase(state, detuning * t);
}

QuantumState interaction_to_detuned_frame(const QuantumState& state, double detuning, double t) {
  return fock_phase(state, -detuning * t);
}

std::string to_string(PulseKind k) {
  switch (k) {
    case PulseKind::resonant_tc: return "resonant";
    case PulseKind::detuned_tc_exact: return "detuned_exact";
    case PulseKind::off_resonant_effective: return "effective";
    case PulseKind::free_evolution: return "free";
  }
  return "?";
}

PulseKind pulse_kind_from_string(const std::string& s) {
  if (s == "resonant") return PulseKind::resonant_tc;
  if (s == "detuned_exact") return PulseKind::detuned_tc_exact;
  if (s == "effective") return PulseKind::off_resonant_effective;
  if (s == "free") return PulseKind::free_evolution;
  throw std::invalid_argument("unknown pulse kind: " + s);
}

PulseSpec PulseSpec::resonant(double rabi, double duration) {
  return {PulseKind::resonant_tc, duration, rabi, 0.0, 0.0};
}

PulseSpec PulseSpec::detuned_exact(double rabi, double detuning, double duration) {
  return {PulseKind::detuned_tc_exact, duration, rabi, detuning, 0.0};
}

PulseSpec PulseSpec::effective(double rabi, double detuning, double duration) {
  return {PulseKind::off_resonant_effective, duration, rabi, detuning, 0.0};
}

PulseSpec PulseSpec::free(double free_detuning, double duration) {
  return {PulseKind::free_evolution, duration, 0.0, 0.0, free_detuning};
}

void validate(const PulseSpec& p) {
  if (!std::isfinite(p.duration) || p.duration < 0.0) {
    throw std::invalid_argument("pulse duration must be finite and >= 0");
  }
  if (!std::isfinite(p.rabi) || !std::isfinite(p.detuning) || !std::isfinite(p.free_detuning)) {
    throw std::invalid_argument("pulse frequencies must be finite");
  }
  if (p.kind != PulseKind::free_evolution && p.rabi < 0.0) {
    throw std::invalid_argument("rabi frequency must be >= 0");
  }
  if (p.kind == PulseKind::off_resonant_effective && !(std::abs(p.detuning) >= kAdiabaticMinRatio * p.rabi)) {
    std::ostringstream os;
    os << "effective off-resonant pulse needs |Delta| >= " << kAdiabaticMinRatio << " Omega (Delta/Omega = "
       << p.detuning / p.rabi << ")";
    throw PhysicsDomainError("adiabatic_premise", os.str());
  }
}

double PulseSequence::total_duration() const {
  double t = 0.0;
  for (const auto& p : pulses) t += p.duration;
  return t;
}

OperatorMatrix pulse_propagator(const HilbertSpace& space, const PulseSpec& p) {
  validate(p);
  switch (p.kind) {
    case PulseKind::resonant_tc:
      return propagator(h_resonant(space, p.rabi), p.duration);
    case PulseKind::detuned_tc_exact: {
      OperatorMatrix u = propagator(h_detuned_static(space, p.rabi, p.detuning), p.duration);
      const int levels = space.levels();
      for (Eigen::Index r = 0; r < u.entries.rows(); ++r) {
        u.entries.row(r) *= std::polar(1.0, p.detuning * p.duration * static_cast<double>(r % levels));
      }
      return u;
    }
    case PulseKind::off_resonant_effective:
      return propagator(h_effective_offres_all(space, p.rabi, p.detuning), p.duration);
    case PulseKind::free_evolution:
      return propagator(h_free(space, p.free_detuning), p.duration);
  }
  throw std::logic_error("unhandled pulse kind");
}

QuantumState apply_pulse(const QuantumState& state, const PulseSpec& pulse) {
  return apply(pulse_propagator(state.space, pulse), state);
}

QuantumState apply_sequence(const QuantumState& state, const PulseSequence& seq) {
  QuantumState s = state;
  for (const auto& p : seq.pulses) s = apply_pulse(s, p);
  return s;
}

OperatorMatrix sequence_propagator(const HilbertSpace& space, const PulseSequence& seq) {
  OperatorMatrix u = identity(space);
  for (const auto& p : seq.pulses) u.entries = pulse_propagator(space, p).entries * u.entries;
  return u;
}

std::string to_text(const PulseSequence& seq, double reference_rabi) {
  if (!(reference_rabi > 0.0)) throw std::invalid_argument("reference rabi frequency must be > 0");
  std::string out = "# pulse-sequence v1\nrabi " + fmt(reference_rabi) + "\n";
  for (const auto& p : seq.pulses) {
    out += to_string(p.kind) + " " + fmt(stable_scaled(p.duration, reference_rabi)) + " " +
           fmt(stable_scaled(p.detuning, 1.0 / reference_rabi)) + " " +
           fmt(stable_scaled(p.free_detuning, 1.0 / reference_rabi)) + " " +
           fmt(stable_scaled(p.rabi, 1.0 / reference_rabi)) + "\n";
  }
  return out;
}

PulseSequence sequence_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  double rabi = 0.0;
  PulseSequence seq;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "rabi") {
      std::string v;
      ls >> v;
      rabi = parse(v);
      continue;
    }
    if (!(rabi > 0.0)) throw std::invalid_argument("pulse line before a positive 'rabi' header");
    std::string d, det, fr, rr;
    if (!(ls >> d >> det >> fr >> rr)) throw std::invalid_argument("malformed pulse line: " + line);
    PulseSpec p;
    p.kind = pulse_kind_from_string(head);
    p.duration = parse(d) / rabi;
    const double inv = 1.0 / rabi;
    p.detuning = parse(det) / inv;
    p.free_detuning = parse(fr) / inv;
    p.rabi = parse(rr) / inv;
    seq.pulses.push_back(p);
  }
  return seq;
}

}  // namespace penning
