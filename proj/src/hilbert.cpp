#include "penning/hilbert.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace penning {
namespace {

void require_same_space(const HilbertSpace& a, const HilbertSpace& b) {
  if (!(a == b)) throw std::invalid_argument("operands live on different Hilbert spaces");
}

OperatorMatrix zero_operator(const HilbertSpace& space) {
  return {space, Eigen::MatrixXcd::Zero(space.dimension(), space.dimension())};
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token) {
  double v = 0.0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw std::invalid_argument("bad number in state text: " + token);
  }
  return v;
}

}  // namespace

HilbertSpace::HilbertSpace(int fock_cutoff) : cutoff_(fock_cutoff) {
  if (fock_cutoff < 1) throw std::invalid_argument("fock_cutoff must be >= 1");
}

int HilbertSpace::index(Spin s1, Spin s2, int n) const {
  if (n < 0 || n > cutoff_) {
    throw std::out_of_range("Fock level " + std::to_string(n) + " outside [0, " + std::to_string(cutoff_) + "]");
  }
  return (2 * static_cast<int>(s1) + static_cast<int>(s2)) * levels() + n;
}

HilbertSpace::Label HilbertSpace::label(int index) const {
  if (index < 0 || index >= dimension()) throw std::out_of_range("basis index out of range");
  const int spins = index / levels();
  return {static_cast<Spin>(spins / 2), static_cast<Spin>(spins % 2), index % levels()};
}

QuantumState basis_state(const HilbertSpace& space, Spin s1, Spin s2, int n) {
  QuantumState s{space, Eigen::VectorXcd::Zero(space.dimension())};
  s.amplitudes[space.index(s1, s2, n)] = 1.0;
  return s;
}

QuantumState superpose(const HilbertSpace& space,
                       const std::vector<std::pair<HilbertSpace::Label, cplx>>& terms) {
  QuantumState s{space, Eigen::VectorXcd::Zero(space.dimension())};
  for (const auto& [l, c] : terms) s.amplitudes[space.index(l.s1, l.s2, l.n)] += c;
  const double n = s.amplitudes.norm();
  if (n == 0.0) throw std::invalid_argument("superposition has zero norm");
  s.amplitudes /= n;
  return s;
}

LadderOps ladder_ops(const HilbertSpace& space) {
  LadderOps ops{zero_operator(space), zero_operator(space), zero_operator(space)};
  for (int spins = 0; spins < 4; ++spins) {
    const int base = spins * space.levels();
    for (int n = 0; n <= space.fock_cutoff(); ++n) {
      ops.number.entries(base + n, base + n) = static_cast<double>(n);
      if (n > 0) ops.lower.entries(base + n - 1, base + n) = std::sqrt(static_cast<double>(n));
    }
  }
  ops.raise.entries = ops.lower.entries.adjoint();
  return ops;
}

SpinOps spin_ops(const HilbertSpace& space, int particle) {
  if (particle != 0 && particle != 1) throw std::out_of_range("particle must be 0 or 1");
  SpinOps ops{zero_operator(space), zero_operator(space), zero_operator(space)};
  for (int i = 0; i < space.dimension(); ++i) {
    const auto l = space.label(i);
    const Spin mine = particle == 0 ? l.s1 : l.s2;
    ops.z.entries(i, i) = mine == Spin::up ? 1.0 : -1.0;
    if (mine == Spin::down) {
      const int j = particle == 0 ? space.index(Spin::up, l.s2, l.n) : space.index(l.s1, Spin::up, l.n);
      ops.raise.entries(j, i) = 1.0;
    }
  }
  ops.lower.entries = ops.raise.entries.adjoint();
  return ops;
}

OperatorMatrix identity(const HilbertSpace& space) {
  return {space, Eigen::MatrixXcd::Identity(space.dimension(), space.dimension())};
}

OperatorMatrix excitation_number(const HilbertSpace& space) {
  OperatorMatrix c = zero_operator(space);
  for (int i = 0; i < space.dimension(); ++i) {
    const auto l = space.label(i);
    c.entries(i, i) = l.n + (l.s1 == Spin::up) + (l.s2 == Spin::up);
  }
  return c;
}

double hermiticity_defect(const OperatorMatrix& op) {
  const double scale = std::max(1.0, op.entries.norm());
  return (op.entries - op.entries.adjoint()).norm() / scale;
}

double unitarity_defect(const OperatorMatrix& op) {
  const auto d = op.entries.rows();
  return (op.entries.adjoint() * op.entries - Eigen::MatrixXcd::Identity(d, d)).norm();
}

double commutator_norm(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_space(a.space, b.space);
  return (a.entries * b.entries - b.entries * a.entries).norm();
}

OperatorMatrix propagator(const OperatorMatrix& hamiltonian, double t) {
  if (hermiticity_defect(hamiltonian) > 1e-12) {
    throw std::invalid_argument("propagator requires a Hermitian Hamiltonian");
  }
  const auto d = hamiltonian.entries.rows();
  if (t == 0.0 || hamiltonian.entries.isZero(0.0)) {
    return {hamiltonian.space, Eigen::MatrixXcd::Identity(d, d)};
  }
  // Symmetrize so the solver sees an exactly Hermitian matrix.
  const Eigen::MatrixXcd h = 0.5 * (hamiltonian.entries + hamiltonian.entries.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXd& lambda = es.eigenvalues();
  Eigen::VectorXcd phases(d);
  for (Eigen::Index k = 0; k < d; ++k) phases[k] = std::polar(1.0, -lambda[k] * t);
  const Eigen::MatrixXcd& v = es.eigenvectors();
  return {hamiltonian.space, v * phases.asDiagonal() * v.adjoint()};
}

QuantumState apply(const OperatorMatrix& op, const QuantumState& state) {
  require_same_space(op.space, state.space);
  return {state.space, op.entries * state.amplitudes};
}

QuantumState evolve(const QuantumState& state, const OperatorMatrix& hamiltonian, double t) {
  require_same_space(state.space, hamiltonian.space);
  return apply(propagator(hamiltonian, t), state);
}

NumberStatistics measure_number(const QuantumState& state) {
  const HilbertSpace& sp = state.space;
  NumberStatistics s;
  s.probabilities.assign(sp.levels(), 0.0);
  for (int i = 0; i < sp.dimension(); ++i) s.probabilities[i % sp.levels()] += std::norm(state.amplitudes[i]);
  for (int n = 0; n < sp.levels(); ++n) s.mean += n * s.probabilities[n];
  for (int n = 0; n < sp.levels(); ++n) s.variance += s.probabilities[n] * (n - s.mean) * (n - s.mean);
  return s;
}

NumberStatistics sample_number(const QuantumState& state, int shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  const NumberStatistics exact = measure_number(state);
  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> dist(exact.probabilities.begin(), exact.probabilities.end());
  NumberStatistics s;
  s.probabilities.assign(exact.probabilities.size(), 0.0);
  for (int k = 0; k < shots; ++k) s.probabilities[dist(rng)] += 1.0;
  for (auto& p : s.probabilities) p /= shots;
  for (std::size_t n = 0; n < s.probabilities.size(); ++n) s.mean += n * s.probabilities[n];
  for (std::size_t n = 0; n < s.probabilities.size(); ++n) {
    s.variance += s.probabilities[n] * (n - s.mean) * (n - s.mean);
  }
  return s;
}

double fidelity(const QuantumState& state, const QuantumState& target) {
  require_same_space(state.space, target.space);
  return std::norm(target.amplitudes.dot(state.amplitudes));
}

Eigen::Matrix4cd reduced_spin_density(const QuantumState& state) {
  const int levels = state.space.levels();
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      cplx acc = 0.0;
      for (int n = 0; n < levels; ++n) {
        acc += state.amplitudes[a * levels + n] * std::conj(state.amplitudes[b * levels + n]);
      }
      rho(a, b) = acc;
    }
  }
  return rho;
}

double concurrence(const QuantumState& state) {
  const Eigen::Matrix4cd rho = reduced_spin_density(state);
  // sigma_y (x) sigma_y in the |s1 s2> basis.
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::Matrix4cd tilde = yy * rho.conjugate() * yy;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es_rho(rho);
  Eigen::Vector4d roots = es_rho.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::Matrix4cd sqrt_rho = es_rho.eigenvectors() * roots.cast<cplx>().asDiagonal() *
                                    es_rho.eigenvectors().adjoint();
  const Eigen::Matrix4cd r = sqrt_rho * tilde * sqrt_rho;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es_r(0.5 * (r + r.adjoint()));
  Eigen::Vector4d l = es_r.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(l.data(), l.data() + 4, std::greater<>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

std::string to_text(const QuantumState& state) {
  std::string out = "# cutoff " + std::to_string(state.space.fock_cutoff()) + "\n";
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
    out += std::to_string(i) + " " + format_double(state.amplitudes[i].real()) + " " +
           format_double(state.amplitudes[i].imag()) + "\n";
  }
  return out;
}

QuantumState state_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int cutoff = -1;
  std::vector<std::pair<int, cplx>> entries;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "cutoff") ls >> cutoff;
      continue;
    }
    int idx = -1;
    std::string re, im;
    if (!(ls >> idx >> re >> im)) throw std::invalid_argument("malformed state line: " + line);
    entries.emplace_back(idx, cplx(parse_double(re), parse_double(im)));
  }
  if (cutoff < 0) throw std::invalid_argument("state text lacks '# cutoff' header");
  HilbertSpace space(cutoff);
  QuantumState s{space, Eigen::VectorXcd::Zero(space.dimension())};
  for (const auto& [idx, a] : entries) {
    if (idx < 0 || idx >= space.dimension()) throw std::out_of_range("state index out of range");
    s.amplitudes[idx] = a;
  }
  return s;
}

}  // namespace penning
