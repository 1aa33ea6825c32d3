#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace penning {

using cplx = std::complex<double>;

enum class Spin : int { down = 0, up = 1 };

/// Two spin-1/2 particles and one truncated boson mode (cm cyclotron).
///
/// Basis ordering is |s1 s2> (x) |n>, spins most significant:
///   index = (2 * s1 + s2) * (n_max + 1) + n,   with down = 0 and up = 1.
class HilbertSpace {
 public:
  explicit HilbertSpace(int fock_cutoff);

  int fock_cutoff() const noexcept { return cutoff_; }
  int levels() const noexcept { return cutoff_ + 1; }
  int dimension() const noexcept { return 4 * levels(); }

  int index(Spin s1, Spin s2, int n) const;

  struct Label {
    Spin s1;
    Spin s2;
    int n;
  };
  Label label(int index) const;

  bool operator==(const HilbertSpace&) const = default;

 private:
  int cutoff_;
};

struct QuantumState {
  HilbertSpace space;
  Eigen::VectorXcd amplitudes;

  double norm() const { return amplitudes.norm(); }
};

/// Dense operator. Hamiltonians are stored as H/hbar, i.e. in rad/s.
struct OperatorMatrix {
  HilbertSpace space;
  Eigen::MatrixXcd entries;
};

QuantumState basis_state(const HilbertSpace& space, Spin s1, Spin s2, int n);

/// Superposition of basis states; normalizes the result.
QuantumState superpose(const HilbertSpace& space,
                       const std::vector<std::pair<HilbertSpace::Label, cplx>>& terms);

struct LadderOps {
  OperatorMatrix lower;
  OperatorMatrix raise;
  OperatorMatrix number;
};
LadderOps ladder_ops(const HilbertSpace& space);

struct SpinOps {
  OperatorMatrix raise;  // sigma^+ : down -> up
  OperatorMatrix lower;
  OperatorMatrix z;
};
/// particle is 0 or 1.
SpinOps spin_ops(const HilbertSpace& space, int particle);

OperatorMatrix identity(const HilbertSpace& space);

/// C = a^dag a + (number of up spins); conserved by every gate Hamiltonian.
OperatorMatrix excitation_number(const HilbertSpace& space);

double hermiticity_defect(const OperatorMatrix& op);
double unitarity_defect(const OperatorMatrix& op);
double commutator_norm(const OperatorMatrix& a, const OperatorMatrix& b);

/// exp(-i H t) for Hermitian H (in rad/s). Rejects non-Hermitian input.
OperatorMatrix propagator(const OperatorMatrix& hamiltonian, double t);

QuantumState apply(const OperatorMatrix& op, const QuantumState& state);
QuantumState evolve(const QuantumState& state, const OperatorMatrix& hamiltonian, double t);

struct NumberStatistics {
  std::vector<double> probabilities;  // P(n), n = 0..n_max
  double mean = 0.0;
  double variance = 0.0;
};

/// Exact distribution of the boson number, summed over spins.
NumberStatistics measure_number(const QuantumState& state);

/// Seeded projective readouts of the boson number; moments are sample moments.
NumberStatistics sample_number(const QuantumState& state, int shots, std::uint64_t seed);

/// |<target|state>|^2.
double fidelity(const QuantumState& state, const QuantumState& target);

/// Two-spin density matrix with the boson traced out, basis |s1 s2> with index 2 s1 + s2.
Eigen::Matrix4cd reduced_spin_density(const QuantumState& state);

/// Wootters concurrence of the reduced two-spin state.
double concurrence(const QuantumState& state);

/// One line per amplitude: "index real imag" at round-trip precision, after a
/// "# cutoff N" header.
std::string to_text(const QuantumState& state);
QuantumState state_from_text(const std::string& text);

}  // namespace penning
