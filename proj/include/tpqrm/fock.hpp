#pragma once

// Truncated Fock-space operator algebra.
//
// Composite spaces are ordered qubits first, boson last: a basis index is
//   (q_0 q_1 ... q_{N-1}) * (n_max + 1) + n
// with q_i = 0 for the excited state |e> (sigma_z = +1) and q_i = 1 for |g>.
// The boson level n is the fastest-running index.

#include <complex>
#include <cstdint>
#include <span>

#include <Eigen/Dense>

namespace tpqrm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

class HilbertSpace {
 public:
  HilbertSpace(int n_qubits, int fock_cutoff);

  int n_qubits() const noexcept { return n_qubits_; }
  int fock_cutoff() const noexcept { return fock_cutoff_; }
  Index qubit_dim() const noexcept { return Index{1} << n_qubits_; }
  Index boson_dim() const noexcept { return fock_cutoff_ + 1; }
  Index total_dim() const noexcept { return qubit_dim() * boson_dim(); }

  /// Same qubit count, different cutoff.
  HilbertSpace with_cutoff(int fock_cutoff) const { return {n_qubits_, fock_cutoff}; }

  /// Basis index of the product state |q_0 ... q_{N-1}> (x) |n>.
  Index index_of(std::uint64_t qubit_bits, int photons) const;
  int photons_at(Index i) const noexcept { return static_cast<int>(i % boson_dim()); }
  std::uint64_t qubit_bits_at(Index i) const noexcept {
    return static_cast<std::uint64_t>(i / boson_dim());
  }

  friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;

 private:
  int n_qubits_;
  int fock_cutoff_;
};

/// Dense square operator tied to the space it acts on.
class OperatorMatrix {
 public:
  OperatorMatrix(HilbertSpace space, Matrix entries);

  static OperatorMatrix zero(const HilbertSpace& space);
  static OperatorMatrix identity(const HilbertSpace& space);

  const HilbertSpace& space() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return entries_; }
  Index dim() const noexcept { return entries_.rows(); }

  OperatorMatrix adjoint() const { return {space_, entries_.adjoint()}; }

  /// max |H - H^dagger| entry divided by the Frobenius norm (0 for the zero operator).
  double hermiticity_defect() const;
  bool is_hermitian(double rel_tol = 1e-12) const { return hermiticity_defect() <= rel_tol; }
  bool is_real() const;

  OperatorMatrix& operator+=(const OperatorMatrix& rhs);
  OperatorMatrix& operator-=(const OperatorMatrix& rhs);
  OperatorMatrix& operator*=(Complex s);

  friend OperatorMatrix operator+(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs += rhs; }
  friend OperatorMatrix operator-(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs -= rhs; }
  friend OperatorMatrix operator*(OperatorMatrix op, Complex s) { return op *= s; }
  friend OperatorMatrix operator*(Complex s, OperatorMatrix op) { return op *= s; }
  friend OperatorMatrix operator*(double s, OperatorMatrix op) { return op *= Complex{s, 0.0}; }
  friend OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs);

  /// Commutator [A, B].
  friend OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

 private:
  HilbertSpace space_;
  Matrix entries_;
};

enum class Pauli { x, y, z, plus, minus };

/// 2x2 Pauli matrix in the (|e>, |g>) basis.
Matrix pauli_matrix(Pauli which);

OperatorMatrix identity(const HilbertSpace& space);
OperatorMatrix annihilation(const HilbertSpace& space);
OperatorMatrix creation(const HilbertSpace& space);
OperatorMatrix number(const HilbertSpace& space);
OperatorMatrix pauli(const HilbertSpace& space, Pauli which, int qubit_index);
OperatorMatrix photon_parity(const HilbertSpace& space);

/// Compression of (a + a^dagger)^power onto the truncated space: matrix
/// elements are those of the untruncated operator, so no top-level artifacts.
OperatorMatrix quadrature_power(const HilbertSpace& space, int power);

/// Kronecker product a (x) b.
Matrix kron(const Matrix& a, const Matrix& b);

/// Kronecker product of factor operators in qubits-then-boson order: exactly
/// n_qubits 2x2 factors followed by one (cutoff+1)-dimensional boson factor.
OperatorMatrix tensor(const HilbertSpace& target, std::span<const Matrix> factors);

}  // namespace tpqrm
