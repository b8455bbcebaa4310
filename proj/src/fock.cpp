#include "tpqrm/fock.hpp"

#include <cmath>
#include <string>

#include "tpqrm/error.hpp"

namespace tpqrm {

namespace {

constexpr int kMaxQubits = 12;

void require_same_space(const HilbertSpace& a, const HilbertSpace& b, const char* what) {
  if (!(a == b)) throw Error(ErrorKind::shape, std::string(what) + ": operators act on different spaces");
}

void require_boson(const HilbertSpace& space) {
  if (space.fock_cutoff() < 1)
    throw Error(ErrorKind::invalid_space, "boson operators need fock_cutoff >= 1", "fock_cutoff");
}

// Embed a boson-factor matrix as I_qubits (x) b.
OperatorMatrix on_boson(const HilbertSpace& space, const Matrix& b) {
  return {space, kron(Matrix::Identity(space.qubit_dim(), space.qubit_dim()), b)};
}

Matrix boson_lowering(Index dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (Index n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

}  // namespace

HilbertSpace::HilbertSpace(int n_qubits, int fock_cutoff) : n_qubits_(n_qubits), fock_cutoff_(fock_cutoff) {
  if (n_qubits < 0 || n_qubits > kMaxQubits)
    throw Error(ErrorKind::invalid_space, "n_qubits must lie in [0, 12], got " + std::to_string(n_qubits),
                "n_qubits");
  if (fock_cutoff < 0)
    throw Error(ErrorKind::invalid_space, "fock_cutoff must be non-negative, got " + std::to_string(fock_cutoff),
                "fock_cutoff");
}

Index HilbertSpace::index_of(std::uint64_t qubit_bits, int photons) const {
  if (photons < 0 || photons > fock_cutoff_ || qubit_bits >= static_cast<std::uint64_t>(qubit_dim()))
    throw Error(ErrorKind::invalid_index, "basis label out of range");
  return static_cast<Index>(qubit_bits) * boson_dim() + photons;
}

OperatorMatrix::OperatorMatrix(HilbertSpace space, Matrix entries) : space_(space), entries_(std::move(entries)) {
  if (entries_.rows() != space_.total_dim() || entries_.cols() != space_.total_dim())
    throw Error(ErrorKind::shape, "operator shape " + std::to_string(entries_.rows()) + "x" +
                                      std::to_string(entries_.cols()) + " does not match space dimension " +
                                      std::to_string(space_.total_dim()));
}

OperatorMatrix OperatorMatrix::zero(const HilbertSpace& space) {
  return {space, Matrix::Zero(space.total_dim(), space.total_dim())};
}

OperatorMatrix OperatorMatrix::identity(const HilbertSpace& space) {
  return {space, Matrix::Identity(space.total_dim(), space.total_dim())};
}

double OperatorMatrix::hermiticity_defect() const {
  const double norm = entries_.norm();
  if (norm == 0.0) return 0.0;
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() / norm;
}

bool OperatorMatrix::is_real() const { return entries_.imag().cwiseAbs().maxCoeff() == 0.0; }

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& rhs) {
  require_same_space(space_, rhs.space_, "operator+");
  entries_ += rhs.entries_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& rhs) {
  require_same_space(space_, rhs.space_, "operator-");
  entries_ -= rhs.entries_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(Complex s) {
  entries_ *= s;
  return *this;
}

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  require_same_space(lhs.space_, rhs.space_, "operator*");
  return {lhs.space_, lhs.entries_ * rhs.entries_};
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_space(a.space_, b.space_, "commutator");
  return {a.space_, a.entries_ * b.entries_ - b.entries_ * a.entries_};
}

Matrix pauli_matrix(Pauli which) {
  constexpr Complex i{0.0, 1.0};
  Matrix m = Matrix::Zero(2, 2);
  switch (which) {
    case Pauli::x: m(0, 1) = m(1, 0) = 1.0; break;
    case Pauli::y: m(0, 1) = -i; m(1, 0) = i; break;
    case Pauli::z: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    case Pauli::plus: m(0, 1) = 1.0; break;
    case Pauli::minus: m(1, 0) = 1.0; break;
  }
  return m;
}

OperatorMatrix identity(const HilbertSpace& space) { return OperatorMatrix::identity(space); }

OperatorMatrix annihilation(const HilbertSpace& space) {
  require_boson(space);
  return on_boson(space, boson_lowering(space.boson_dim()));
}

OperatorMatrix creation(const HilbertSpace& space) { return annihilation(space).adjoint(); }

OperatorMatrix number(const HilbertSpace& space) {
  Matrix n = Matrix::Zero(space.boson_dim(), space.boson_dim());
  for (Index k = 0; k < space.boson_dim(); ++k) n(k, k) = static_cast<double>(k);
  return on_boson(space, n);
}

OperatorMatrix pauli(const HilbertSpace& space, Pauli which, int qubit_index) {
  if (qubit_index < 0 || qubit_index >= space.n_qubits())
    throw Error(ErrorKind::invalid_index,
                "qubit index " + std::to_string(qubit_index) + " outside [0, " +
                    std::to_string(space.n_qubits()) + ")",
                "qubit_index");
  Matrix m = Matrix::Identity(1, 1);
  for (int q = 0; q < space.n_qubits(); ++q)
    m = kron(m, q == qubit_index ? pauli_matrix(which) : Matrix::Identity(2, 2));
  return {space, kron(m, Matrix::Identity(space.boson_dim(), space.boson_dim()))};
}

OperatorMatrix photon_parity(const HilbertSpace& space) {
  Matrix p = Matrix::Zero(space.boson_dim(), space.boson_dim());
  for (Index k = 0; k < space.boson_dim(); ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  return on_boson(space, p);
}

OperatorMatrix quadrature_power(const HilbertSpace& space, int power) {
  require_boson(space);
  if (power < 0) throw Error(ErrorKind::validation, "quadrature power must be non-negative");
  // Work on a space large enough that no path of `power` ladder steps starting
  // inside the truncated space ever hits the artificial top level.
  const Index big = space.boson_dim() + power;
  const Matrix a = boson_lowering(big);
  const Matrix x = a + a.adjoint();
  Matrix acc = Matrix::Identity(big, big);
  for (int p = 0; p < power; ++p) acc = acc * x;
  return on_boson(space, acc.topLeftCorner(space.boson_dim(), space.boson_dim()));
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

OperatorMatrix tensor(const HilbertSpace& target, std::span<const Matrix> factors) {
  if (factors.size() != static_cast<std::size_t>(target.n_qubits()) + 1)
    throw Error(ErrorKind::shape, "tensor: expected " + std::to_string(target.n_qubits() + 1) + " factors, got " +
                                      std::to_string(factors.size()));
  Matrix acc = Matrix::Identity(1, 1);
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const Index want = (f + 1 == factors.size()) ? target.boson_dim() : 2;
    const Matrix& m = factors[f];
    if (m.rows() != want || m.cols() != want)
      throw Error(ErrorKind::shape, "tensor: factor " + std::to_string(f) + " has shape " +
                                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                                        std::to_string(want) + "x" + std::to_string(want));
    acc = kron(acc, m);
  }
  return {target, std::move(acc)};
}

}  // namespace tpqrm
