#pragma once

// Lindblad master equation on column-stacked density matrices:
//   vec(A rho B) = (B^T (x) A) vec(rho),   vec(rho)[i + j d] = rho(i, j).

#include "tpqrm/fock.hpp"
#include "tpqrm/kernels.hpp"

namespace tpqrm {

struct LindbladConfig {
  double gamma = 0.0;      // cavity decay
  double gamma_q = 0.0;    // qubit decay
  double gamma_phi = 0.0;  // qubit pure dephasing

  /// Throws Error(validation) naming the first negative or non-finite rate.
  void validate() const;
};

class DensityMatrix {
 public:
  DensityMatrix(HilbertSpace space, Matrix entries);

  static DensityMatrix from_pure(const HilbertSpace& space, const Vector& psi);
  /// Product of |g> on every qubit with the Fock state |n>.
  static DensityMatrix ground_fock(const HilbertSpace& space, int photons = 0);

  const HilbertSpace& space() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return entries_; }
  Index dim() const noexcept { return entries_.rows(); }

  Complex trace() const { return entries_.trace(); }
  double min_eigenvalue() const;

  /// Hermitian within herm_tol, unit trace within trace_tol, eigenvalues >= -psd_tol.
  /// Throws Error(validation) otherwise.
  void validate(double herm_tol = 1e-10, double trace_tol = 1e-10, double psd_tol = 1e-8) const;

 private:
  HilbertSpace space_;
  Matrix entries_;
};

/// Half the trace norm of the difference.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

Vector vectorize(const Matrix& m);
Matrix unvectorize(const Vector& v, Index dim);

class Liouvillian {
 public:
  using Sparse = kernels::CsrMatrix;

  Liouvillian(HilbertSpace space, Sparse matrix);
  static Liouvillian zero(const HilbertSpace& space);

  const HilbertSpace& space() const noexcept { return space_; }
  const Sparse& matrix() const noexcept { return matrix_; }
  /// Dimension of the vectorized space, total_dim^2.
  Index dim() const noexcept { return matrix_.rows(); }

  Vector apply(const Vector& vec_rho, bool parallel = false) const;
  Matrix apply(const Matrix& rho) const { return unvectorize(apply(vectorize(rho)), rho.rows()); }
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix_); }
  /// Largest absolute row sum.
  double norm_inf() const;

  Liouvillian& operator+=(const Liouvillian& rhs);
  friend Liouvillian operator+(Liouvillian lhs, const Liouvillian& rhs) { return lhs += rhs; }

 private:
  HilbertSpace space_;
  Sparse matrix_;
};

/// rate * D[op], D[O] rho = O rho O^dagger - {O^dagger O, rho} / 2.
Liouvillian dissipator(const OperatorMatrix& op, double rate);

/// -i [H, rho].
Liouvillian hamiltonian_superoperator(const OperatorMatrix& h);

/// Coherent part plus gamma D[a] + gamma_q D[sigma_-^i] + gamma_phi D[sigma_z^i] summed over qubits.
Liouvillian build_liouvillian(const OperatorMatrix& h, const LindbladConfig& cfg);

struct SteadyStateOptions {
  /// Gap estimate below which the stationary state counts as non-unique.
  double uniqueness_threshold = 1e-10;
  int refinement_steps = 4;
  int gap_iterations = 12;
};

struct SteadyStateResult {
  Matrix rho;
  double gap_estimate = 0.0;
  double residual = 0.0;  // ||L rho||_inf
};

/// Solves L rho = 0 with the first row replaced by the trace condition (sparse
/// LU plus iterative refinement with an extended-precision residual).
/// Throws NonUniqueSteadyState when the constrained system is (near) singular.
SteadyStateResult steady_state_detail(const Liouvillian& l, const SteadyStateOptions& opts = {});
DensityMatrix steady_state(const Liouvillian& l, const SteadyStateOptions& opts = {});

struct EvolveOptions {
  double atol = 1e-10;
  double rtol = 1e-9;
  double min_step = 1e-12;
  long max_steps = 50'000'000;
  bool parallel = true;
};

/// Adaptive Dormand-Prince 5(4) integration of d vec(rho)/dt = L vec(rho).
/// `dt` is the initial step. Throws Error(stiffness) on step-size underflow.
DensityMatrix evolve(const DensityMatrix& rho0, const Liouvillian& l, double t_final, double dt,
                     const EvolveOptions& opts = {});

/// tr(rho op).
Complex expectation(const DensityMatrix& rho, const OperatorMatrix& op);

}  // namespace tpqrm
