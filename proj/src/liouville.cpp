#include "tpqrm/liouville.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/SparseLU>

#include "tpqrm/error.hpp"

namespace tpqrm {

namespace {

using Triplet = Eigen::Triplet<Complex, int>;

struct Entry {
  int row;
  int col;
  Complex value;
};

std::vector<Entry> nonzeros(const Matrix& m) {
  std::vector<Entry> out;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != Complex{0.0, 0.0}) out.push_back({static_cast<int>(i), static_cast<int>(j), m(i, j)});
  return out;
}

std::vector<Entry> identity_entries(Index d) {
  std::vector<Entry> out;
  for (Index i = 0; i < d; ++i) out.push_back({static_cast<int>(i), static_cast<int>(i), {1.0, 0.0}});
  return out;
}

// Appends coeff * (A (x) B) with B of dimension d.
void add_kron(std::vector<Triplet>& out, const std::vector<Entry>& a, const std::vector<Entry>& b, Index d,
              Complex coeff) {
  const int dd = static_cast<int>(d);
  for (const auto& ea : a)
    for (const auto& eb : b)
      out.emplace_back(ea.row * dd + eb.row, ea.col * dd + eb.col, coeff * ea.value * eb.value);
}

Liouvillian::Sparse assemble(Index d, const std::vector<Triplet>& triplets) {
  const auto n = static_cast<int>(d * d);
  Liouvillian::Sparse m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.prune(Complex{0.0, 0.0}, 0.0);
  m.makeCompressed();
  return m;
}

double rms_error(const Vector& err, const Vector& y0, const Vector& y1, double atol, double rtol) {
  double acc = 0.0;
  for (Index i = 0; i < err.size(); ++i) {
    const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = std::abs(err[i]) / scale;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

}  // namespace

void LindbladConfig::validate() const {
  const std::array<std::pair<const char*, double>, 3> rates{{{"gamma", gamma}, {"gamma_q", gamma_q},
                                                             {"gamma_phi", gamma_phi}}};
  for (const auto& [name, value] : rates)
    if (!std::isfinite(value) || value < 0.0)
      throw Error(ErrorKind::validation, std::string("rate ") + name + " must be finite and >= 0", name);
}

DensityMatrix::DensityMatrix(HilbertSpace space, Matrix entries) : space_(space), entries_(std::move(entries)) {
  if (entries_.rows() != space_.total_dim() || entries_.cols() != space_.total_dim())
    throw Error(ErrorKind::shape, "density matrix shape does not match its space");
}

DensityMatrix DensityMatrix::from_pure(const HilbertSpace& space, const Vector& psi) {
  if (psi.size() != space.total_dim()) throw Error(ErrorKind::shape, "state vector has the wrong dimension");
  const double norm = psi.norm();
  if (norm == 0.0) throw Error(ErrorKind::validation, "zero state vector");
  const Vector u = psi / norm;
  return {space, u * u.adjoint()};
}

DensityMatrix DensityMatrix::ground_fock(const HilbertSpace& space, int photons) {
  const std::uint64_t all_g = (std::uint64_t{1} << space.n_qubits()) - 1;
  Vector psi = Vector::Zero(space.total_dim());
  psi[space.index_of(all_g, photons)] = 1.0;
  return from_pure(space, psi);
}

double DensityMatrix::min_eigenvalue() const {
  const Matrix herm = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double psd_tol) const {
  const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > herm_tol)
    throw Error(ErrorKind::validation, "density matrix is not Hermitian (defect " + std::to_string(herm) + ")");
  const Complex tr = trace();
  if (std::abs(tr - Complex{1.0, 0.0}) > trace_tol)
    throw Error(ErrorKind::validation, "density matrix trace differs from 1 by " + std::to_string(std::abs(tr - 1.0)));
  const double lmin = min_eigenvalue();
  if (lmin < -psd_tol)
    throw Error(ErrorKind::validation, "density matrix has eigenvalue " + std::to_string(lmin));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (!(a.space() == b.space())) throw Error(ErrorKind::shape, "density matrices live on different spaces");
  const Matrix diff = a.matrix() - b.matrix();
  const Matrix herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Vector vectorize(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvectorize(const Vector& v, Index dim) {
  if (v.size() != dim * dim) throw Error(ErrorKind::shape, "vector length is not dim^2");
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Liouvillian::Liouvillian(HilbertSpace space, Sparse matrix) : space_(space), matrix_(std::move(matrix)) {
  const Index n = space_.total_dim() * space_.total_dim();
  if (matrix_.rows() != n || matrix_.cols() != n)
    throw Error(ErrorKind::shape, "superoperator shape does not match its space");
  matrix_.makeCompressed();
}

Liouvillian Liouvillian::zero(const HilbertSpace& space) {
  const Index n = space.total_dim() * space.total_dim();
  return {space, Sparse(n, n)};
}

Vector Liouvillian::apply(const Vector& vec_rho, bool parallel) const {
  if (vec_rho.size() != dim()) throw Error(ErrorKind::shape, "vectorized state has the wrong length");
  Vector out(dim());
  if (parallel)
    kernels::spmv_parallel(matrix_, {vec_rho.data(), static_cast<std::size_t>(vec_rho.size())},
                           {out.data(), static_cast<std::size_t>(out.size())});
  else
    kernels::spmv_serial(matrix_, {vec_rho.data(), static_cast<std::size_t>(vec_rho.size())},
                         {out.data(), static_cast<std::size_t>(out.size())});
  return out;
}

double Liouvillian::norm_inf() const {
  double best = 0.0;
  for (int r = 0; r < matrix_.outerSize(); ++r) {
    double row = 0.0;
    for (Sparse::InnerIterator it(matrix_, r); it; ++it) row += std::abs(it.value());
    best = std::max(best, row);
  }
  return best;
}

Liouvillian& Liouvillian::operator+=(const Liouvillian& rhs) {
  if (!(space_ == rhs.space_)) throw Error(ErrorKind::shape, "superoperators act on different spaces");
  matrix_ += rhs.matrix_;
  matrix_.makeCompressed();
  return *this;
}

Liouvillian dissipator(const OperatorMatrix& op, double rate) {
  if (!std::isfinite(rate) || rate < 0.0) throw Error(ErrorKind::validation, "dissipation rate must be >= 0", "rate");
  const HilbertSpace& space = op.space();
  if (rate == 0.0) return Liouvillian::zero(space);
  const Index d = op.dim();
  const Matrix& o = op.matrix();
  const Matrix odo = o.adjoint() * o;
  const auto eye = identity_entries(d);
  std::vector<Triplet> t;
  add_kron(t, nonzeros(o.conjugate()), nonzeros(o), d, rate);
  add_kron(t, eye, nonzeros(odo), d, -0.5 * rate);
  add_kron(t, nonzeros(odo.transpose()), eye, d, -0.5 * rate);
  return {space, assemble(d, t)};
}

Liouvillian hamiltonian_superoperator(const OperatorMatrix& h) {
  const Index d = h.dim();
  const auto eye = identity_entries(d);
  std::vector<Triplet> t;
  const Complex mi{0.0, -1.0};
  add_kron(t, eye, nonzeros(h.matrix()), d, mi);
  add_kron(t, nonzeros(h.matrix().transpose()), eye, d, -mi);
  return {h.space(), assemble(d, t)};
}

Liouvillian build_liouvillian(const OperatorMatrix& h, const LindbladConfig& cfg) {
  cfg.validate();
  if (!h.is_hermitian(1e-10)) throw Error(ErrorKind::validation, "Hamiltonian is not Hermitian");
  const HilbertSpace& space = h.space();
  Liouvillian l = hamiltonian_superoperator(h);
  if (cfg.gamma > 0.0) l += dissipator(annihilation(space), cfg.gamma);
  for (int q = 0; q < space.n_qubits(); ++q) {
    if (cfg.gamma_q > 0.0) l += dissipator(pauli(space, Pauli::minus, q), cfg.gamma_q);
    if (cfg.gamma_phi > 0.0) l += dissipator(pauli(space, Pauli::z, q), cfg.gamma_phi);
  }
  return l;
}

SteadyStateResult steady_state_detail(const Liouvillian& l, const SteadyStateOptions& opts) {
  const Index d = l.space().total_dim();
  const Index n = l.dim();

  // Row 0 of L becomes the trace functional vec(I)^T.
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(l.matrix().nonZeros() + d));
  for (int r = 1; r < l.matrix().outerSize(); ++r)
    for (Liouvillian::Sparse::InnerIterator it(l.matrix(), r); it; ++it) t.emplace_back(r, it.col(), it.value());
  for (Index i = 0; i < d; ++i) t.emplace_back(0, static_cast<int>(i * (d + 1)), Complex{1.0, 0.0});
  kernels::CsrMatrix m(static_cast<int>(n), static_cast<int>(n));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();

  Eigen::SparseMatrix<Complex, Eigen::ColMajor, int> mc = m;
  Eigen::SparseLU<Eigen::SparseMatrix<Complex, Eigen::ColMajor, int>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(mc);
  if (lu.info() != Eigen::Success) throw NonUniqueSteadyState("trace-constrained Liouvillian is singular", 0.0);

  // Inverse iteration: smallest-magnitude eigenvalue of the constrained matrix.
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = Complex{1.0 + std::sin(1.0 + static_cast<double>(i)), 0.25};
  v.normalize();
  double gap = 0.0;
  for (int it = 0; it < opts.gap_iterations; ++it) {
    Vector w = lu.solve(v);
    const double s = w.norm();
    if (!std::isfinite(s) || s == 0.0) {
      gap = 0.0;
      break;
    }
    const double next = 1.0 / s;
    const bool settled = it > 0 && std::abs(next - gap) <= 1e-3 * gap;
    gap = next;
    v = w / s;
    if (settled) break;
  }
  if (!(gap > opts.uniqueness_threshold))
    throw NonUniqueSteadyState("stationary state is not unique (gap estimate " + std::to_string(gap) + ")", gap);

  Vector b = Vector::Zero(n);
  b[0] = 1.0;
  Vector x = lu.solve(b);
  Vector r(n);
  for (int step = 0; step < opts.refinement_steps; ++step) {
    kernels::residual_serial(m, {x.data(), static_cast<std::size_t>(n)}, {b.data(), static_cast<std::size_t>(n)},
                             {r.data(), static_cast<std::size_t>(n)});
    if (r.cwiseAbs().maxCoeff() == 0.0) break;
    x += lu.solve(r);
  }
  if (!x.allFinite()) throw NonUniqueSteadyState("steady-state solve produced non-finite values", gap);

  Matrix rho = unvectorize(x, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();

  SteadyStateResult out;
  out.residual = l.apply(vectorize(rho)).cwiseAbs().maxCoeff();
  out.gap_estimate = gap;
  out.rho = std::move(rho);
  return out;
}

DensityMatrix steady_state(const Liouvillian& l, const SteadyStateOptions& opts) {
  DensityMatrix rho(l.space(), steady_state_detail(l, opts).rho);
  rho.validate();
  return rho;
}

DensityMatrix evolve(const DensityMatrix& rho0, const Liouvillian& l, double t_final, double dt,
                     const EvolveOptions& opts) {
  if (!(rho0.space() == l.space())) throw Error(ErrorKind::shape, "state and Liouvillian act on different spaces");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw Error(ErrorKind::validation, "t_final must be >= 0", "t_final");
  if (!(dt > 0.0)) throw Error(ErrorKind::validation, "initial step must be > 0", "dt");
  if (t_final == 0.0 || l.matrix().nonZeros() == 0) return rho0;

  // Dormand-Prince tableau.
  static constexpr double a2[1] = {1.0 / 5};
  static constexpr double a3[2] = {3.0 / 40, 9.0 / 40};
  static constexpr double a4[3] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
  static constexpr double a5[4] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729};
  static constexpr double a6[5] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656};
  static constexpr double a7[6] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84};
  static constexpr double e[7] = {71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920, -17253.0 / 339200, 22.0 / 525,
                                  -1.0 / 40};
  static const std::span<const double> rows[6] = {a2, a3, a4, a5, a6, a7};

  const Index n = l.dim();
  const auto sz = static_cast<std::size_t>(n);
  Vector y = vectorize(rho0.matrix());
  std::array<Vector, 7> k;
  for (auto& ki : k) ki.resize(n);
  Vector stage(n), y_new(n), err(n);
  const Vector zero_base = Vector::Zero(n);
  std::array<std::span<const Complex>, 7> views;
  for (std::size_t i = 0; i < 7; ++i) views[i] = {k[i].data(), sz};

  auto rhs = [&](const Vector& in, Vector& out) {
    if (opts.parallel)
      kernels::spmv_parallel(l.matrix(), {in.data(), sz}, {out.data(), sz});
    else
      kernels::spmv_serial(l.matrix(), {in.data(), sz}, {out.data(), sz});
  };
  auto combine = [&](const Vector& base, double h, std::span<const double> coeff, Vector& out) {
    const std::span<const std::span<const Complex>> st(views.data(), coeff.size());
    if (opts.parallel)
      kernels::axpy_stages_parallel({base.data(), sz}, h, coeff, st, {out.data(), sz});
    else
      kernels::axpy_stages_serial({base.data(), sz}, h, coeff, st, {out.data(), sz});
  };

  double t = 0.0;
  double h = std::min(dt, t_final);
  rhs(y, k[0]);
  long steps = 0;
  while (t < t_final) {
    if (++steps > opts.max_steps) throw Error(ErrorKind::stiffness, "evolve exceeded the step budget");
    const bool last = t + h >= t_final;
    if (last) h = t_final - t;
    for (std::size_t s = 0; s < 5; ++s) {
      combine(y, h, rows[s], stage);
      rhs(stage, k[s + 1]);
    }
    combine(y, h, rows[5], y_new);
    rhs(y_new, k[6]);
    combine(zero_base, h, e, err);

    const double norm = rms_error(err, y, y_new, opts.atol, opts.rtol);
    if (norm <= 1.0) {
      t = last ? t_final : t + h;
      y.swap(y_new);
      k[0].swap(k[6]);
      views[0] = {k[0].data(), sz};
      views[6] = {k[6].data(), sz};
    }
    const double factor =
        std::isfinite(norm) ? std::clamp(0.9 * std::pow(std::max(norm, 1e-10), -0.2), 0.2, 5.0) : 0.2;
    h *= factor;
    if (h < opts.min_step * std::max(1.0, std::abs(t)))
      throw Error(ErrorKind::stiffness, "evolve step size underflow at t = " + std::to_string(t));
  }
  return {rho0.space(), unvectorize(y, rho0.dim())};
}

Complex expectation(const DensityMatrix& rho, const OperatorMatrix& op) {
  if (!(rho.space() == op.space())) throw Error(ErrorKind::shape, "state and operator act on different spaces");
  return rho.matrix().transpose().cwiseProduct(op.matrix()).sum();
}

}  // namespace tpqrm
