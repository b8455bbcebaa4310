#pragma once

// Data-parallel inner loops of the master-equation solvers. Each kernel has a
// serial reference and an OpenMP version; both compute every output element
// with the same operation order, so their results are bitwise identical.

#include <complex>
#include <span>

#include <Eigen/SparseCore>

namespace tpqrm::kernels {

using Complex = std::complex<double>;
using ComplexLD = std::complex<long double>;
using CsrMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor, int>;

/// y = A x
void spmv_serial(const CsrMatrix& a, std::span<const Complex> x, std::span<Complex> y);
void spmv_parallel(const CsrMatrix& a, std::span<const Complex> x, std::span<Complex> y);

/// r = b - A x accumulated in long double, rounded to double on output.
void residual_serial(const CsrMatrix& a, std::span<const Complex> x, std::span<const Complex> b,
                     std::span<Complex> r);
void residual_parallel(const CsrMatrix& a, std::span<const Complex> x, std::span<const Complex> b,
                       std::span<Complex> r);

/// y = x + h * sum_j coeff[j] * k[j]  (Runge-Kutta stage combination)
void axpy_stages_serial(std::span<const Complex> x, double h, std::span<const double> coeff,
                        std::span<const std::span<const Complex>> stages, std::span<Complex> y);
void axpy_stages_parallel(std::span<const Complex> x, double h, std::span<const double> coeff,
                          std::span<const std::span<const Complex>> stages, std::span<Complex> y);

/// Rows below this count run serially even through the parallel entry points.
inline constexpr int kParallelRowThreshold = 2048;

}  // namespace tpqrm::kernels
