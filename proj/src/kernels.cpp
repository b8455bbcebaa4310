#include "tpqrm/kernels.hpp"

#include <cassert>

namespace tpqrm::kernels {

namespace {

inline Complex row_dot(const CsrMatrix& a, int row, const Complex* x) {
  const int* outer = a.outerIndexPtr();
  const int* inner = a.innerIndexPtr();
  const Complex* val = a.valuePtr();
  Complex acc{0.0, 0.0};
  for (int p = outer[row]; p < outer[row + 1]; ++p) acc += val[p] * x[inner[p]];
  return acc;
}

inline Complex row_residual(const CsrMatrix& a, int row, const Complex* x, Complex b) {
  const int* outer = a.outerIndexPtr();
  const int* inner = a.innerIndexPtr();
  const Complex* val = a.valuePtr();
  long double re = b.real();
  long double im = b.imag();
  for (int p = outer[row]; p < outer[row + 1]; ++p) {
    const long double vr = val[p].real(), vi = val[p].imag();
    const long double xr = x[inner[p]].real(), xi = x[inner[p]].imag();
    re -= vr * xr - vi * xi;
    im -= vr * xi + vi * xr;
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

inline Complex stage_sum(std::size_t i, const Complex* x, double h, std::span<const double> coeff,
                         std::span<const std::span<const Complex>> stages) {
  Complex acc{0.0, 0.0};
  for (std::size_t j = 0; j < coeff.size(); ++j)
    if (coeff[j] != 0.0) acc += coeff[j] * stages[j][i];
  return x[i] + h * acc;
}

}  // namespace

void spmv_serial(const CsrMatrix& a, std::span<const Complex> x, std::span<Complex> y) {
  assert(x.size() == static_cast<std::size_t>(a.cols()) && y.size() == static_cast<std::size_t>(a.rows()));
  const int rows = static_cast<int>(a.rows());
  for (int r = 0; r < rows; ++r) y[r] = row_dot(a, r, x.data());
}

void spmv_parallel(const CsrMatrix& a, std::span<const Complex> x, std::span<Complex> y) {
  assert(x.size() == static_cast<std::size_t>(a.cols()) && y.size() == static_cast<std::size_t>(a.rows()));
  const int rows = static_cast<int>(a.rows());
#pragma omp parallel for schedule(static) if (rows >= kParallelRowThreshold)
  for (int r = 0; r < rows; ++r) y[r] = row_dot(a, r, x.data());
}

void residual_serial(const CsrMatrix& a, std::span<const Complex> x, std::span<const Complex> b,
                     std::span<Complex> r) {
  const int rows = static_cast<int>(a.rows());
  for (int i = 0; i < rows; ++i) r[i] = row_residual(a, i, x.data(), b[i]);
}

void residual_parallel(const CsrMatrix& a, std::span<const Complex> x, std::span<const Complex> b,
                       std::span<Complex> r) {
  const int rows = static_cast<int>(a.rows());
#pragma omp parallel for schedule(static) if (rows >= kParallelRowThreshold)
  for (int i = 0; i < rows; ++i) r[i] = row_residual(a, i, x.data(), b[i]);
}

void axpy_stages_serial(std::span<const Complex> x, double h, std::span<const double> coeff,
                        std::span<const std::span<const Complex>> stages, std::span<Complex> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = stage_sum(i, x.data(), h, coeff, stages);
}

void axpy_stages_parallel(std::span<const Complex> x, double h, std::span<const double> coeff,
                          std::span<const std::span<const Complex>> stages, std::span<Complex> y) {
  const long long n = static_cast<long long>(x.size());
#pragma omp parallel for schedule(static) if (n >= kParallelRowThreshold)
  for (long long i = 0; i < n; ++i)
    y[static_cast<std::size_t>(i)] = stage_sum(static_cast<std::size_t>(i), x.data(), h, coeff, stages);
}

}  // namespace tpqrm::kernels
