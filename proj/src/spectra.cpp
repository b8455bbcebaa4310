#include "tpqrm/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "tpqrm/error.hpp"

namespace tpqrm {

namespace {

constexpr double kHermitianTol = 1e-10;

Eigensystem solve_real(const Eigen::MatrixXd& h, int k, bool with_vectors) {
  const lapack_int n = static_cast<lapack_int>(h.rows());
  Eigen::MatrixXd a = h;  // destroyed by LAPACK
  Eigen::VectorXd w(n);
  Eigen::MatrixXd z(with_vectors ? n : 1, with_vectors ? k : 1);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(std::max(k, 1)));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'I', 'L', n, a.data(), n, 0.0,
                                         0.0, 1, k, LAPACKE_dlamch('S'), &found, w.data(), z.data(),
                                         static_cast<lapack_int>(z.rows()), isuppz.data());
  if (info != 0) throw Error(ErrorKind::validation, "dsyevr failed with info " + std::to_string(info));
  Eigensystem out;
  out.values = w.head(found);
  if (with_vectors) out.vectors = z.leftCols(found).cast<Complex>();
  return out;
}

Eigensystem solve_complex(const Matrix& h, int k, bool with_vectors) {
  const lapack_int n = static_cast<lapack_int>(h.rows());
  Matrix a = h;
  Eigen::VectorXd w(n);
  Matrix z(with_vectors ? n : 1, with_vectors ? k : 1);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(std::max(k, 1)));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'I', 'L', n, a.data(), n, 0.0,
                                         0.0, 1, k, LAPACKE_dlamch('S'), &found, w.data(), z.data(),
                                         static_cast<lapack_int>(z.rows()), isuppz.data());
  if (info != 0) throw Error(ErrorKind::validation, "zheevr failed with info " + std::to_string(info));
  Eigensystem out;
  out.values = w.head(found);
  if (with_vectors) out.vectors = z.leftCols(found);
  return out;
}

// Diagonal +-1 entries of a parity operator, or empty if it is not of that form.
std::vector<int> diagonal_signs(const Matrix& p) {
  const Index n = p.rows();
  std::vector<int> signs(static_cast<std::size_t>(n));
  Matrix off = p;
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() != 0.0) return {};
  for (Index i = 0; i < n; ++i) {
    const Complex d = p(i, i);
    if (d == Complex{1.0, 0.0}) signs[static_cast<std::size_t>(i)] = 1;
    else if (d == Complex{-1.0, 0.0}) signs[static_cast<std::size_t>(i)] = -1;
    else return {};
  }
  return signs;
}

bool commutes(const Matrix& h, const Matrix& p) {
  const double scale = std::max(h.cwiseAbs().maxCoeff(), 1.0);
  return (h * p - p * h).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

// Sorted ascending; within near-degenerate clusters parity +1 comes first.
void order_levels(std::vector<std::pair<double, double>>& levels) {
  std::stable_sort(levels.begin(), levels.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  auto tied = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
  for (std::size_t pass = 0; pass < levels.size(); ++pass) {
    bool swapped = false;
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
      if (tied(levels[i].first, levels[i + 1].first) && levels[i].second < levels[i + 1].second) {
        std::swap(levels[i], levels[i + 1]);
        swapped = true;
      }
    }
    if (!swapped) break;
  }
}

double level_scale(const ModelSpec& spec) { return spec.omega_c > 0 ? spec.omega_c : 1.0; }

}  // namespace

Eigensystem eigenspectrum(const Matrix& h, int k, bool with_vectors) {
  if (h.rows() != h.cols()) throw Error(ErrorKind::shape, "eigenspectrum needs a square matrix");
  if (k < 1 || k > h.rows())
    throw Error(ErrorKind::validation,
                "requested " + std::to_string(k) + " levels from a " + std::to_string(h.rows()) + "-dim operator",
                "k");
  const double norm = h.norm();
  if (norm > 0 && (h - h.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol * norm)
    throw Error(ErrorKind::validation, "eigenspectrum input is not Hermitian");
  if (h.imag().cwiseAbs().maxCoeff() == 0.0) return solve_real(h.real(), k, with_vectors);
  return solve_complex(h, k, with_vectors);
}

Eigensystem eigenspectrum(const OperatorMatrix& h, int k, bool with_vectors) {
  return eigenspectrum(h.matrix(), k, with_vectors);
}

LabeledSpectrum labeled_spectrum(const OperatorMatrix& h, const OperatorMatrix& parity, int k) {
  if (!(h.space() == parity.space())) throw Error(ErrorKind::shape, "parity acts on a different space");
  const Matrix& hm = h.matrix();
  if (k < 1 || k > hm.rows()) throw Error(ErrorKind::validation, "level count out of range", "k");
  std::vector<std::pair<double, double>> levels;

  const auto signs = diagonal_signs(parity.matrix());
  if (!signs.empty() && commutes(hm, parity.matrix())) {
    for (int sector : {1, -1}) {
      std::vector<Index> idx;
      for (std::size_t i = 0; i < signs.size(); ++i)
        if (signs[i] == sector) idx.push_back(static_cast<Index>(i));
      if (idx.empty()) continue;
      const auto m = static_cast<Index>(idx.size());
      Matrix block(m, m);
      for (Index r = 0; r < m; ++r)
        for (Index c = 0; c < m; ++c) block(r, c) = hm(idx[r], idx[c]);
      const int want = static_cast<int>(std::min<Index>(k, m));
      const auto es = eigenspectrum(block, want);
      for (Index i = 0; i < es.values.size(); ++i) levels.emplace_back(es.values(i), static_cast<double>(sector));
    }
  } else {
    const auto es = eigenspectrum(hm, k, true);
    for (Index i = 0; i < es.values.size(); ++i) {
      const Vector v = es.vectors.col(i);
      levels.emplace_back(es.values(i), (v.adjoint() * parity.matrix() * v)(0, 0).real());
    }
  }
  order_levels(levels);
  LabeledSpectrum out;
  out.levels.resize(k);
  out.parity.resize(k);
  for (int i = 0; i < k; ++i) {
    out.levels(i) = levels[static_cast<std::size_t>(i)].first;
    out.parity(i) = levels[static_cast<std::size_t>(i)].second;
  }
  return out;
}

double ground_level(const OperatorMatrix& h, const OperatorMatrix& parity) {
  return labeled_spectrum(h, parity, 1).levels(0);
}

int convergence_reference_cutoff(int cutoff) { return static_cast<int>(std::ceil(1.25 * cutoff)); }

namespace {

Eigen::VectorXd levels_at(const ModelSpec& spec, int k, int cutoff) {
  const auto space = spec.space(cutoff);
  return labeled_spectrum(build_hamiltonian(spec, space), symmetry_parity(spec.variant, space), k).levels;
}

ConvergenceReport compare_with_reference(const ModelSpec& spec, const Eigen::VectorXd& base, int cutoff, double tol) {
  const int ref = convergence_reference_cutoff(cutoff);
  const Eigen::VectorXd fine = levels_at(spec, static_cast<int>(base.size()), ref);
  const double scale = level_scale(spec);
  double change = 0.0;
  for (Index i = 0; i < base.size(); ++i)
    change = std::max(change, std::abs(fine(i) - base(i)) / std::max(std::abs(base(i)), scale));
  return {change < tol, change, ref};
}

}  // namespace

ConvergenceReport cutoff_convergence_levels(const ModelSpec& spec, int k, int cutoff, double tol) {
  if (cutoff < 8) throw Error(ErrorKind::validation, "cutoff convergence needs cutoff >= 8", "cutoff");
  return compare_with_reference(spec, levels_at(spec, k, cutoff), cutoff, tol);
}

std::string swept_coupling(Variant v) { return is_two_photon(v) ? "g2" : "g"; }

ModelSpec with_coupling(ModelSpec spec, double value) {
  if (is_two_photon(spec.variant)) spec.g2 = value;
  else spec.g = value;
  return spec;
}

SpectrumScan coupling_scan(const ModelSpec& spec_template, std::span<const double> grid, int k, int cutoff,
                           const ExecutionPolicy& exec) {
  if (grid.empty()) throw Error(ErrorKind::validation, "coupling grid is empty", "grid");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw Error(ErrorKind::validation, "coupling grid must be ascending", "grid");
  spec_template.validate();
  if (cutoff < 8) throw Error(ErrorKind::validation, "coupling scans need cutoff >= 8", "cutoff");

  SpectrumScan scan;
  scan.parameter = swept_coupling(spec_template.variant);
  scan.grid.assign(grid.begin(), grid.end());
  scan.cutoff = cutoff;
  const auto points = grid.size();
  scan.levels.resize(static_cast<Index>(points), k);
  scan.parity.resize(static_cast<Index>(points), k);
  std::vector<char> converged(points, 0);
  scan.relative_change.assign(points, 0.0);

  for_each_point(points, exec, [&](std::size_t i) {
    const ModelSpec spec = with_coupling(spec_template, grid[i]);
    const auto space = spec.space(cutoff);
    const auto labeled =
        labeled_spectrum(build_hamiltonian(spec, space), symmetry_parity(spec.variant, space), k);
    const auto report = compare_with_reference(spec, labeled.levels, cutoff, kLevelConvergenceTol);
    const auto row = static_cast<Index>(i);
    scan.levels.row(row) = labeled.levels.transpose();
    scan.parity.row(row) = labeled.parity.transpose();
    converged[i] = report.converged ? 1 : 0;
    scan.relative_change[i] = report.relative_change;
  });
  scan.converged.assign(converged.begin(), converged.end());
  return scan;
}

double ground_level_drop(const ModelSpec& spec, const CollapseOptions& opts) {
  const int high = opts.cutoff;
  const int low = static_cast<int>(std::lround(opts.cutoff / opts.cutoff_ratio));
  auto ground_at = [&](int c) {
    const auto space = spec.space(c);
    return ground_level(build_hamiltonian(spec, space), symmetry_parity(spec.variant, space));
  };
  return ground_at(low) - ground_at(high);
}

CollapseEstimate detect_collapse(const ModelSpec& spec_template, double lo, double hi, const CollapseOptions& opts) {
  switch (spec_template.variant) {
    case Variant::two_photon_qrm_full:
    case Variant::two_photon_qrm_pure:
    case Variant::multiqubit_two_photon:
      break;
    default:
      throw Error(ErrorKind::unsupported_variant,
                  "collapse detection needs a quadratic two-photon coupling, got " +
                      std::string(to_string(spec_template.variant)),
                  "variant");
  }
  if (!(lo < hi)) throw Error(ErrorKind::interval, "collapse search interval must satisfy lo < hi", "interval");
  if (opts.cutoff < 8 || opts.cutoff_ratio <= 1.0)
    throw Error(ErrorKind::validation, "collapse cutoffs must satisfy cutoff >= 8 and ratio > 1", "cutoff");

  CollapseEstimate est;
  auto unstable = [&](double g2) {
    ++est.evaluations;
    ModelSpec spec = spec_template;
    spec.g2 = g2;
    return ground_level_drop(spec, opts) > opts.drop_tolerance;
  };
  const bool lo_unstable = unstable(lo);
  const bool hi_unstable = unstable(hi);
  if (lo_unstable == hi_unstable)
    throw Error(ErrorKind::interval,
                std::string("ground-level instability is ") + (lo_unstable ? "present" : "absent") +
                    " at both ends of the search interval",
                "interval");
  // Orient so that `lo` is stable.
  if (lo_unstable) std::swap(lo, hi);
  while (std::abs(hi - lo) > opts.relative_precision * std::abs(0.5 * (lo + hi))) {
    const double mid = 0.5 * (lo + hi);
    if (unstable(mid)) hi = mid;
    else lo = mid;
  }
  est.bracket_low = std::min(lo, hi);
  est.bracket_high = std::max(lo, hi);
  est.g_col = 0.5 * (lo + hi);
  return est;
}

}  // namespace tpqrm
