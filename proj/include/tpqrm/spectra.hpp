#pragma once

// Exact diagonalization, coupling-strength scans, cutoff-convergence checks
// and spectral-collapse detection.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tpqrm/fock.hpp"
#include "tpqrm/models.hpp"
#include "tpqrm/parallel.hpp"

namespace tpqrm {

struct Eigensystem {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // columns, empty unless requested
};

/// k lowest eigenvalues of a Hermitian operator (LAPACK ?syevr / ?heevr).
/// Real matrices go through the real solver.
Eigensystem eigenspectrum(const OperatorMatrix& h, int k, bool with_vectors = false);
Eigensystem eigenspectrum(const Matrix& h, int k, bool with_vectors = false);

/// Eigenvalues with a +-1 symmetry label per level.
struct LabeledSpectrum {
  Eigen::VectorXd levels;
  Eigen::VectorXd parity;
};

/// Diagonalizes h block by block in the eigenspaces of a diagonal +-1
/// operator that commutes with it, so labels are exact. Ties are ordered with
/// parity +1 first. Falls back to expectation-value labels if the parity is
/// not diagonal or does not commute with h.
LabeledSpectrum labeled_spectrum(const OperatorMatrix& h, const OperatorMatrix& parity, int k);

/// Ground level only, using the parity blocks when possible.
double ground_level(const OperatorMatrix& h, const OperatorMatrix& parity);

struct ConvergenceReport {
  bool converged = false;
  double relative_change = 0.0;
  int reference_cutoff = 0;
};

constexpr double kLevelConvergenceTol = 1e-6;

/// Cutoff for the reference run of a convergence check: ceil(1.25 * cutoff).
int convergence_reference_cutoff(int cutoff);

/// Compares the k lowest levels at `cutoff` and ceil(1.25 cutoff). The change
/// of each level is measured as |dE| / max(|E|, omega_c).
ConvergenceReport cutoff_convergence_levels(const ModelSpec& spec, int k, int cutoff,
                                            double tol = kLevelConvergenceTol);

struct SpectrumScan {
  std::string parameter;  // "g2" or "g"
  std::vector<double> grid;
  Eigen::MatrixXd levels;  // grid.size() x k
  Eigen::MatrixXd parity;  // grid.size() x k
  std::vector<bool> converged;
  std::vector<double> relative_change;
  int cutoff = 0;
};

/// Coupling that a scan sweeps for a variant: g2 for two-photon models, g otherwise.
std::string swept_coupling(Variant v);
ModelSpec with_coupling(ModelSpec spec, double value);

SpectrumScan coupling_scan(const ModelSpec& spec_template, std::span<const double> grid, int k, int cutoff,
                           const ExecutionPolicy& exec = {});

struct CollapseOptions {
  int cutoff = 150;
  /// The lower cutoff of the instability test is cutoff / ratio.
  double cutoff_ratio = 1.5;
  /// Ground-level drop (units of omega_c) that marks the spectrum as unbounded.
  double drop_tolerance = 1e-3;
  /// Bisection stops once the bracket is narrower than this fraction of its midpoint.
  double relative_precision = 1e-4;
};

struct CollapseEstimate {
  double g_col = 0.0;
  double bracket_low = 0.0;
  double bracket_high = 0.0;
  int evaluations = 0;
};

/// Ground-level drop E0(c1) - E0(c2) between the two instability-test cutoffs.
double ground_level_drop(const ModelSpec& spec, const CollapseOptions& opts);

/// Bisection for the coupling where the ground level starts to depend on the
/// cutoff. The template's coupling (g2) is overwritten during the search.
CollapseEstimate detect_collapse(const ModelSpec& spec_template, double lo, double hi,
                                 const CollapseOptions& opts = {});

}  // namespace tpqrm
