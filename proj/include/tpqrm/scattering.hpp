#pragma once

// Driven-dissipative observables in the strong-coupling regime: rotating-frame
// Hamiltonians, transmission and output photon correlations.
//
// Drive calibration: the frame Hamiltonian carries (D/2)(s + s^dagger), so an
// empty resonant cavity holds (D/gamma)^2 photons, and n_in = D^2/gamma for
// both drive targets. The output port sees sqrt(gamma) a with vacuum input.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tpqrm/liouville.hpp"
#include "tpqrm/models.hpp"
#include "tpqrm/parallel.hpp"

namespace tpqrm {

enum class DriveTarget { cavity, qubit };

std::string_view to_string(DriveTarget t);
std::optional<DriveTarget> parse_drive_target(std::string_view name);

struct DriveConfig {
  DriveTarget target = DriveTarget::cavity;
  double omega_d = 1.0;
  double intensity = 0.0;  // D
  LindbladConfig lindblad;

  void validate() const;
};

/// Couplings above this (units of omega_c) are rejected by the scattering layer.
constexpr double kStrongCouplingLimit = 0.05;

/// Throws Error(unsupported_variant) unless the variant is jc or two_photon_jc,
/// and Error(validation) outside the strong-coupling regime.
void check_scattering_model(const ModelSpec& spec);

OperatorMatrix rotating_frame_hamiltonian(const ModelSpec& spec, const DriveConfig& drive, const HilbertSpace& space);

struct OutputObservables {
  double photons = 0.0;  // <a^dagger a>
  double n_out = 0.0;    // gamma <a^dagger a>
  std::optional<double> T;
  std::optional<double> g2;
  std::optional<double> g3;
};

/// Below this photon number the correlation functions are reported as absent.
constexpr double kCorrelationPhotonFloor = 1e-14;

OutputObservables output_observables(const DensityMatrix& rho, double gamma, double D);

struct TransmissionPoint {
  double omega_d = 0.0;
  double D = 0.0;
  std::optional<double> T;
  std::optional<double> g2;
  std::optional<double> g3;
  std::optional<double> n_out;
  bool converged = false;
  double relative_change = 0.0;
  std::string error;  // nonempty when the point failed

  bool ok() const { return error.empty(); }
};

constexpr double kObservableConvergenceTol = 1e-4;

struct PointOptions {
  int cutoff = 20;
  bool check_convergence = true;
  double convergence_tol = kObservableConvergenceTol;
  SteadyStateOptions steady;
};

/// Steady state at one drive setting; throws on failure.
TransmissionPoint solve_point(const ModelSpec& spec, const DriveConfig& drive, const PointOptions& opts);

/// One point per grid frequency at fixed D. Failed points carry an error
/// message and converged = false; the scan continues.
std::vector<TransmissionPoint> transmission_scan(const ModelSpec& spec, const DriveConfig& drive_template,
                                                 std::span<const double> omega_d_grid, double D,
                                                 const PointOptions& opts, const ExecutionPolicy& exec = {});

/// omega_c + g for the one-photon model, 2 omega_c + sqrt(2) g2 for the two-photon model.
double blockade_drive_frequency(const ModelSpec& spec, DriveTarget target);

struct BlockadeScan {
  std::vector<TransmissionPoint> points;
  /// Longest contiguous D-range of points with g2 >= 1 and g3 < 1.
  std::optional<std::pair<double, double>> window;
};

BlockadeScan blockade_scan(const ModelSpec& spec, const DriveConfig& drive_template, std::span<const double> D_grid,
                           const PointOptions& opts, const ExecutionPolicy& exec = {});

std::optional<std::pair<double, double>> blockade_window(std::span<const TransmissionPoint> points);

struct Peak {
  double omega_d = 0.0;
  double T = 0.0;
  std::size_t grid_index = 0;
};

/// Interior local maxima of T whose height is at least min_relative_height of the largest T.
std::vector<Peak> find_peaks(std::span<const TransmissionPoint> points, double min_relative_height = 0.01);

/// Golden-section refinement of each grid peak between its neighbouring grid points.
std::vector<Peak> refine_peaks(const ModelSpec& spec, const DriveConfig& drive_template, double D,
                               std::span<const TransmissionPoint> points, std::span<const Peak> peaks,
                               const PointOptions& opts, double xtol);

}  // namespace tpqrm
