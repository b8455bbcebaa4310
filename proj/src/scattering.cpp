#include "tpqrm/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tpqrm/error.hpp"
#include "tpqrm/spectra.hpp"

namespace tpqrm {

std::string_view to_string(DriveTarget t) { return t == DriveTarget::cavity ? "cavity" : "qubit"; }

std::optional<DriveTarget> parse_drive_target(std::string_view name) {
  if (name == "cavity") return DriveTarget::cavity;
  if (name == "qubit") return DriveTarget::qubit;
  return std::nullopt;
}

void DriveConfig::validate() const {
  if (!std::isfinite(omega_d) || omega_d <= 0.0) throw Error(ErrorKind::validation, "omega_d must be > 0", "omega_d");
  if (!std::isfinite(intensity) || intensity < 0.0) throw Error(ErrorKind::validation, "D must be >= 0", "D");
  lindblad.validate();
}

void check_scattering_model(const ModelSpec& spec) {
  if (spec.variant != Variant::jc && spec.variant != Variant::two_photon_jc)
    throw Error(ErrorKind::unsupported_variant,
                "driven runs need a rotating-wave variant (jc or two_photon_jc), got " +
                    std::string(to_string(spec.variant)),
                "variant");
  spec.validate();
  const double limit = kStrongCouplingLimit * spec.omega_c;
  if (spec.variant == Variant::jc && std::abs(spec.g) > limit)
    throw Error(ErrorKind::validation, "g exceeds the strong-coupling limit of the rotating frame", "g");
  if (spec.variant == Variant::two_photon_jc && std::abs(spec.g2) > limit)
    throw Error(ErrorKind::validation, "g2 exceeds the strong-coupling limit of the rotating frame", "g2");
}

OperatorMatrix rotating_frame_hamiltonian(const ModelSpec& spec, const DriveConfig& drive, const HilbertSpace& space) {
  check_scattering_model(spec);
  drive.validate();
  if (space.n_qubits() != 1) throw Error(ErrorKind::shape, "driven models act on one qubit");
  if (space.fock_cutoff() < 2) throw Error(ErrorKind::invalid_space, "driven models need fock_cutoff >= 2", "cutoff");

  const double wc = spec.omega_c;
  const double wq = spec.qubit_frequency();
  const double wd = drive.omega_d;
  const auto a = annihilation(space);
  const auto ad = a.adjoint();
  const auto n = number(space);
  const auto sz = pauli(space, Pauli::z, 0);
  const auto sp = pauli(space, Pauli::plus, 0);
  const auto sm = pauli(space, Pauli::minus, 0);

  OperatorMatrix h = OperatorMatrix::zero(space);
  if (spec.variant == Variant::two_photon_jc) {
    const auto coupling = spec.g2 * (sp * a * a + sm * ad * ad);
    if (drive.target == DriveTarget::cavity)
      h = (wc - wd) * n + (0.5 * wq - wd) * sz + coupling;
    else
      h = (wc - 0.5 * wd) * n + (0.5 * (wq - wd)) * sz + coupling;
  } else {
    h = (wc - wd) * n + (0.5 * (wq - wd)) * sz + spec.g * (sp * a + sm * ad);
  }
  const double half_d = 0.5 * drive.intensity;
  if (drive.target == DriveTarget::cavity)
    h += half_d * (a + ad);
  else
    h += half_d * (sp + sm);
  return h;
}

OutputObservables output_observables(const DensityMatrix& rho, double gamma, double D) {
  if (!std::isfinite(gamma) || gamma < 0.0) throw Error(ErrorKind::validation, "gamma must be >= 0", "gamma");
  const auto& space = rho.space();
  const Matrix a = annihilation(space).matrix();
  const Matrix ad = a.adjoint();
  const Matrix& r = rho.matrix();
  auto trace_with = [&](const Matrix& op) { return r.transpose().cwiseProduct(op).sum().real(); };

  OutputObservables out;
  out.photons = trace_with(ad * a);
  out.n_out = gamma * out.photons;
  if (D > 0.0) out.T = gamma * gamma * out.photons / (D * D);
  if (out.photons >= kCorrelationPhotonFloor) {
    const Matrix a2 = a * a;
    const Matrix ad2 = ad * ad;
    out.g2 = std::max(0.0, trace_with(ad2 * a2)) / (out.photons * out.photons);
    out.g3 = std::max(0.0, trace_with(ad2 * ad * a2 * a)) / (out.photons * out.photons * out.photons);
  }
  return out;
}

namespace {

OutputObservables observe(const ModelSpec& spec, const DriveConfig& drive, int cutoff, const SteadyStateOptions& ss) {
  const HilbertSpace space(1, cutoff);
  const auto h = rotating_frame_hamiltonian(spec, drive, space);
  const auto l = build_liouvillian(h, drive.lindblad);
  return output_observables(steady_state(l, ss), drive.lindblad.gamma, drive.intensity);
}

double relative_diff(const std::optional<double>& a, const std::optional<double>& b) {
  if (!a && !b) return 0.0;
  if (!a || !b) return 1.0;
  const double scale = std::max(std::abs(*a), std::abs(*b));
  return scale == 0.0 ? 0.0 : std::abs(*a - *b) / scale;
}

}  // namespace

TransmissionPoint solve_point(const ModelSpec& spec, const DriveConfig& drive, const PointOptions& opts) {
  TransmissionPoint p;
  p.omega_d = drive.omega_d;
  p.D = drive.intensity;
  const auto obs = observe(spec, drive, opts.cutoff, opts.steady);
  p.T = obs.T;
  p.g2 = obs.g2;
  p.g3 = obs.g3;
  p.n_out = obs.n_out;
  if (opts.check_convergence) {
    const auto ref = observe(spec, drive, convergence_reference_cutoff(opts.cutoff), opts.steady);
    const double photon_scale = std::max({std::abs(obs.photons), std::abs(ref.photons), kCorrelationPhotonFloor});
    p.relative_change = std::max({std::abs(obs.photons - ref.photons) / photon_scale, relative_diff(obs.g2, ref.g2),
                                  relative_diff(obs.g3, ref.g3)});
    p.converged = p.relative_change <= opts.convergence_tol;
  } else {
    p.converged = true;
  }
  return p;
}

std::vector<TransmissionPoint> transmission_scan(const ModelSpec& spec, const DriveConfig& drive_template,
                                                 std::span<const double> omega_d_grid, double D,
                                                 const PointOptions& opts, const ExecutionPolicy& exec) {
  check_scattering_model(spec);
  if (!std::is_sorted(omega_d_grid.begin(), omega_d_grid.end()))
    throw Error(ErrorKind::validation, "omega_d grid must be ascending", "omega_d");
  std::vector<TransmissionPoint> out(omega_d_grid.size());
  for_each_point(omega_d_grid.size(), exec, [&](std::size_t i) {
    DriveConfig drive = drive_template;
    drive.omega_d = omega_d_grid[i];
    drive.intensity = D;
    try {
      out[i] = solve_point(spec, drive, opts);
    } catch (const Error& e) {
      out[i] = TransmissionPoint{};
      out[i].omega_d = drive.omega_d;
      out[i].D = D;
      out[i].error = e.what();
    }
  });
  return out;
}

double blockade_drive_frequency(const ModelSpec& spec, DriveTarget target) {
  if (spec.variant == Variant::two_photon_jc) {
    const double base = target == DriveTarget::qubit ? spec.qubit_frequency() : spec.omega_c;
    const double split = target == DriveTarget::qubit ? std::sqrt(2.0) * std::abs(spec.g2) : std::abs(spec.g2);
    return base + split;
  }
  if (spec.variant == Variant::jc) return spec.omega_c + std::abs(spec.g);
  throw Error(ErrorKind::unsupported_variant, "no blockade frequency for this variant", "variant");
}

std::optional<std::pair<double, double>> blockade_window(std::span<const TransmissionPoint> points) {
  std::optional<std::pair<double, double>> best;
  std::size_t best_len = 0;
  std::size_t i = 0;
  auto inside = [](const TransmissionPoint& p) { return p.ok() && p.g2 && p.g3 && *p.g2 >= 1.0 && *p.g3 < 1.0; };
  while (i < points.size()) {
    if (!inside(points[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < points.size() && inside(points[j + 1])) ++j;
    if (j - i + 1 > best_len) {
      best_len = j - i + 1;
      best = std::make_pair(points[i].D, points[j].D);
    }
    i = j + 1;
  }
  return best;
}

BlockadeScan blockade_scan(const ModelSpec& spec, const DriveConfig& drive_template, std::span<const double> D_grid,
                           const PointOptions& opts, const ExecutionPolicy& exec) {
  check_scattering_model(spec);
  if (!std::is_sorted(D_grid.begin(), D_grid.end()))
    throw Error(ErrorKind::validation, "D grid must be ascending", "D");
  BlockadeScan scan;
  scan.points.resize(D_grid.size());
  for_each_point(D_grid.size(), exec, [&](std::size_t i) {
    DriveConfig drive = drive_template;
    drive.intensity = D_grid[i];
    try {
      scan.points[i] = solve_point(spec, drive, opts);
    } catch (const Error& e) {
      scan.points[i] = TransmissionPoint{};
      scan.points[i].omega_d = drive.omega_d;
      scan.points[i].D = drive.intensity;
      scan.points[i].error = e.what();
    }
  });
  scan.window = blockade_window(scan.points);
  return scan;
}

std::vector<Peak> find_peaks(std::span<const TransmissionPoint> points, double min_relative_height) {
  double top = 0.0;
  for (const auto& p : points)
    if (p.ok() && p.T) top = std::max(top, *p.T);
  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < points.size(); ++i) {
    const auto& l = points[i - 1];
    const auto& c = points[i];
    const auto& r = points[i + 1];
    if (!l.T || !c.T || !r.T) continue;
    if (*c.T > *l.T && *c.T >= *r.T && *c.T >= min_relative_height * top) peaks.push_back({c.omega_d, *c.T, i});
  }
  return peaks;
}

std::vector<Peak> refine_peaks(const ModelSpec& spec, const DriveConfig& drive_template, double D,
                               std::span<const TransmissionPoint> points, std::span<const Peak> peaks,
                               const PointOptions& opts, double xtol) {
  PointOptions quick = opts;
  quick.check_convergence = false;
  auto transmission = [&](double wd) {
    DriveConfig drive = drive_template;
    drive.omega_d = wd;
    drive.intensity = D;
    return solve_point(spec, drive, quick).T.value_or(0.0);
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  std::vector<Peak> out;
  for (const auto& pk : peaks) {
    double a = points[pk.grid_index - 1].omega_d;
    double b = points[pk.grid_index + 1].omega_d;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = transmission(x1);
    double f2 = transmission(x2);
    while (b - a > xtol) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = transmission(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = transmission(x1);
      }
    }
    Peak refined = pk;
    refined.omega_d = f1 >= f2 ? x1 : x2;
    refined.T = std::max(f1, f2);
    if (pk.T > refined.T) {  // the grid sample was higher than anything the search found
      refined.omega_d = pk.omega_d;
      refined.T = pk.T;
    }
    out.push_back(refined);
  }
  return out;
}

}  // namespace tpqrm
