#include <cmath>
#include <vector>

#include "doctest.h"
#include "tpqrm/error.hpp"
#include "tpqrm/scattering.hpp"
#include "tpqrm/spectra.hpp"

using namespace tpqrm;

namespace {

ModelSpec tpjc(double g2) {
  ModelSpec s;
  s.variant = Variant::two_photon_jc;
  s.g2 = g2;
  return s;
}

DriveConfig cavity_drive(double omega_d, double D, double gamma = 1e-3) {
  DriveConfig d;
  d.target = DriveTarget::cavity;
  d.omega_d = omega_d;
  d.intensity = D;
  d.lindblad = {gamma, 1e-4, 0.0};
  return d;
}

double lorentzian(double detuning, double gamma) { return 1.0 / (1.0 + 4.0 * detuning * detuning / (gamma * gamma)); }

TransmissionPoint synthetic(double x, std::optional<double> T, std::optional<double> g2 = {},
                            std::optional<double> g3 = {}) {
  TransmissionPoint p;
  p.omega_d = x;
  p.D = x;
  p.T = T;
  p.g2 = g2;
  p.g3 = g3;
  p.converged = true;
  return p;
}

}  // namespace

TEST_SUITE("scattering") {

TEST_CASE("drive target names") {
  CHECK(parse_drive_target("qubit") == DriveTarget::qubit);
  CHECK(parse_drive_target(to_string(DriveTarget::cavity)) == DriveTarget::cavity);
  CHECK_FALSE(parse_drive_target("flux").has_value());
}

TEST_CASE("driven runs accept only rotating-wave models in the strong-coupling regime") {
  ModelSpec q = tpjc(0.01);
  q.variant = Variant::two_photon_qrm_full;
  try {
    check_scattering_model(q);
    FAIL("expected unsupported_variant");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unsupported_variant);
  }
  try {
    check_scattering_model(tpjc(0.06));
    FAIL("expected validation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::validation);
    CHECK(e.field() == "g2");
  }
  CHECK_NOTHROW(check_scattering_model(tpjc(0.05)));
  ModelSpec jc;
  jc.variant = Variant::jc;
  jc.g = 0.02;
  CHECK_NOTHROW(check_scattering_model(jc));
}

TEST_CASE("frame Hamiltonian vanishes at resonance without coupling or drive") {
  const HilbertSpace space(1, 6);
  const auto h = rotating_frame_hamiltonian(tpjc(0.0), cavity_drive(1.0, 0.0), space);
  CHECK(h.matrix().cwiseAbs().maxCoeff() == 0.0);
  DriveConfig q = cavity_drive(2.0, 0.0);
  q.target = DriveTarget::qubit;
  const auto hq = rotating_frame_hamiltonian(tpjc(0.0), q, space);
  CHECK(hq.matrix().cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(rotating_frame_hamiltonian(tpjc(0.0), cavity_drive(1.0, 0.0), HilbertSpace(1, 1)), Error);
  CHECK_THROWS_AS(rotating_frame_hamiltonian(tpjc(0.0), cavity_drive(-1.0, 0.0), space), Error);
}

TEST_CASE("drive term carries amplitude D/2: Hellmann-Feynman slope") {
  const HilbertSpace space(1, 12);
  const auto spec = tpjc(0.02);
  auto lowest = [&](double D) {
    return eigenspectrum(rotating_frame_hamiltonian(spec, cavity_drive(0.97, D), space), 1, true);
  };
  const double D = 0.004, h = 1e-5;
  const double slope = (lowest(D + h).values(0) - lowest(D - h).values(0)) / (2 * h);
  const auto es = lowest(D);
  const Vector psi = es.vectors.col(0);
  const Matrix x = (annihilation(space) + creation(space)).matrix();
  const double hf = 0.5 * (psi.adjoint() * x * psi)(0, 0).real();
  CHECK(std::abs(slope - hf) < 1e-7);
}

TEST_CASE("observables of reference states") {
  const HilbertSpace space(1, 8);
  const auto fock1 = DensityMatrix::ground_fock(space, 1);
  const auto o = output_observables(fock1, 0.5, 0.25);
  CHECK(o.photons == doctest::Approx(1.0));
  CHECK(o.n_out == doctest::Approx(0.5));
  CHECK(*o.T == doctest::Approx(0.25 / 0.0625));
  CHECK(*o.g2 == 0.0);
  CHECK(*o.g3 == 0.0);

  const auto vac = output_observables(DensityMatrix::ground_fock(space, 0), 0.5, 0.0);
  CHECK_FALSE(vac.T.has_value());
  CHECK_FALSE(vac.g2.has_value());
  CHECK_FALSE(vac.g3.has_value());

  const auto fock3 = output_observables(DensityMatrix::ground_fock(space, 3), 1.0, 1.0);
  CHECK(*fock3.g2 == doctest::Approx(6.0 / 9.0));
  CHECK(*fock3.g3 == doctest::Approx(6.0 / 27.0));
}

TEST_CASE("driven empty cavity is coherent with a Lorentzian response") {
  const double gamma = 1e-3, D = 1e-3;
  const auto spec = tpjc(0.0);
  PointOptions opts;
  opts.cutoff = 24;
  for (double k : {-5.0, -2.0, -0.5, 0.0, 1.0, 3.0, 5.0}) {
    const auto p = solve_point(spec, cavity_drive(1.0 + k * gamma, D, gamma), opts);
    CAPTURE(k);
    CHECK(std::abs(*p.T - lorentzian(k * gamma, gamma)) < 1e-6);
    CHECK(std::abs(*p.g2 - 1.0) < 1e-6);
    CHECK(std::abs(*p.g3 - 1.0) < 1e-6);
    CHECK(p.converged);
  }
}

TEST_CASE("weak cavity drive: two-photon coupling barely disturbs the bare resonance") {
  const double gamma = 1e-3;
  const auto spec = tpjc(0.01);
  PointOptions opts;
  opts.cutoff = 8;
  for (double k : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
    const auto p = solve_point(spec, cavity_drive(1.0 + k * gamma, 1e-5, gamma), opts);
    CAPTURE(k);
    CHECK(std::abs(*p.T - lorentzian(k * gamma, gamma)) < 0.02 * lorentzian(k * gamma, gamma));
  }
}

TEST_CASE("qubit drive preserves photon parity") {
  const auto spec = tpjc(0.01);
  DriveConfig d = cavity_drive(blockade_drive_frequency(spec, DriveTarget::qubit), 3e-4);
  d.target = DriveTarget::qubit;
  d.lindblad = {1e-3, 1e-3, 0.0};
  const HilbertSpace space(1, 12);
  const auto rho = steady_state(build_liouvillian(rotating_frame_hamiltonian(spec, d, space), d.lindblad));
  const double n = expectation(rho, number(space)).real();
  CHECK(n > 0.0);
  CHECK(std::abs(expectation(rho, annihilation(space))) < 1e-6 * std::sqrt(n));
  CHECK(blockade_drive_frequency(spec, DriveTarget::qubit) == doctest::Approx(2.0 + std::sqrt(2.0) * 0.01));
  CHECK(blockade_drive_frequency(spec, DriveTarget::cavity) == doctest::Approx(1.01));
}

TEST_CASE("failed points are flagged and the scan continues") {
  const auto spec = tpjc(0.01);
  DriveConfig d = cavity_drive(1.0, 1e-5);
  d.lindblad = {0.0, 0.0, 0.0};
  const std::vector<double> grid{0.99, 1.0, 1.01};
  PointOptions opts;
  opts.cutoff = 6;
  const auto pts = transmission_scan(spec, d, grid, 1e-5, opts);
  REQUIRE(pts.size() == 3);
  for (const auto& p : pts) {
    CHECK_FALSE(p.ok());
    CHECK_FALSE(p.converged);
    CHECK_FALSE(p.T.has_value());
  }
  CHECK(pts[2].omega_d == 1.01);
  const std::vector<double> descending{1.0, 0.99};
  CHECK_THROWS_AS(transmission_scan(spec, cavity_drive(1.0, 1e-5), descending, 1e-5, opts), Error);
}

TEST_CASE("transmission scan is identical serial and parallel") {
  const auto spec = tpjc(0.01);
  std::vector<double> grid;
  for (int i = 0; i < 7; ++i) grid.push_back(0.997 + 0.001 * i);
  PointOptions opts;
  opts.cutoff = 8;
  const auto a = transmission_scan(spec, cavity_drive(1.0, 1e-5), grid, 1e-5, opts, ExecutionPolicy{1});
  const auto b = transmission_scan(spec, cavity_drive(1.0, 1e-5), grid, 1e-5, opts, ExecutionPolicy{4});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a[i].T == b[i].T);
    CHECK(a[i].g2 == b[i].g2);
    CHECK(a[i].relative_change == b[i].relative_change);
  }
}

TEST_CASE("blockade window on synthetic data") {
  std::vector<TransmissionPoint> pts{
      synthetic(1, 1.0, 0.5, 0.2), synthetic(2, 1.0, 1.2, 0.5), synthetic(3, 1.0, 1.5, 0.9),
      synthetic(4, 1.0, 0.9, 0.5), synthetic(5, 1.0, 1.1, 0.3), synthetic(6, 1.0, 1.3, 0.4),
      synthetic(7, 1.0, 1.0, 0.1), synthetic(8, 1.0, 2.0, 1.5),
  };
  const auto w = blockade_window(pts);
  REQUIRE(w.has_value());
  CHECK(w->first == 5.0);
  CHECK(w->second == 7.0);
  pts[5].error = "failed";
  const auto w2 = blockade_window(pts);
  REQUIRE(w2.has_value());
  CHECK(w2->first == 2.0);
  CHECK(w2->second == 3.0);
  std::vector<TransmissionPoint> none{synthetic(1, 1.0, 0.5, 0.1), synthetic(2, 1.0, {}, {})};
  CHECK_FALSE(blockade_window(none).has_value());
}

TEST_CASE("peak finding on synthetic data") {
  std::vector<TransmissionPoint> pts;
  for (int i = 0; i < 41; ++i) {
    const double x = i * 0.05;
    pts.push_back(synthetic(x, lorentzian(x - 0.5, 0.1) + 0.4 * lorentzian(x - 1.5, 0.1) + 0.005 * lorentzian(x - 1.0, 0.02)));
  }
  const auto peaks = find_peaks(pts, 0.05);
  REQUIRE(peaks.size() == 2);
  CHECK(peaks[0].omega_d == doctest::Approx(0.5));
  CHECK(peaks[1].omega_d == doctest::Approx(1.5));
  CHECK(peaks[1].grid_index == 30);
  CHECK(find_peaks(pts, 0.0).size() == 3);
}

TEST_CASE("peak refinement locates the bare cavity resonance") {
  const double gamma = 1e-3;
  const auto spec = tpjc(0.0);
  std::vector<double> grid;
  for (int i = 0; i < 9; ++i) grid.push_back(1.0 - 4e-3 + 1e-3 * i + 3e-4);
  PointOptions opts;
  opts.cutoff = 6;
  const auto pts = transmission_scan(spec, cavity_drive(1.0, 1e-5, gamma), grid, 1e-5, opts);
  const auto peaks = find_peaks(pts);
  REQUIRE(peaks.size() == 1);
  const auto refined = refine_peaks(spec, cavity_drive(1.0, 1e-5, gamma), 1e-5, pts, peaks, opts, 1e-7);
  CHECK(std::abs(refined[0].omega_d - 1.0) < 2e-7);
  CHECK(refined[0].T == doctest::Approx(1.0).epsilon(1e-6));
}

}  // TEST_SUITE
