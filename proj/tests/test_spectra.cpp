#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "tpqrm/error.hpp"
#include "tpqrm/models.hpp"
#include "tpqrm/spectra.hpp"

using namespace tpqrm;

namespace {

ModelSpec two_photon(Variant v, double g2) {
  ModelSpec s;
  s.variant = v;
  s.g2 = g2;
  return s;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::io;
}

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("eigenvalues agree with characteristic-polynomial roots") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    const Matrix h = oracle::random_hermitian(8, rng);
    const auto expect = oracle::hermitian_eigenvalues(h);
    const auto got = eigenspectrum(h, 8).values;
    for (int i = 0; i < 8; ++i) CHECK(std::abs(got(i) - expect[i]) < 1e-9);
  }
  Matrix real = oracle::random_hermitian(8, rng).real().cast<Complex>();
  real = 0.5 * (real + real.transpose().eval());
  const auto expect = oracle::hermitian_eigenvalues(real);
  const auto got = eigenspectrum(real, 5).values;
  CHECK(got.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(got(i) - expect[i]) < 1e-9);
}

TEST_CASE("eigenvectors satisfy the eigenproblem") {
  std::mt19937 rng(5);
  const Matrix h = oracle::random_hermitian(10, rng);
  const auto es = eigenspectrum(h, 4, true);
  REQUIRE(es.vectors.cols() == 4);
  for (int i = 0; i < 4; ++i)
    CHECK((h * es.vectors.col(i) - es.values(i) * es.vectors.col(i)).norm() < 1e-10);
}

TEST_CASE("eigenspectrum input errors") {
  CHECK(kind_of([] { eigenspectrum(Matrix::Zero(3, 4), 1); }) == ErrorKind::shape);
  Matrix nh = Matrix::Zero(3, 3);
  nh(0, 1) = 1.0;
  CHECK(kind_of([&] { eigenspectrum(nh, 1); }) == ErrorKind::validation);
  CHECK_THROWS_AS(eigenspectrum(Matrix::Identity(3, 3), 4), Error);
}

TEST_CASE("parity-labelled spectrum equals the full solve") {
  const auto s = two_photon(Variant::two_photon_qrm_full, 0.15);
  const auto space = s.space(40);
  const auto h = build_hamiltonian(s, space);
  const auto labeled = labeled_spectrum(h, photon_parity(space), 12);
  const auto full = eigenspectrum(h, 12).values;
  for (int i = 0; i < 12; ++i) CHECK(std::abs(labeled.levels(i) - full(i)) < 1e-10);
  for (int i = 0; i < 12; ++i) CHECK(std::abs(std::abs(labeled.parity(i)) - 1.0) < 1e-12);
}

TEST_CASE("degenerate levels list parity +1 first") {
  // Decoupled: |e,n> and |g,n+2> share energy n + 2 and parity (-1)^n.
  // |g,0> (+1) and |g,1> (-1) fix the ladder; check a crossing between sectors.
  ModelSpec s = two_photon(Variant::two_photon_jc, 0.0);
  s.omega_q = 1.0;  // |e,n> degenerate with |g,n+1>, opposite parities
  const auto space = s.space(10);
  const auto lab = labeled_spectrum(build_hamiltonian(s, space), photon_parity(space), 6);
  for (int i = 1; i + 1 < 6; i += 2) {
    CHECK(lab.levels(i) == doctest::Approx(lab.levels(i + 1)));
    CHECK(lab.parity(i) == 1.0);
    CHECK(lab.parity(i + 1) == -1.0);
  }
}

TEST_CASE("cutoff convergence at 40, 80, 160") {
  const auto s = two_photon(Variant::two_photon_qrm_full, 0.1);
  std::vector<double> e;
  for (int c : {40, 80, 160}) {
    const auto space = s.space(c);
    e.push_back(labeled_spectrum(build_hamiltonian(s, space), photon_parity(space), 10).levels(9));
  }
  CHECK(std::abs(e[2] - e[1]) <= std::abs(e[1] - e[0]) + 1e-12);
  CHECK(std::abs(e[2] - e[1]) < 1e-6);
  CHECK(cutoff_convergence_levels(s, 10, 80).converged);
  CHECK(convergence_reference_cutoff(80) == 100);
  CHECK(convergence_reference_cutoff(9) == 12);
  CHECK_THROWS_AS(cutoff_convergence_levels(s, 10, 7), Error);
}

TEST_CASE("ground level never rises with the cutoff") {
  for (double g2 : {0.05, 0.2, 0.3}) {
    const auto s = two_photon(Variant::two_photon_qrm_full, g2);
    double prev = 1e300;
    for (int c = 10; c <= 80; c += 10) {
      const auto space = s.space(c);
      const double e0 = ground_level(build_hamiltonian(s, space), photon_parity(space));
      CHECK(e0 <= prev + 1e-12);
      prev = e0;
    }
  }
}

TEST_CASE("coupling scan is identical serial and parallel") {
  const auto s = two_photon(Variant::two_photon_qrm_full, 0.0);
  std::vector<double> grid;
  for (int i = 0; i < 9; ++i) grid.push_back(0.025 * i);
  const auto serial = coupling_scan(s, grid, 6, 30, ExecutionPolicy{1});
  const auto par = coupling_scan(s, grid, 6, 30, ExecutionPolicy{4});
  CHECK(serial.parameter == "g2");
  CHECK(serial.levels == par.levels);
  CHECK(serial.parity == par.parity);
  CHECK(serial.converged == par.converged);
  CHECK(serial.levels(0, 0) == doctest::Approx(-0.5));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto space = s.space(30);
    const auto direct = eigenspectrum(build_hamiltonian(with_coupling(s, grid[i]), space), 6).values;
    for (int j = 0; j < 6; ++j) CHECK(std::abs(serial.levels(static_cast<Index>(i), j) - direct(j)) < 1e-10);
  }
  const std::vector<double> bad{0.1, 0.05};
  CHECK_THROWS_AS(coupling_scan(s, bad, 3, 20), Error);
  CHECK_THROWS_AS(coupling_scan(s, std::vector<double>{}, 3, 20), Error);
  CHECK(swept_coupling(Variant::qrm) == "g");
}

TEST_CASE("collapse detection rejects bad input") {
  CHECK(kind_of([] { detect_collapse(two_photon(Variant::two_photon_jc, 0), 0.1, 0.4); }) ==
        ErrorKind::unsupported_variant);
  CHECK(kind_of([] { detect_collapse(two_photon(Variant::two_photon_qrm_full, 0), 0.4, 0.1); }) == ErrorKind::interval);
  CollapseOptions quick;
  quick.cutoff = 40;
  CHECK(kind_of([&] { detect_collapse(two_photon(Variant::two_photon_qrm_full, 0), 0.01, 0.05, quick); }) ==
        ErrorKind::interval);
}

TEST_CASE("single-qubit collapse at omega_c / 4") {
  CollapseOptions opts;
  opts.cutoff = 120;
  opts.relative_precision = 1e-3;
  const auto est = detect_collapse(two_photon(Variant::two_photon_qrm_full, 0), 0.1, 0.4, opts);
  CHECK(est.g_col == doctest::Approx(0.25).epsilon(0.02));
  CHECK(est.bracket_low <= est.g_col);
  CHECK(est.g_col <= est.bracket_high);
  CHECK(ground_level_drop(two_photon(Variant::two_photon_qrm_full, 0.1), opts) < 1e-8);
}

TEST_CASE("qubit-qubit coupling leaves the multiqubit collapse point alone") {
  CollapseOptions opts;
  opts.cutoff = 60;
  opts.relative_precision = 5e-3;
  ModelSpec s = two_photon(Variant::multiqubit_two_photon, 0);
  s.n_qubits = 3;
  const double free = detect_collapse(s, 0.02, 0.2, opts).g_col;
  s.J = 0.2;
  const double coupled = detect_collapse(s, 0.02, 0.2, opts).g_col;
  CHECK(std::abs(coupled - free) / free < 0.02);
  CHECK(free == doctest::Approx(1.0 / 12).epsilon(0.03));
}

}  // TEST_SUITE
