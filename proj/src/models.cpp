#include "tpqrm/models.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>
#include <algorithm>

#include "tpqrm/error.hpp"

namespace tpqrm {

namespace {

struct NamedVariant {
  Variant v;
  std::string_view name;
};

constexpr std::array<NamedVariant, 11> kVariants{{
    {Variant::jc, "jc"},
    {Variant::qrm, "qrm"},
    {Variant::two_photon_jc, "two_photon_jc"},
    {Variant::two_photon_qrm_full, "two_photon_qrm_full"},
    {Variant::two_photon_qrm_pure, "two_photon_qrm_pure"},
    {Variant::multiqubit_two_photon, "multiqubit_two_photon"},
    {Variant::bs_effective, "bs_effective"},
    {Variant::two_photon_bs_effective, "two_photon_bs_effective"},
    {Variant::dispersive_two_photon_rwa, "dispersive_two_photon_rwa"},
    {Variant::dispersive_two_photon_full, "dispersive_two_photon_full"},
    {Variant::dispersive_jc, "dispersive_jc"},
}};

void check_space(const ModelSpec& spec, const HilbertSpace& space) {
  spec.validate();
  if (space.n_qubits() != spec.required_qubits())
    throw Error(ErrorKind::configuration,
                std::string(to_string(spec.variant)) + " needs " + std::to_string(spec.required_qubits()) +
                    " qubit(s), space has " + std::to_string(space.n_qubits()),
                "n_qubits");
  if (space.fock_cutoff() < 2)
    throw Error(ErrorKind::configuration, "Hamiltonians need fock_cutoff >= 2", "fock_cutoff");
}

// Diagonal n + n^2 on the boson factor.
OperatorMatrix kerr_ladder(const HilbertSpace& space) {
  const OperatorMatrix n = number(space);
  return n + n * n;
}

double ratio_or_empty(double num, double den, std::optional<double>& out) {
  if (num == 0.0) {
    out = 0.0;
  } else if (den != 0.0) {
    out = num / den;
  }
  return out.value_or(0.0);
}

double require_shift(const std::optional<double>& v, const char* name) {
  if (!v) throw Error(ErrorKind::singular_detuning, std::string("shift ") + name + " has a zero denominator", name);
  return *v;
}

OperatorMatrix jc_core(const ModelSpec& spec, const HilbertSpace& space) {
  const auto a = annihilation(space);
  const auto sp = pauli(space, Pauli::plus, 0);
  const auto sm = pauli(space, Pauli::minus, 0);
  return spec.omega_c * number(space) + (spec.qubit_frequency() / 2) * pauli(space, Pauli::z, 0) +
         spec.g * (sp * a + sm * a.adjoint());
}

OperatorMatrix two_photon_jc_core(const ModelSpec& spec, const HilbertSpace& space) {
  const auto a = annihilation(space);
  const auto a2 = a * a;
  const auto sp = pauli(space, Pauli::plus, 0);
  const auto sm = pauli(space, Pauli::minus, 0);
  return spec.omega_c * number(space) + (spec.qubit_frequency() / 2) * pauli(space, Pauli::z, 0) +
         spec.g2 * (sp * a2 + sm * a2.adjoint());
}

OperatorMatrix two_photon_qrm(const ModelSpec& spec, const HilbertSpace& space, bool full_quadratic) {
  const auto a = annihilation(space);
  const auto a2 = a * a;
  const auto coupling = full_quadratic ? quadrature_power(space, 2) : a2 + a2.adjoint();
  const auto half = 0.5 * identity(space);
  return spec.omega_c * (number(space) + half) + (spec.qubit_frequency() / 2) * pauli(space, Pauli::z, 0) +
         spec.g2 * (coupling * pauli(space, Pauli::x, 0));
}

OperatorMatrix multiqubit(const ModelSpec& spec, const HilbertSpace& space) {
  const HilbertSpace boson(0, space.fock_cutoff());
  const int nq = space.n_qubits();
  const Matrix id2 = Matrix::Identity(2, 2);
  const Matrix sx = pauli_matrix(Pauli::x);
  const double quartic = spec.g2 < 0 ? spec.g4 : -spec.g4;
  // sum_i sigma_x^i (omega_q / 2 + g2 X^2 + quartic X^4), one Kronecker product per qubit
  Matrix local = (spec.qubit_frequency() / 2) * Matrix::Identity(boson.total_dim(), boson.total_dim()) +
                 spec.g2 * quadrature_power(boson, 2).matrix();
  if (spec.g4 != 0.0) local += quartic * quadrature_power(boson, 4).matrix();
  std::vector<Matrix> factors(nq + 1, id2);
  auto h = spec.omega_c * number(space);
  for (int i = 0; i < nq; ++i) {
    std::fill(factors.begin(), factors.end() - 1, id2);
    factors[i] = sx;
    factors[nq] = local;
    h += tensor(space, factors);
    if (spec.J != 0.0 && i + 1 < nq) {
      factors[i + 1] = sx;
      factors[nq] = Matrix::Identity(boson.total_dim(), boson.total_dim());
      h += spec.J * tensor(space, factors);
    }
  }
  return h;
}

}  // namespace

std::string_view to_string(Variant v) {
  for (const auto& nv : kVariants)
    if (nv.v == v) return nv.name;
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (const auto& nv : kVariants)
    if (nv.name == name) return nv.v;
  return std::nullopt;
}

bool is_two_photon(Variant v) {
  switch (v) {
    case Variant::jc:
    case Variant::qrm:
    case Variant::bs_effective:
    case Variant::dispersive_jc:
      return false;
    default:
      return true;
  }
}

bool is_effective(Variant v) {
  switch (v) {
    case Variant::bs_effective:
    case Variant::two_photon_bs_effective:
    case Variant::dispersive_two_photon_rwa:
    case Variant::dispersive_two_photon_full:
    case Variant::dispersive_jc:
      return true;
    default:
      return false;
  }
}

double ModelSpec::qubit_frequency() const {
  if (omega_q) return *omega_q;
  return is_two_photon(variant) ? 2.0 * omega_c : omega_c;
}

void ModelSpec::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(omega_c) || omega_c < 0) throw Error(ErrorKind::configuration, "omega_c must be >= 0", "omega_c");
  if (omega_q && (!finite(*omega_q) || *omega_q < 0))
    throw Error(ErrorKind::configuration, "omega_q must be >= 0", "omega_q");
  if (!finite(g)) throw Error(ErrorKind::configuration, "g must be finite", "g");
  if (!finite(g2)) throw Error(ErrorKind::configuration, "g2 must be finite", "g2");
  if (!finite(g4) || g4 < 0) throw Error(ErrorKind::configuration, "g4 is a magnitude and must be >= 0", "g4");
  if (!finite(J)) throw Error(ErrorKind::configuration, "J must be finite", "J");
  if (n_qubits < 1) throw Error(ErrorKind::configuration, "n_qubits must be >= 1", "n_qubits");
}

OperatorMatrix build_hamiltonian(const ModelSpec& spec, const HilbertSpace& space) {
  if (is_effective(spec.variant)) return build_effective_hamiltonian(spec, space);
  check_space(spec, space);
  switch (spec.variant) {
    case Variant::jc:
      return jc_core(spec, space);
    case Variant::qrm: {
      const auto a = annihilation(space);
      return spec.omega_c * number(space) + (spec.qubit_frequency() / 2) * pauli(space, Pauli::z, 0) +
             spec.g * ((a + a.adjoint()) * pauli(space, Pauli::x, 0));
    }
    case Variant::two_photon_jc:
      return two_photon_jc_core(spec, space);
    case Variant::two_photon_qrm_full:
      return two_photon_qrm(spec, space, true);
    case Variant::two_photon_qrm_pure:
      return two_photon_qrm(spec, space, false);
    case Variant::multiqubit_two_photon:
      return multiqubit(spec, space);
    default:
      break;
  }
  throw Error(ErrorKind::unsupported_variant, "no builder for variant " + std::string(to_string(spec.variant)));
}

OperatorMatrix build_effective_hamiltonian(const ModelSpec& spec, const HilbertSpace& space) {
  if (!is_effective(spec.variant))
    throw Error(ErrorKind::unsupported_variant,
                std::string(to_string(spec.variant)) + " is not an effective-Hamiltonian variant", "variant");
  check_space(spec, space);
  const auto shifts = analytic_shifts(spec);
  const auto n = number(space);
  const auto sz = pauli(space, Pauli::z, 0);
  const double wc = spec.omega_c;
  const double wq = spec.qubit_frequency();

  switch (spec.variant) {
    case Variant::bs_effective: {
      const double w_bs = shifts.bloch_siegert();
      return jc_core(spec, space) + (w_bs / 2) * sz + w_bs * (sz * n);
    }
    case Variant::two_photon_bs_effective: {
      const double w2 = shifts.two_photon_bloch_siegert();
      const double wq_shift = shifts.qubit_shift();
      return two_photon_jc_core(spec, space) - w2 * n + ((w2 + wq_shift) / 2) * sz +
             (w2 / 2 + 2 * wq_shift) * (sz * kerr_ladder(space));
    }
    // The dispersive forms below use the second-order shift with the sign of
    // (omega_q - 2 omega_c), resp. (omega_q - omega_c): that is the sign for
    // which these Hamiltonians reproduce exact diagonalization.
    case Variant::dispersive_two_photon_rwa: {
      const double chi = -shifts.dispersive_two_photon();
      return (wc + chi) * n + ((wq + chi) / 2) * sz + (chi / 2) * (sz * kerr_ladder(space));
    }
    case Variant::dispersive_two_photon_full: {
      const double chi = -shifts.dispersive_two_photon();
      const double w2 = shifts.two_photon_bloch_siegert();
      const double wq_shift = shifts.qubit_shift();
      return (wc - w2 + chi) * n + ((wq + w2 + wq_shift + chi) / 2) * sz +
             (w2 / 2 + 2 * wq_shift + chi / 2) * (sz * kerr_ladder(space));
    }
    case Variant::dispersive_jc: {
      const double chi1 = -shifts.dispersive_one_photon();
      const double zeta = shifts.kerr_one_photon();
      return (wc + zeta) * n + ((wq + chi1) / 2) * sz + chi1 * (sz * n) + zeta * (sz * (n * n));
    }
    default:
      break;
  }
  throw Error(ErrorKind::unsupported_variant, "unreachable effective variant");
}

double AnalyticShifts::two_photon_bloch_siegert() const { return require_shift(omega_2bs, "omega_2bs"); }
double AnalyticShifts::qubit_shift() const { return require_shift(omega_q_shift, "omega_q_shift"); }
double AnalyticShifts::dispersive_two_photon() const { return require_shift(chi, "chi"); }
double AnalyticShifts::dispersive_one_photon() const { return require_shift(chi_1, "chi_1"); }
double AnalyticShifts::kerr_one_photon() const { return require_shift(zeta, "zeta"); }
double AnalyticShifts::bloch_siegert() const { return require_shift(omega_bs, "omega_bs"); }

AnalyticShifts analytic_shifts(const ModelSpec& spec) {
  spec.validate();
  const double wc = spec.omega_c;
  const double wq = spec.qubit_frequency();
  const double g2sq = spec.g2 * spec.g2;
  const double gsq = spec.g * spec.g;
  const double delta = wc - wq;
  AnalyticShifts s;
  ratio_or_empty(2 * g2sq, 2 * wc + wq, s.omega_2bs);
  ratio_or_empty(2 * g2sq, wq, s.omega_q_shift);
  ratio_or_empty(2 * g2sq, 2 * wc - wq, s.chi);
  ratio_or_empty(gsq, delta, s.chi_1);
  ratio_or_empty(gsq * gsq, delta * delta * delta, s.zeta);
  ratio_or_empty(gsq, wc + wq, s.omega_bs);
  return s;
}

DoubletEnergies analytic_doublet_energies(const ModelSpec& spec, int n) {
  if (n < 0) throw Error(ErrorKind::validation, "doublet index must be >= 0", "n");
  const double nn = n;
  const double upper = std::sqrt((nn + 1) * (nn + 2));
  const double lower = std::sqrt(nn * (nn + 1));
  const double e0 = spec.omega_c * (nn + 2);
  return {e0 + spec.g2 * upper, e0 - spec.g2 * upper, spec.omega_c + spec.g2 * (upper - lower),
          spec.omega_c - spec.g2 * (upper - lower)};
}

OperatorMatrix excitation_number(const HilbertSpace& space) { return number(space) + 0.5 * pauli(space, Pauli::z, 0); }

OperatorMatrix weighted_excitation_number(const HilbertSpace& space) {
  return number(space) + pauli(space, Pauli::z, 0);
}

OperatorMatrix jc_parity(const HilbertSpace& space) {
  auto p = photon_parity(space);
  for (int i = 0; i < space.n_qubits(); ++i) p = pauli(space, Pauli::z, i) * p;
  return p;
}

OperatorMatrix symmetry_parity(Variant v, const HilbertSpace& space) {
  return is_two_photon(v) ? photon_parity(space) : jc_parity(space);
}

OperatorMatrix rotate_qubit_basis(const OperatorMatrix& op) {
  const auto& space = op.space();
  Matrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  h /= std::sqrt(2.0);
  Matrix u = Matrix::Identity(1, 1);
  for (int q = 0; q < space.n_qubits(); ++q) u = kron(u, h);
  u = kron(u, Matrix::Identity(space.boson_dim(), space.boson_dim()));
  return {space, u * op.matrix() * u.adjoint()};
}

}  // namespace tpqrm
