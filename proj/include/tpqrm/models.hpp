#pragma once

// Hamiltonian builders for the one- and two-photon Rabi / Jaynes-Cummings
// family, their perturbative effective forms, and closed-form spectral
// quantities used as oracles.
//
// Energies are in units of the cavity frequency unless a spec says otherwise.
// Parameters read per variant (everything else is ignored):
//
//   jc                          omega_c, omega_q, g
//   qrm                         omega_c, omega_q, g
//   two_photon_jc               omega_c, omega_q, g2
//   two_photon_qrm_full         omega_c, omega_q, g2
//   two_photon_qrm_pure         omega_c, omega_q, g2
//   multiqubit_two_photon       omega_c, omega_q, g2, g4, J, n_qubits
//   bs_effective                omega_c, omega_q, g
//   two_photon_bs_effective     omega_c, omega_q, g2
//   dispersive_two_photon_rwa   omega_c, omega_q, g2
//   dispersive_two_photon_full  omega_c, omega_q, g2
//   dispersive_jc               omega_c, omega_q, g

#include <optional>
#include <string_view>

#include "tpqrm/fock.hpp"

namespace tpqrm {

enum class Variant {
  jc,
  qrm,
  two_photon_jc,
  two_photon_qrm_full,
  two_photon_qrm_pure,
  multiqubit_two_photon,
  bs_effective,
  two_photon_bs_effective,
  dispersive_two_photon_rwa,
  dispersive_two_photon_full,
  dispersive_jc,
};

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

bool is_two_photon(Variant v);
bool is_effective(Variant v);

struct ModelSpec {
  Variant variant = Variant::two_photon_jc;
  double omega_c = 1.0;
  /// Unset means resonance: 2 omega_c for two-photon variants, omega_c otherwise.
  std::optional<double> omega_q;
  double g = 0.0;
  double g2 = 0.0;
  /// Magnitude of the quartic correction. It enters with the sign opposite to
  /// the two-photon term, as the next order of the SQUID cosine expansion does.
  double g4 = 0.0;
  double J = 0.0;
  int n_qubits = 1;

  double qubit_frequency() const;
  /// Number of qubits the variant acts on.
  int required_qubits() const { return variant == Variant::multiqubit_two_photon ? n_qubits : 1; }
  HilbertSpace space(int fock_cutoff) const { return {required_qubits(), fock_cutoff}; }

  /// Throws Error(configuration) on negative frequencies, non-finite values, or n_qubits < 1.
  void validate() const;
};

/// Builds any variant; effective variants are forwarded to build_effective_hamiltonian.
OperatorMatrix build_hamiltonian(const ModelSpec& spec, const HilbertSpace& space);

/// Bloch-Siegert and dispersive effective Hamiltonians, constants dropped.
OperatorMatrix build_effective_hamiltonian(const ModelSpec& spec, const HilbertSpace& space);

/// Second-order shifts. A field is empty when its denominator vanishes while
/// the coupling it multiplies is nonzero; the accessors then throw
/// Error(singular_detuning) naming the shift.
struct AnalyticShifts {
  std::optional<double> omega_2bs;      // 2 g2^2 / (2 omega_c + omega_q)
  std::optional<double> omega_q_shift;  // 2 g2^2 / omega_q
  std::optional<double> chi;            // 2 g2^2 / (2 omega_c - omega_q)
  std::optional<double> chi_1;          // g^2 / (omega_c - omega_q)
  std::optional<double> zeta;           // g^4 / (omega_c - omega_q)^3
  std::optional<double> omega_bs;       // g^2 / (omega_c + omega_q)

  double two_photon_bloch_siegert() const;
  double qubit_shift() const;
  double dispersive_two_photon() const;
  double dispersive_one_photon() const;
  double kerr_one_photon() const;
  double bloch_siegert() const;
};

AnalyticShifts analytic_shifts(const ModelSpec& spec);

/// Two-photon JC doublets at resonance (omega_q = 2 omega_c assumed, not checked):
/// E_n^pm relative to the ground state and Delta_n^pm = E_n^pm - E_{n-1}^pm.
struct DoubletEnergies {
  double E_plus;
  double E_minus;
  double delta_plus;
  double delta_minus;
};

DoubletEnergies analytic_doublet_energies(const ModelSpec& spec, int n);

/// Conserved excitation numbers: a^dagger a + sigma_z / 2 (one photon) and
/// a^dagger a + sigma_z (two photon), on a single-qubit space.
OperatorMatrix excitation_number(const HilbertSpace& space);
OperatorMatrix weighted_excitation_number(const HilbertSpace& space);

/// sigma_z e^{i pi a^dagger a} for the one-photon models, summed parity over
/// all qubits' sigma_z for multi-qubit spaces.
OperatorMatrix jc_parity(const HilbertSpace& space);

/// The conserved parity of a variant: photon parity for two-photon variants,
/// jc_parity for one-photon variants.
OperatorMatrix symmetry_parity(Variant v, const HilbertSpace& space);

/// Hadamard on every qubit, U H U^dagger. Maps sigma_x <-> sigma_z, relating the
/// sigma_x qubit term of the multi-qubit builder to the sigma_z convention of
/// the single-qubit builders.
OperatorMatrix rotate_qubit_basis(const OperatorMatrix& op);

}  // namespace tpqrm
