#pragma once

// dc-SQUID / flux-qubit circuit parameters mapped onto model couplings.
// SI units throughout: amperes, farads, henries, webers, rad/s.

#include <optional>

namespace tpqrm::circuit {

inline constexpr double kPlanck = 6.62607015e-34;
inline constexpr double kElementaryCharge = 1.602176634e-19;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHbar = kPlanck / (2.0 * kPi);
inline constexpr double kFluxQuantum = kPlanck / (2.0 * kElementaryCharge);

struct CircuitParams {
  double I_C = 0.0;     // critical current of one junction
  double C_SQ = 0.0;    // total SQUID capacitance
  double M = 0.0;       // qubit-SQUID mutual inductance
  double I_p = 0.0;     // qubit persistent current
  double Phi_DC = 0.0;  // static SQUID flux
  double phi_DC = 0.0;  // static bias phase, ignored when I_B is set
  std::optional<double> I_B;

  /// Throws Error(validation) naming the field: I_C, C_SQ > 0, |Phi_DC| < Phi_0 / 2.
  void validate() const;
  /// The bias phase in effect: derived from I_B when given, phi_DC otherwise.
  double bias_phase() const;
};

/// arcsin(I_B / (2 I_C cos(pi Phi_DC / Phi_0))); Error(validation) outside the domain.
double bias_phase(double I_B, double I_C, double Phi_DC);

double josephson_energy(const CircuitParams& p);
double charging_energy(const CircuitParams& p);

/// Phi_0 / (2 pi (2 I_C) cos(pi Phi_DC / Phi_0) cos(phi_DC)).
/// Error(divergent_inductance) when the cosine product vanishes.
double josephson_inductance(const CircuitParams& p);

/// 1 / sqrt(L_J C_SQ).
double squid_frequency(const CircuitParams& p);

/// -(pi/4) tan(pi Phi_DC / Phi_0) (M I_p / Phi_0) omega_SQ. Needs phi_DC = 0
/// (Error(precondition) otherwise).
double two_photon_coupling(const CircuitParams& p);

/// Coefficient of (a + a^dagger) sigma_z divided by hbar.
double one_photon_coupling(const CircuitParams& p);

/// |U_4P| / |U_TPR| = (pi / Phi_0) hbar omega_SQ / (24 I_C cos(pi Phi_DC / Phi_0)).
double quartic_ratio(const CircuitParams& p);
double quartic_ratio(double omega_sq, double I_C, double Phi_DC = 0.0);

struct CircuitReport {
  double L_J = 0.0;
  double omega_SQ = 0.0;
  double E_J = 0.0;
  double E_C = 0.0;
  double phi_DC = 0.0;
  double g1 = 0.0;
  std::optional<double> g2;  // only defined without bias current
  double quartic_ratio = 0.0;
};

CircuitReport report(const CircuitParams& p);

/// Flux bias and coupling flux that reproduce a (g2, quartic ratio) pair at
/// given omega_SQ and I_C, with M I_p taken nonnegative.
struct CouplingInputs {
  double Phi_DC = 0.0;
  double MI_p = 0.0;
};

CouplingInputs solve_coupling_inputs(double g2, double ratio, double omega_sq, double I_C);

/// Capacitance that puts the SQUID resonance at omega_sq for the given inductance.
double capacitance_for_frequency(double L_J, double omega_sq);

}  // namespace tpqrm::circuit
