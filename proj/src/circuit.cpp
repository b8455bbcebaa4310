#include "tpqrm/circuit.hpp"

#include <cmath>
#include <string>

#include "tpqrm/error.hpp"

namespace tpqrm::circuit {

namespace {

double reduced_flux(double Phi_DC) { return kPi * Phi_DC / kFluxQuantum; }

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw Error(ErrorKind::validation, std::string(field) + " must be finite", field);
}

}  // namespace

void CircuitParams::validate() const {
  require_finite(I_C, "I_C");
  require_finite(C_SQ, "C_SQ");
  require_finite(M, "M");
  require_finite(I_p, "I_p");
  require_finite(Phi_DC, "Phi_DC");
  require_finite(phi_DC, "phi_DC");
  if (I_C <= 0.0) throw Error(ErrorKind::validation, "I_C must be > 0", "I_C");
  if (C_SQ <= 0.0) throw Error(ErrorKind::validation, "C_SQ must be > 0", "C_SQ");
  if (std::abs(Phi_DC / kFluxQuantum) >= 0.5)
    throw Error(ErrorKind::validation, "|Phi_DC| must stay below Phi_0 / 2", "Phi_DC");
  if (I_B) require_finite(*I_B, "I_B");
}

double CircuitParams::bias_phase() const {
  return I_B ? circuit::bias_phase(*I_B, I_C, Phi_DC) : phi_DC;
}

double bias_phase(double I_B, double I_C, double Phi_DC) {
  const double limit = 2.0 * I_C * std::cos(reduced_flux(Phi_DC));
  if (!(limit > 0.0) || std::abs(I_B) > limit)
    throw Error(ErrorKind::validation, "|I_B| exceeds 2 I_C cos(pi Phi_DC / Phi_0)", "I_B");
  return std::asin(I_B / limit);
}

double josephson_energy(const CircuitParams& p) { return p.I_C * kFluxQuantum / (2.0 * kPi); }

double charging_energy(const CircuitParams& p) { return kElementaryCharge * kElementaryCharge / p.C_SQ; }

double josephson_inductance(const CircuitParams& p) {
  p.validate();
  const double c = std::cos(reduced_flux(p.Phi_DC)) * std::cos(p.bias_phase());
  if (std::abs(c) < 1e-12)
    throw Error(ErrorKind::divergent_inductance, "Josephson inductance diverges (cosine factor vanishes)", "Phi_DC");
  return kFluxQuantum / (2.0 * kPi * 2.0 * p.I_C * c);
}

double squid_frequency(const CircuitParams& p) {
  const double l = josephson_inductance(p);
  if (l <= 0.0) throw Error(ErrorKind::precondition, "SQUID frequency needs a positive inductance", "phi_DC");
  return 1.0 / std::sqrt(l * p.C_SQ);
}

double two_photon_coupling(const CircuitParams& p) {
  if (p.bias_phase() != 0.0)
    throw Error(ErrorKind::precondition, "two-photon coupling is defined without bias current", "phi_DC");
  const double w = squid_frequency(p);
  return -(kPi / 4.0) * std::tan(reduced_flux(p.Phi_DC)) * (p.M * p.I_p / kFluxQuantum) * w;
}

double one_photon_coupling(const CircuitParams& p) {
  const double l = josephson_inductance(p);
  const double w = squid_frequency(p);
  const double k = kPi / kFluxQuantum;
  const double zpf = std::sqrt(kHbar * w * l / 2.0);
  return -4.0 * josephson_energy(p) * k * k * std::sin(reduced_flux(p.Phi_DC)) * std::sin(p.bias_phase()) * p.M *
         p.I_p * zpf / kHbar + 0.0;  // no negative zero at zero bias
}

double quartic_ratio(double omega_sq, double I_C, double Phi_DC) {
  const double c = std::cos(reduced_flux(Phi_DC));
  if (!(c > 0.0)) throw Error(ErrorKind::precondition, "quartic ratio needs cos(pi Phi_DC / Phi_0) > 0", "Phi_DC");
  if (!(I_C > 0.0)) throw Error(ErrorKind::validation, "I_C must be > 0", "I_C");
  return (kPi / kFluxQuantum) * kHbar * omega_sq / (24.0 * I_C * c);
}

double quartic_ratio(const CircuitParams& p) { return quartic_ratio(squid_frequency(p), p.I_C, p.Phi_DC); }

CircuitReport report(const CircuitParams& p) {
  CircuitReport r;
  r.L_J = josephson_inductance(p);
  r.omega_SQ = squid_frequency(p);
  r.E_J = josephson_energy(p);
  r.E_C = charging_energy(p);
  r.phi_DC = p.bias_phase();
  r.g1 = one_photon_coupling(p);
  if (r.phi_DC == 0.0) r.g2 = two_photon_coupling(p);
  r.quartic_ratio = quartic_ratio(p);
  return r;
}

CouplingInputs solve_coupling_inputs(double g2, double ratio, double omega_sq, double I_C) {
  if (!(ratio > 0.0)) throw Error(ErrorKind::validation, "quartic ratio must be > 0", "ratio");
  if (!(omega_sq > 0.0)) throw Error(ErrorKind::validation, "omega_SQ must be > 0", "omega_SQ");
  if (!(I_C > 0.0)) throw Error(ErrorKind::validation, "I_C must be > 0", "I_C");
  const double cos_x = (kPi / kFluxQuantum) * kHbar * omega_sq / (24.0 * I_C * ratio);
  if (cos_x > 1.0) throw Error(ErrorKind::validation, "quartic ratio is below its zero-flux value", "ratio");
  double x = std::acos(cos_x);
  if (g2 > 0.0) x = -x;  // g2 = -(pi/4) tan(x) (M I_p / Phi_0) omega_SQ with M I_p >= 0
  CouplingInputs out;
  out.Phi_DC = x * kFluxQuantum / kPi;
  if (g2 != 0.0) {
    if (x == 0.0) throw Error(ErrorKind::validation, "nonzero g2 needs a flux bias", "g2");
    out.MI_p = -4.0 * g2 * kFluxQuantum / (kPi * std::tan(x) * omega_sq);
  }
  return out;
}

double capacitance_for_frequency(double L_J, double omega_sq) {
  if (!(L_J > 0.0) || !(omega_sq > 0.0))
    throw Error(ErrorKind::validation, "inductance and frequency must be > 0", "omega_SQ");
  return 1.0 / (L_J * omega_sq * omega_sq);
}

}  // namespace tpqrm::circuit
