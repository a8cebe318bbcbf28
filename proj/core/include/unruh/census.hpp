#pragma once

#include "unruh/quad.hpp"

// Finite-volume Unruh particle census for a uniformly accelerating box in the
// right Rindler wedge. Everything works in natural units (hbar = c = 1): all
// lengths in meters, masses and accelerations in inverse meters. The census
// depends only on the dimensionless combinations m*chi1, chi2/chi1 and
// s_perp/chi1^2, so it is invariant under the simultaneous rescaling
// (chi1, chi2, m, s_perp) -> (L chi1, L chi2, m/L, L^2 s_perp).

namespace unruh {

struct FieldSpec {
  double mass = 0.0;  // inverse meters; 0 = massless
  void validate() const;
};

// Accelerating volume: constant cross-section s_perp spanning chi1..chi2 in
// distance from the Rindler horizon. The near face moves with the largest
// proper acceleration a1 = 1/chi1.
struct DetectorBox {
  double chi1 = 1.0;    // m
  double chi2 = 1.0;    // m
  double s_perp = 1.0;  // m^2

  double a1() const { return 1.0 / chi1; }
  double volume() const { return s_perp * (chi2 - chi1); }
  void validate() const;
};

struct NumericsConfig {
  double omega_tilde_max = 12.0;  // cutoff for Omega/a (weight e^{-pi Om})
  double kprime_max = 0.0;        // 0 = certified automatic choice
  quad::QuadSpec quad{1e-5, 1e-14, 4000, 200000000};
  void validate() const;
};

enum class RegimeTag {
  suppressed,
  high_acceleration,
  low_acceleration_massless,
  crossover,
};
const char* to_string(RegimeTag t);

struct CensusResult {
  double expectation = 0.0;   // dimensionless particle count, >= 0
  double err_estimate = 0.0;
  RegimeTag regime = RegimeTag::crossover;
  bool converged = false;
  long evaluations = 0;
};

// chi-dependent magnitude of a Rindler mode, sqrt(sinh(pi Om~)/(4 pi^4 a)) *
// K_{i Om~}(kappa chi); the phase factor is excluded.
double rindler_mode_amplitude(double omega_tilde, double kappa, double chi,
                              double a);

// Bose occupation 1/(e^{2 pi Om~} - 1) of the Unruh bath.
double thermal_occupancy(double omega_tilde);

// (Om + Om')/(2 sqrt(Om Om')): the integrand weight by which the two
// finite-volume number operators differ. Equals 1 on the diagonal, which is
// all that survives the thermal delta(Om - Om'), so both operators share one
// census.
double operator_weight_ratio(double omega, double omega_prime);

RegimeTag classify_regime(const FieldSpec& field, const DetectorBox& box);

// Expected Unruh particle number inside the box,
//   (S/(2 pi^3 chi1^2)) int dOm~ dk' k' Om~ e^{-pi Om~}
//        int_{lo(k')}^{rho lo(k')} (dchi'/chi') K^2_{i Om~}(chi'),
// with lo = sqrt(k'^2 + (m chi1)^2) and rho = chi2/chi1.
CensusResult census_exact(const FieldSpec& field, const DetectorBox& box,
                          const NumericsConfig& cfg);

// C = (1/2 pi^3) int dOm~ e^{-pi Om~} Om~ int dk' k' int_{k'}^inf (dchi/chi)
//     K^2_{i Om~}(chi); the high-acceleration census is C S a1^2.
quad::QuadResult constant_C(const NumericsConfig& cfg);

// D = (1/2 pi^3) int dOm~ e^{-pi Om~} Om~ int dk' k' K^2_{i Om~}(k'); the
// massless low-acceleration census is D V a1^3.
quad::QuadResult constant_D(const NumericsConfig& cfg);

double census_high_acc_limit(double s_perp, double a1, double c_value);
double census_low_acc_limit(double volume, double a1, double d_value);

// Acceleration threshold a1 = m (natural units) above which massive Unruh
// particles appear; equivalently chi1 below the reduced Compton wavelength.
double sudden_birth_threshold(const FieldSpec& field);

}  // namespace unruh
