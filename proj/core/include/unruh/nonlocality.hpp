#pragma once

#include <iosfwd>
#include <vector>

#include "unruh/quad.hpp"

// Equal-time commutator structure of the Minkowski particle density
// rho = i phi^- d/dt phi^+. The contact (delta-supported) part is kept
// symbolic; the smooth coefficient functions multiplying the antisymmetric
// phi^-phi^+ and pi^-pi^+ combinations are evaluated two ways:
//   - closed forms in K_1 / K_2,
//   - an Abel-regularized momentum-integral oracle,
// and the oracle is authoritative. Two closed-form prefactor candidates
// circulate for each coefficient; the suite validates one against the oracle
// and the discrepancy report shows both.

namespace unruh::nonloc {

enum class CommKind { phiphi, pipi };

// Scalar coefficient of the i delta^3(dx) contact term in [phi^+_1, pi^-_2];
// the conjugate pairing carries the opposite sign.
double contact_coefficient();  // +1/2

// Oracle-validated closed forms.
double comm_phiphi_closed(double m, double r);  //  m  K_1(m r) / (4 pi^2 r)
double comm_pipi_closed(double m, double r);    // -m^2 K_2(m r) / (4 pi^2 r^2)

// Alternative prefactor candidates retained for the discrepancy report.
double comm_phiphi_alt(double m, double r);  //  m^2 K_1(m r) / (2 pi^2 r)
double comm_pipi_alt(double m, double r);    // -m  K_2(m r) / (2 pi^2 r^2)

// Ground truth: (1/(4 pi^2 r)) * Abel-regularized
//   int_0^inf dk k w(k) sin(k r),  w = (k^2+m^2)^{-1/2} or (k^2+m^2)^{+1/2}.
// Accepts m = 0 (massless limits 1/(4 pi^2 r^2) and -1/(2 pi^2 r^4)).
quad::QuadResult comm_oracle(CommKind kind, double m, double r,
                             const quad::QuadSpec& spec);

// Sine-transform identity
//   int_0^inf x sin(xy) / (x^2 + a^2)^{3/2 - nu} dx
//     = sqrt(pi) (2a)^nu / (2 Gamma(3/2 - nu)) y^{1-nu} K_nu(a y).
// The left side is Abel-regularized (divergent for nu >= 1); the right side
// is closed form. Supported nu: 0, 1, 2.
quad::QuadResult bateman_lhs(double alpha, double y, double nu,
                             const quad::QuadSpec& spec);
double bateman_rhs(double alpha, double y, double nu);

struct DiscrepancyRow {
  double r = 0.0;
  double oracle = 0.0;
  double oracle_err = 0.0;
  double closed = 0.0;
  double alt = 0.0;
  double rel_dev_closed = 0.0;
  double rel_dev_alt = 0.0;
  bool oracle_ok = true;
};

struct DiscrepancyReport {
  CommKind kind = CommKind::phiphi;
  double mass = 0.0;
  std::vector<DiscrepancyRow> rows;

  bool closed_form_validated(double rel_tol) const;
  bool all_oracle_ok() const;
};

DiscrepancyReport make_discrepancy_report(CommKind kind, double m,
                                          double r_min, double r_max,
                                          int points,
                                          const quad::QuadSpec& spec);

// Plain-text table: grid point, oracle, both candidate values, relative
// deviations.
void write_discrepancy_table(std::ostream& os, const DiscrepancyReport& rep);

}  // namespace unruh::nonloc
