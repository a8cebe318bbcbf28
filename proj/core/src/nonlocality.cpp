#include "unruh/nonlocality.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "unruh/specfun.hpp"

namespace unruh::nonloc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPiSq = 4.0 * kPi * kPi;

// Damping ladder scaled into the analyticity disc |eps| < y of the damped
// integral, which keeps the polynomial extrapolation well inside its radius
// of convergence. When the transform scale kappa*y is large the result is
// exponentially small against the ~1/eps^3 integrand mass, so the ladder is
// widened to keep the roundoff floor below it.
std::vector<double> scaled_ladder(double y, double kappa) {
  const double widen = std::min(1.0, 3.0 / std::max(1.0, kappa * y));
  std::vector<double> eps;
  for (double c : {0.08, 0.04, 0.02, 0.01, 0.005, 0.0025})
    eps.push_back(c * y / widen);
  return eps;
}

}  // namespace

double contact_coefficient() { return 0.5; }

double comm_phiphi_closed(double m, double r) {
  if (!(m > 0.0) || !(r > 0.0))
    throw std::domain_error("comm_phiphi_closed: requires m > 0, r > 0");
  return m * specfun::bessel_k_int(1, m * r) / (kFourPiSq * r);
}

double comm_pipi_closed(double m, double r) {
  if (!(m > 0.0) || !(r > 0.0))
    throw std::domain_error("comm_pipi_closed: requires m > 0, r > 0");
  return -m * m * specfun::bessel_k_int(2, m * r) / (kFourPiSq * r * r);
}

double comm_phiphi_alt(double m, double r) {
  if (!(m > 0.0) || !(r > 0.0))
    throw std::domain_error("comm_phiphi_alt: requires m > 0, r > 0");
  return m * m * specfun::bessel_k_int(1, m * r) / (2.0 * kPi * kPi * r);
}

double comm_pipi_alt(double m, double r) {
  if (!(m > 0.0) || !(r > 0.0))
    throw std::domain_error("comm_pipi_alt: requires m > 0, r > 0");
  return -m * specfun::bessel_k_int(2, m * r) / (2.0 * kPi * kPi * r * r);
}

quad::QuadResult comm_oracle(CommKind kind, double m, double r,
                             const quad::QuadSpec& spec) {
  if (!(r > 0.0)) throw std::domain_error("comm_oracle: requires r > 0");
  if (!(m >= 0.0)) throw std::domain_error("comm_oracle: requires m >= 0");

  auto g = [kind, m](double k) {
    const double w = std::hypot(k, m);
    return kind == CommKind::phiphi ? (w > 0.0 ? k / w : 1.0) : k * w;
  };
  const auto eps = scaled_ladder(r, m);
  const double norm = 1.0 / (kFourPiSq * r);
  quad::QuadSpec espec = spec;  // tolerances refer to the normalized value
  espec.abs_tol = spec.abs_tol / norm;
  auto res = quad::integrate_oscillatory_abel(g, r, eps, espec);
  res.value *= norm;
  res.err_estimate *= norm;
  return res;
}

quad::QuadResult bateman_lhs(double alpha, double y, double nu,
                             const quad::QuadSpec& spec) {
  if (!(alpha > 0.0) || !(y > 0.0))
    throw std::domain_error("bateman_lhs: requires alpha > 0, y > 0");
  const double p = 1.5 - nu;
  auto g = [alpha, p](double x) {
    return x * std::pow(x * x + alpha * alpha, -p);
  };
  return quad::integrate_oscillatory_abel(g, y, scaled_ladder(y, alpha), spec);
}

double bateman_rhs(double alpha, double y, double nu) {
  if (!(alpha > 0.0) || !(y > 0.0))
    throw std::domain_error("bateman_rhs: requires alpha > 0, y > 0");
  const int n = static_cast<int>(std::lround(nu));
  if (nu != n || n < 0 || n > 2)
    throw std::domain_error("bateman_rhs: supported orders are nu in {0, 1, 2}");
  // Gamma(3/2 - nu): Gamma(3/2) = sqrt(pi)/2, Gamma(1/2) = sqrt(pi),
  // Gamma(-1/2) = -2 sqrt(pi); the nu = 2 case flips the overall sign.
  const double gam = specfun::gamma_real(1.5 - nu);
  return std::sqrt(kPi) * std::pow(2.0 * alpha, nu) / (2.0 * gam) *
         std::pow(y, 1.0 - nu) * specfun::bessel_k_int(n, alpha * y);
}

bool DiscrepancyReport::closed_form_validated(double rel_tol) const {
  if (rows.empty()) return false;
  for (const auto& row : rows) {
    if (!row.oracle_ok) return false;
    if (!(std::abs(row.rel_dev_closed) <= rel_tol)) return false;
  }
  return true;
}

bool DiscrepancyReport::all_oracle_ok() const {
  for (const auto& row : rows)
    if (!row.oracle_ok) return false;
  return !rows.empty();
}

DiscrepancyReport make_discrepancy_report(CommKind kind, double m,
                                          double r_min, double r_max,
                                          int points,
                                          const quad::QuadSpec& spec) {
  if (!(m > 0.0)) throw std::domain_error("discrepancy report: requires m > 0");
  if (!(r_min > 0.0) || !(r_max > r_min))
    throw std::domain_error("discrepancy report: requires 0 < r_min < r_max");
  if (points < 2) throw std::domain_error("discrepancy report: needs >= 2 points");

  DiscrepancyReport rep;
  rep.kind = kind;
  rep.mass = m;
  const double lr0 = std::log(r_min), lr1 = std::log(r_max);
  for (int i = 0; i < points; ++i) {
    const double r = std::exp(lr0 + (lr1 - lr0) * i / (points - 1));
    DiscrepancyRow row;
    row.r = r;
    auto oracle = comm_oracle(kind, m, r, spec);
    row.oracle = oracle.value;
    row.oracle_err = oracle.err_estimate;
    row.oracle_ok = oracle.converged;
    row.closed = kind == CommKind::phiphi ? comm_phiphi_closed(m, r)
                                          : comm_pipi_closed(m, r);
    row.alt = kind == CommKind::phiphi ? comm_phiphi_alt(m, r)
                                       : comm_pipi_alt(m, r);
    const double scale = std::max(std::abs(row.oracle), 1e-300);
    row.rel_dev_closed = (row.closed - row.oracle) / scale;
    row.rel_dev_alt = (row.alt - row.oracle) / scale;
    rep.rows.push_back(row);
  }
  return rep;
}

void write_discrepancy_table(std::ostream& os, const DiscrepancyReport& rep) {
  char line[256];
  os << "# equal-time density commutator coefficient, "
     << (rep.kind == CommKind::phiphi ? "phi-phi" : "pi-pi")
     << " channel, mass = " << rep.mass << "\n";
  os << "#        r              oracle         closed_form        alt_form   "
        "   rel_dev_closed    rel_dev_alt  status\n";
  for (const auto& row : rep.rows) {
    std::snprintf(line, sizeof line,
                  "%14.6e  %16.9e  %16.9e  %16.9e  %14.3e  %14.3e  %s\n",
                  row.r, row.oracle, row.closed, row.alt, row.rel_dev_closed,
                  row.rel_dev_alt, row.oracle_ok ? "ok" : "FLAGGED");
    os << line;
  }
}

}  // namespace unruh::nonloc
