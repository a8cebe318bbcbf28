#include "unruh/census.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "unruh/specfun.hpp"

namespace unruh {

namespace {

constexpr double kPi = std::numbers::pi;

// "m chi1 much smaller than 1" cut used by the regime classifier.
constexpr double kHighAccMassCut = 0.1;

// Certified bound on the k'-chi' double integral at fixed Omega~: swapping
// orders gives exactly (1 - rho^-2)/2 * int chi K^2 dchi <= pi nu/(4 sinh pi nu)
// (the massive lower bound lo >= k' only shrinks it). Used to skip the deep
// Omega~ tail, where the integrand falls off like e^{-2 pi Om}.
double kint_upper_bound(double om) {
  return 0.25 * kPi * om / std::sinh(kPi * om);
}

double evaluator_accuracy(double rel_tol) {
  return std::clamp(0.004 * rel_tol, 1e-13, 1e-7);
}

double kprime_upper(double A1, double rel_tol, double configured) {
  if (configured > 0.0) return configured;
  // e^{-2L} below ~1e-3 * rel_tol keeps the truncated tail invisible.
  const double L = 0.5 * std::max(24.0, -std::log(rel_tol) + 7.0);
  return std::sqrt(L * (L + 2.0 * A1));
}

struct InnerAccount {
  long evaluations = 0;
  bool converged = true;
};

// Oscillation-aware breakpoints for integrals in k' (J(nu, lo(k')) oscillates
// in ln k' below k' ~ nu).
std::vector<double> kprime_breaks(double nu, double km) {
  std::vector<double> br;
  const double k_osc_hi = std::min(km, std::max(nu, 1.0));
  const double step = kPi / std::max(nu, 1.0);
  for (double u = std::log(0.05); u < std::log(k_osc_hi); u += step)
    br.push_back(std::exp(u));
  for (double k = k_osc_hi; k < km; k += std::max(1.5, km / 6.0))
    br.push_back(k);
  return br;
}

// int_0^km k' [J(nu, lo) - J(nu, rho lo)] dk' with lo = hypot(k', A1); the
// second J is folded into one window integral since hi = rho * lo exactly.
double census_kprime_integral(const specfun::KImagEvaluator& K, double A1,
                              double rho, double km,
                              const quad::QuadSpec& kspec,
                              const quad::QuadSpec& ksq_spec,
                              InnerAccount& account) {
  auto f = [&](double kp) {
    const double lo = std::hypot(kp, A1);
    specfun::EvalResult r;
    try {
      r = specfun::ksq_log_integral(K, lo, rho * lo, ksq_spec);
    } catch (const specfun::ToleranceError& e) {
      r = e.best();
      account.converged = false;
    }
    account.evaluations += r.evaluations;
    return kp * r.value;
  };
  auto br = kprime_breaks(K.nu(), km);
  auto res = quad::integrate_finite(f, 0.0, km, kspec, br);
  account.evaluations += res.evaluations;
  account.converged = account.converged && res.converged;
  return res.value;
}

}  // namespace

void FieldSpec::validate() const {
  if (!(mass >= 0.0) || !std::isfinite(mass))
    throw std::domain_error("FieldSpec: mass must be finite and >= 0");
}

void DetectorBox::validate() const {
  if (!(chi1 > 0.0) || !(chi2 >= chi1))
    throw std::domain_error("DetectorBox: requires 0 < chi1 <= chi2");
  if (!(s_perp > 0.0))
    throw std::domain_error("DetectorBox: requires s_perp > 0");
  if (!std::isfinite(chi2) || !std::isfinite(s_perp))
    throw std::domain_error("DetectorBox: dimensions must be finite");
}

void NumericsConfig::validate() const {
  quad.validate();
  if (!(omega_tilde_max > 0.0))
    throw std::domain_error("NumericsConfig: omega_tilde_max must be > 0");
  if (!(std::exp(-kPi * omega_tilde_max) < quad.abs_tol))
    throw std::domain_error(
        "NumericsConfig: omega_tilde_max too small for requested abs_tol");
  if (kprime_max < 0.0)
    throw std::domain_error("NumericsConfig: kprime_max must be >= 0");
}

const char* to_string(RegimeTag t) {
  switch (t) {
    case RegimeTag::suppressed: return "suppressed";
    case RegimeTag::high_acceleration: return "high_acceleration";
    case RegimeTag::low_acceleration_massless:
      return "low_acceleration_massless";
    default: return "crossover";
  }
}

double rindler_mode_amplitude(double omega_tilde, double kappa, double chi,
                              double a) {
  if (!(omega_tilde > 0.0) || !(kappa > 0.0) || !(chi > 0.0) || !(a > 0.0))
    throw std::domain_error("rindler_mode_amplitude: all arguments must be > 0");
  const double k = specfun::bessel_k_imag(omega_tilde, kappa * chi);
  if (k == 0.0) return 0.0;
  // log-space sinh to survive large omega_tilde
  const double z = kPi * omega_tilde;
  const double half_log_sinh = 0.5 * (z + std::log1p(-std::exp(-2.0 * z)) -
                                      std::log(2.0));
  const double log_norm = half_log_sinh - 0.5 * std::log(4.0 * std::pow(kPi, 4) * a);
  return std::exp(log_norm) * k;
}

double thermal_occupancy(double omega_tilde) {
  if (!(omega_tilde > 0.0))
    throw std::domain_error("thermal_occupancy: diverges at omega_tilde <= 0");
  return 1.0 / std::expm1(2.0 * kPi * omega_tilde);
}

double operator_weight_ratio(double omega, double omega_prime) {
  if (!(omega > 0.0) || !(omega_prime > 0.0))
    throw std::domain_error("operator_weight_ratio: frequencies must be > 0");
  // the equal-frequency case is all the thermal delta retains; keep it exact
  if (omega == omega_prime) return 1.0;
  return 0.5 * (omega + omega_prime) / std::sqrt(omega * omega_prime);
}

RegimeTag classify_regime(const FieldSpec& field, const DetectorBox& box) {
  field.validate();
  box.validate();
  const double aspect = box.chi2 / box.chi1 - 1.0;
  if (field.mass == 0.0)
    return aspect <= 1.0 ? RegimeTag::low_acceleration_massless
                         : RegimeTag::high_acceleration;
  const double mchi = field.mass * box.chi1;
  if (mchi > 1.0) return RegimeTag::suppressed;
  if (mchi <= kHighAccMassCut) return RegimeTag::high_acceleration;
  return RegimeTag::crossover;
}

CensusResult census_exact(const FieldSpec& field, const DetectorBox& box,
                          const NumericsConfig& cfg) {
  field.validate();
  box.validate();
  cfg.validate();

  CensusResult out;
  out.regime = classify_regime(field, box);
  if (box.chi1 == box.chi2) {
    out.converged = true;
    out.evaluations = 1;
    return out;
  }

  const double A1 = field.mass * box.chi1;
  const double rho = box.chi2 / box.chi1;
  const double km = kprime_upper(A1, cfg.quad.rel_tol, cfg.kprime_max);
  const double R = cfg.quad.rel_tol;

  quad::QuadSpec ospec = cfg.quad;
  ospec.rel_tol = 0.7 * R;
  ospec.abs_tol = 1e-280;
  ospec.max_subdivisions = 60;
  quad::QuadSpec kspec = cfg.quad;
  kspec.rel_tol = 0.4 * R;
  kspec.abs_tol = 1e-280;
  kspec.max_subdivisions = 80;
  quad::QuadSpec ksq_spec = cfg.quad;
  ksq_spec.rel_tol = 0.04 * R;
  ksq_spec.abs_tol = 1e-280;
  ksq_spec.max_subdivisions = 600;
  const double k_acc = evaluator_accuracy(R);

  InnerAccount account;
  auto kernel = [&](double om) {
    specfun::KImagEvaluator K(om, k_acc);
    return om * std::exp(-kPi * om) *
           census_kprime_integral(K, A1, rho, km, kspec, ksq_spec, account);
  };

  // Bulk of the integral: the weight Om e^{-2 pi Om}-ish peaks near 1/pi.
  const double om_split = std::min(2.5, cfg.omega_tilde_max);
  const double head_breaks[] = {0.15, 0.45, 1.0, 1.7};
  auto R1 = quad::integrate_finite([&](double om) {
    return om <= 1e-12 ? 0.0 : kernel(om);
  }, 0.0, om_split, ospec, head_breaks);

  // Tail: skip nodes whose certified bound cannot matter.
  const double scale = std::max(std::abs(R1.value), 1e-290);
  const double skip_density =
      0.02 * R * scale / std::max(1.0, cfg.omega_tilde_max - om_split);
  double skipped = 0.0;
  auto R2 = quad::QuadResult{};
  if (cfg.omega_tilde_max > om_split) {
    const double tail_breaks[] = {4.0, 7.0};
    R2 = quad::integrate_finite([&](double om) {
      if (kint_upper_bound(om) * om * std::exp(-kPi * om) < skip_density) {
        skipped = std::max(skipped, skip_density);
        return 0.0;
      }
      return kernel(om);
    }, om_split, cfg.omega_tilde_max, ospec, tail_breaks);
  }

  // certified remainders: Omega~ cutoff and k' truncation
  const double om_tail = kint_upper_bound(cfg.omega_tilde_max) *
                         std::exp(-kPi * cfg.omega_tilde_max) *
                         (cfg.omega_tilde_max + 1.0 / kPi) / kPi;
  const double k_tail = 0.125 * kPi * std::exp(-2.0 * (std::hypot(km, A1) - A1)) *
                        scale;
  const double skip_err = skipped * (cfg.omega_tilde_max - om_split);

  const double pref = box.s_perp / (2.0 * std::pow(kPi, 3) * box.chi1 * box.chi1);
  const double total = R1.value + R2.value;
  out.expectation = std::max(0.0, pref * total);
  out.err_estimate =
      pref * (R1.err_estimate + R2.err_estimate + om_tail + k_tail + skip_err) +
      out.expectation * 2.0 * ksq_spec.rel_tol;
  out.evaluations = R1.evaluations + R2.evaluations + account.evaluations;
  out.converged = R1.converged && R2.converged && account.converged;
  return out;
}

namespace {

// shared outer Omega~ integral for the two constants
quad::QuadResult constant_outer(const NumericsConfig& cfg,
                                double (*inner)(const specfun::KImagEvaluator&,
                                                double, const quad::QuadSpec&,
                                                InnerAccount&),
                                double km) {
  const double R = cfg.quad.rel_tol;
  quad::QuadSpec ospec = cfg.quad;
  ospec.rel_tol = 0.7 * R;
  ospec.abs_tol = 1e-280;
  ospec.max_subdivisions = 60;
  quad::QuadSpec inner_spec = cfg.quad;
  inner_spec.rel_tol = 0.15 * R;
  inner_spec.abs_tol = 1e-280;
  inner_spec.max_subdivisions = 400;
  const double k_acc = evaluator_accuracy(R);

  InnerAccount account;
  auto kernel = [&](double om) {
    specfun::KImagEvaluator K(om, k_acc);
    return om * std::exp(-kPi * om) * inner(K, km, inner_spec, account);
  };

  const double om_split = std::min(2.5, cfg.omega_tilde_max);
  const double head_breaks[] = {0.15, 0.45, 1.0, 1.7};
  auto R1 = quad::integrate_finite([&](double om) {
    return om <= 1e-12 ? 0.0 : kernel(om);
  }, 0.0, om_split, ospec, head_breaks);

  const double scale = std::max(std::abs(R1.value), 1e-290);
  const double skip_density =
      0.02 * R * scale / std::max(1.0, cfg.omega_tilde_max - om_split);
  double skipped = 0.0;
  auto R2 = quad::QuadResult{};
  if (cfg.omega_tilde_max > om_split) {
    const double tail_breaks[] = {4.0, 7.0};
    R2 = quad::integrate_finite([&](double om) {
      if (kint_upper_bound(om) * om * std::exp(-kPi * om) < skip_density) {
        skipped = std::max(skipped, skip_density);
        return 0.0;
      }
      return kernel(om);
    }, om_split, cfg.omega_tilde_max, ospec, tail_breaks);
  }

  const double om_tail = kint_upper_bound(cfg.omega_tilde_max) *
                         std::exp(-kPi * cfg.omega_tilde_max) *
                         (cfg.omega_tilde_max + 1.0 / kPi) / kPi;
  const double norm = 1.0 / (2.0 * std::pow(kPi, 3));
  quad::QuadResult out;
  out.value = norm * (R1.value + R2.value);
  out.err_estimate =
      norm * (R1.err_estimate + R2.err_estimate + om_tail +
              skipped * (cfg.omega_tilde_max - om_split)) +
      std::abs(out.value) * 2.0 * inner_spec.rel_tol;
  out.evaluations = R1.evaluations + R2.evaluations + account.evaluations;
  out.converged = R1.converged && R2.converged && account.converged;
  return out;
}

// int_0^km k' J(nu, k') dk' with J(nu, k') = int_{k'}^inf (dchi/chi) K^2.
// Swapping the k' and chi integrals is exact:
//   = (1/2) int_0^km chi K^2(chi) dchi + (km^2 / 2) J(nu, km),
// which avoids one quadrature level. The nested route stays exercised by
// census_exact, whose high-acceleration ratio against C checks the two
// orderings against each other.
double inner_for_C(const specfun::KImagEvaluator& K, double km,
                   const quad::QuadSpec& spec, InnerAccount& account) {
  auto f = [&](double kp) {
    const double v = K(kp);
    return kp * v * v;
  };
  auto br = kprime_breaks(K.nu(), km);
  auto res = quad::integrate_finite(f, 0.0, km, spec, br);
  account.evaluations += res.evaluations;
  account.converged = account.converged && res.converged;

  specfun::EvalResult tail;
  try {
    tail = specfun::ksq_log_integral(
        K, km, std::numeric_limits<double>::infinity(), spec);
  } catch (const specfun::ToleranceError& e) {
    tail = e.best();
    account.converged = false;
  }
  account.evaluations += tail.evaluations;
  return 0.5 * res.value + 0.5 * km * km * tail.value;
}

double inner_for_D(const specfun::KImagEvaluator& K, double km,
                   const quad::QuadSpec& spec, InnerAccount& account) {
  auto f = [&](double kp) {
    const double v = K(kp);
    return kp * v * v;
  };
  auto br = kprime_breaks(K.nu(), km);
  auto res = quad::integrate_finite(f, 0.0, km, spec, br);
  account.evaluations += res.evaluations;
  account.converged = account.converged && res.converged;
  return res.value;
}

}  // namespace

quad::QuadResult constant_C(const NumericsConfig& cfg) {
  cfg.validate();
  const double km = kprime_upper(0.0, cfg.quad.rel_tol, cfg.kprime_max);
  return constant_outer(cfg, &inner_for_C, km);
}

quad::QuadResult constant_D(const NumericsConfig& cfg) {
  cfg.validate();
  const double km = kprime_upper(0.0, cfg.quad.rel_tol, cfg.kprime_max);
  return constant_outer(cfg, &inner_for_D, km);
}

double census_high_acc_limit(double s_perp, double a1, double c_value) {
  if (!(s_perp > 0.0) || !(a1 > 0.0))
    throw std::domain_error("census_high_acc_limit: requires positive inputs");
  return c_value * s_perp * a1 * a1;
}

double census_low_acc_limit(double volume, double a1, double d_value) {
  if (!(volume > 0.0) || !(a1 > 0.0))
    throw std::domain_error("census_low_acc_limit: requires positive inputs");
  return d_value * volume * a1 * a1 * a1;
}

double sudden_birth_threshold(const FieldSpec& field) {
  field.validate();
  if (!(field.mass > 0.0))
    throw std::domain_error(
        "sudden_birth_threshold: undefined for a massless field");
  return field.mass;
}

}  // namespace unruh
