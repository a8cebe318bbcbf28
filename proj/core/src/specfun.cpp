#include "unruh/specfun.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <algorithm>
#include <stdexcept>
#include <vector>

namespace unruh::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

double eval_poly(const double* c, int n, double x) {
  double r = c[n - 1];
  for (int i = n - 2; i >= 0; --i) r = r * x + c[i];
  return r;
}

// Lanczos approximation, g = 607/128, 15 terms.
constexpr double kLanczosG = 4.7421875;
constexpr double kLanczos[15] = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    3.3994649984811888699e-5,
    4.6523628927048575665e-5,   -9.8374475304879564677e-5,
    1.5808870322491248884e-4,   -2.1026444172410488319e-4,
    2.1743961811521264320e-4,   -1.6431810653676389022e-4,
    8.4418223983852743293e-5,   -2.6190838401581408670e-5,
    3.6899182659531622704e-6};

std::complex<double> lanczos_lgamma_positive(std::complex<double> z) {
  // valid for Re z >= 0.5
  z -= 1.0;
  std::complex<double> sum = kLanczos[0];
  for (int k = 1; k < 15; ++k) sum += kLanczos[k] / (z + static_cast<double>(k));
  const std::complex<double> t = z + (kLanczosG + 0.5);
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t +
         std::log(sum);
}

}  // namespace

std::complex<double> lgamma_complex(std::complex<double> z) {
  if (z.real() >= 0.5) return lanczos_lgamma_positive(z);
  // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
  const std::complex<double> spz = std::sin(kPi * z);
  return std::log(kPi / spz) - lanczos_lgamma_positive(1.0 - z);
}

double gamma_real(double x) {
  if (x <= 0.0 && x == std::floor(x))
    throw std::domain_error("gamma_real: pole at nonpositive integer");
  if (x >= 0.5)
    return std::exp(lanczos_lgamma_positive(std::complex<double>(x, 0.0)).real());
  return kPi / (std::sin(kPi * x) * gamma_real(1.0 - x));
}

// ---------------------------------------------------------------------------
// K_0, K_1, K_2 via the Russon-Blair minimax rational approximations
// (coefficients as in Boost.Math); K_2 by upward recurrence.
// ---------------------------------------------------------------------------

namespace {

double bessel_k0_impl(double x) {
  static const double P1[] = {2.4708152720399552679e+03, 5.9169059852270512312e+03,
                              4.6850901201934832188e+02, 1.1999463724910714109e+01,
                              1.3166052564989571850e-01, 5.8599221412826100000e-04};
  static const double Q1[] = {2.1312714303849120380e+04, -2.4994418972832303646e+02,
                              1.0};
  static const double P2[] = {-1.6128136304458193998e+06, -3.7333769444840079748e+05,
                              -1.7984434409411765813e+04, -2.9501657892958843865e+02,
                              -1.6414452837299064100e+00};
  static const double Q2[] = {-1.6128136304458193998e+06, 2.9865713163054025489e+04,
                              -2.5064972445877992730e+02, 1.0};
  static const double P3[] = {1.1600249425076035558e+02, 2.3444738764199315021e+03,
                              1.8321525870183537725e+04, 7.1557062783764037541e+04,
                              1.5097646353289914539e+05, 1.7398867902565686251e+05,
                              1.0577068948034021957e+05, 3.1075408980684392399e+04,
                              3.6832589957340267940e+03, 1.1394980557384778174e+02};
  static const double Q3[] = {9.2556599177304839811e+01, 1.8821890840982713696e+03,
                              1.4847228371802360957e+04, 5.8824616785857027752e+04,
                              1.2689839587977598727e+05, 1.5144644673520157801e+05,
                              9.7418829762268075784e+04, 3.1474655750295278825e+04,
                              4.4329628889746408858e+03, 2.0013443064949242491e+02,
                              1.0};
  if (x <= 1.0) {
    const double y = x * x;
    const double r1 = eval_poly(P1, 6, y) / eval_poly(Q1, 3, y);
    const double r2 = eval_poly(P2, 5, y) / eval_poly(Q2, 4, y);
    return r1 - std::log(x) * r2;
  }
  const double y = 1.0 / x;
  const double r = eval_poly(P3, 10, y) / eval_poly(Q3, 11, y);
  return std::exp(-x) / std::sqrt(x) * r;
}

double bessel_k1_impl(double x) {
  static const double P1[] = {-2.2149374878243304548e+06, 7.1938920065420586101e+05,
                              1.7733324035147015630e+05, 7.1885382604084798576e+03,
                              9.9991373567429309922e+01, 4.8127070456878442310e-01};
  static const double Q1[] = {-2.2149374878243304548e+06, 3.7264298672067697862e+04,
                              -2.8143915754538725829e+02, 1.0};
  static const double P2[] = {0.0, -1.3531161492785421328e+06,
                              -1.4758069205414222471e+05, -4.5051623763436087023e+03,
                              -5.3103913335180275253e+01, -2.2795590826955002390e-01};
  static const double Q2[] = {-2.7062322985570842656e+06, 4.3117653211351080007e+04,
                              -3.0507151578787595807e+02, 1.0};
  static const double P3[] = {2.2196792496874548962e+00, 4.4137176114230414036e+01,
                              3.4122953486801312910e+02, 1.3319486433183221990e+03,
                              2.8590657697910288226e+03, 3.4540675585544584407e+03,
                              2.3123742209168871550e+03, 8.1094256146537402173e+02,
                              1.3182609918569941308e+02, 7.5584584631176030810e+00,
                              6.4257745859173138767e-02};
  static const double Q3[] = {1.7710478032601086579e+00, 3.4552228452758912848e+01,
                              2.5951223655579051357e+02, 9.6929165726802648634e+02,
                              1.9448440788918006154e+03, 2.1181000487171943810e+03,
                              1.2082692316002348638e+03, 3.3031020088765390854e+02,
                              3.6001069306861518855e+01, 1.0};
  if (x <= 1.0) {
    const double y = x * x;
    const double r1 = eval_poly(P1, 6, y) / eval_poly(Q1, 4, y);
    const double r2 = eval_poly(P2, 6, y) / eval_poly(Q2, 4, y);
    return (r1 + std::log(x) * r2) / x;
  }
  const double y = 1.0 / x;
  const double r = eval_poly(P3, 11, y) / eval_poly(Q3, 10, y);
  return std::exp(-x) / std::sqrt(x) * r;
}

}  // namespace

double bessel_k_int(int order, double x) {
  if (order < 0 || order > 2)
    throw std::domain_error("bessel_k_int: order must be 0, 1 or 2");
  if (!(x > 0.0)) throw std::domain_error("bessel_k_int: requires x > 0");
  if (x > 746.0) return 0.0;  // past the exponential floor of double
  switch (order) {
    case 0: return bessel_k0_impl(x);
    case 1: return bessel_k1_impl(x);
    default: return bessel_k0_impl(x) + 2.0 * bessel_k1_impl(x) / x;
  }
}

// ---------------------------------------------------------------------------
// K_{i nu}(x). Three routes, chosen so that none suffers exponential
// cancellation:
//   series   (x <= 5.5):  K = -(pi/sinh(pi nu)) Im[(x/2)^{i nu} S(x)],
//            S = sum_k (x^2/4)^k / (k! Gamma(k+1+i nu)); every term carries
//            the exp(-pi nu / 2) scale through 1/Gamma, so no large terms
//            cancel to a small result.
//   monotonic contour (nu <= x):  shifting t -> t + i asin(nu/x) in the
//            cosh representation gives
//            K = exp(-nu asin(nu/x) - q) *
//                int_0^inf exp(-q (cosh s - 1)) cos(nu (s - sinh s)) ds,
//            q = sqrt(x^2 - nu^2). The integrand decays double-exponentially,
//            so the trapezoid rule with step halving converges geometrically.
//            For q < nu (x near nu, strong phase) the tail beyond s_c is
//            pushed onto the descending ray s_c - i u where it stops
//            oscillating.
//   oscillatory contour (nu > x): shifting to Im t = pi/2 gives
//            K = exp(-nu pi/2) int_0^inf cos(nu s - x sinh s) ds,
//            integrated adaptively through the stationary point with the
//            same rotated-ray treatment of the violently oscillating tail.
// ---------------------------------------------------------------------------

KImagEvaluator::KImagEvaluator(double nu, double accuracy)
    : nu_(nu), acc_(std::clamp(accuracy, 1e-15, 1e-4)) {
  if (!(nu >= 0.0)) throw std::domain_error("KImagEvaluator: requires nu >= 0");
  if (nu > 150.0)
    throw std::domain_error("KImagEvaluator: nu too large (supported nu <= 150)");
  if (nu >= 1e-8) {
    const std::complex<double> z(1.0, nu);
    inv_gamma_ = std::exp(-lgamma_complex(z));
    pi_over_sinh_ = kPi / std::sinh(kPi * nu);
  }
}

double KImagEvaluator::series_small_x(double x) const {
  const std::complex<double> i_nu(0.0, nu_);
  const double z2 = 0.25 * x * x;
  std::complex<double> term = inv_gamma_;
  std::complex<double> sum = term;
  for (int k = 1; k <= 300; ++k) {
    term *= z2 / (static_cast<double>(k) * (static_cast<double>(k) + i_nu));
    sum += term;
    if (std::abs(term) <= 0.03 * acc_ * std::abs(sum)) break;
  }
  const double L = std::log(0.5 * x);
  const std::complex<double> phase(std::cos(nu_ * L), std::sin(nu_ * L));
  return -pi_over_sinh_ * std::imag(phase * sum);
}

namespace {

// Descending-ray tail: Re int_{sc}^{inf} exp(Z(s)) ds, where Z is either
// -q (cosh s - 1) + i nu (s - sinh s) (monotonic form) or
// i (nu s - x sinh s) (oscillatory form). On s = sc - i u the integrand
// becomes exp(Re Z) sin(Im Z) and Re Z falls off at the local phase rate, so
// a short ray suffices; the leftover horizontal piece decays like
// exp(-cosh(sigma)) and is far below the stopping threshold.
template <class ZFun>
double rotated_tail(ZFun&& zf, double scale_hint, double accuracy) {
  quad::QuadSpec pspec;
  pspec.rel_tol = std::max(2e-13, 0.3 * accuracy);
  pspec.abs_tol = std::max(1e-300, accuracy * 1e-4 * scale_hint);
  pspec.max_subdivisions = 200;

  double acc = 0.0;
  double u = 0.0;
  const double du = 0.12;
  for (int i = 0; i < 12; ++i) {
    auto f = [&](double uu) {
      const std::complex<double> Z = zf(uu);
      return std::exp(Z.real()) * std::sin(Z.imag());
    };
    acc += quad::integrate_finite(f, u, u + du, pspec).value;
    u += du;
    const double mag = std::exp(zf(u).real());
    if (mag <= 1e-4 * accuracy * std::max(scale_hint, std::abs(acc))) break;
    if (u > 1.3) break;
  }
  return acc;
}

}  // namespace

double KImagEvaluator::contour_monotonic(double x) const {
  const double nu = nu_;
  const double q = std::sqrt(std::max(0.0, x - nu) * (x + nu));
  // asin(nu/x) is ill-conditioned as nu -> x; atan2 of the catheti is not
  const double theta0 = std::atan2(nu, q);
  const double expo = -nu * theta0 - q;
  if (expo < -745.0) return 0.0;

  const bool use_trapezoid = (q >= nu) || (nu < 6.0);
  if (use_trapezoid) {
    const double s_max = std::acosh(1.0 + 46.0 / std::max(q, 1e-300));
    // phase rate where the integrand is still alive (decay ~ e^{-12});
    // step halving below verifies the choice
    const double rate_eff = nu * std::min(46.0, 12.0 / std::max(q, 1e-12));
    double h = std::min({0.3, 0.5 * kPi / (1.0 + rate_eff),
                         0.5 / std::sqrt(std::max(q, 1.0))});
    auto f = [&](double s) {
      return std::exp(-q * (std::cosh(s) - 1.0)) *
             std::cos(nu * (s - std::sinh(s)));
    };
    // trapezoid with reuse of previous nodes on each halving
    double sum = 0.5;  // f(0) = 1
    for (double s = h; s <= s_max; s += h) sum += f(s);
    double t_prev = h * sum;
    for (int iter = 0; iter < 30; ++iter) {
      double odd = 0.0;
      for (double s = 0.5 * h; s <= s_max; s += h) odd += f(s);
      const double t_new = 0.5 * t_prev + 0.5 * h * odd;
      if (std::abs(t_new - t_prev) <=
          std::max(1e-14, 0.3 * acc_) * std::abs(t_new) + 1e-260) {
        t_prev = t_new;
        break;
      }
      t_prev = t_new;
      h *= 0.5;
      if (s_max / h > 4e6) break;
    }
    return std::exp(expo) * t_prev;
  }

  // x near nu with nu >= 6: resolve the head up to s_c, rotate the tail.
  const double sc = 3.0;
  std::vector<double> breaks;
  for (double s = 0.0; s < sc;) {
    const double rate = nu * (std::cosh(s) - 1.0) + q * std::sinh(s) + 1.0;
    s += std::min(0.25, std::max(0.005, 0.5 * kPi / rate));
    if (s < sc) breaks.push_back(s);
  }
  auto f = [&](double s) {
    return std::exp(-q * (std::cosh(s) - 1.0)) *
           std::cos(nu * (s - std::sinh(s)));
  };
  quad::QuadSpec hspec;
  hspec.rel_tol = std::max(2e-13, 0.3 * acc_);
  hspec.abs_tol = 1e-280;
  hspec.max_subdivisions = 800;
  const double head = quad::integrate_finite(f, 0.0, sc, hspec, breaks).value;

  auto zf = [&](double u) {
    const std::complex<double> s(sc, -u);
    return -q * (std::cosh(s) - 1.0) +
           std::complex<double>(0.0, nu) * (s - std::sinh(s));
  };
  const double tail =
      rotated_tail(zf, std::max(std::abs(head), 1e-3), acc_);
  return std::exp(expo) * (head + tail);
}

double KImagEvaluator::contour_oscillatory(double x) const {
  const double nu = nu_;
  const double expo = -0.5 * kPi * nu;
  if (expo < -745.0) return 0.0;

  const double rate_target = 45.0 + 0.35 * nu;
  const double sc = std::acosh((nu + rate_target) / x);
  std::vector<double> breaks;
  for (double s = 0.0; s < sc;) {
    const double rate = std::abs(nu - x * std::cosh(s)) + 1.0;
    s += std::min(0.4, std::max(0.004, 0.5 * kPi / rate));
    if (s < sc) breaks.push_back(s);
  }
  auto f = [&](double s) { return std::cos(nu * s - x * std::sinh(s)); };
  quad::QuadSpec hspec;
  hspec.rel_tol = std::max(2e-13, 0.3 * acc_);
  hspec.abs_tol = 1e-280;
  hspec.max_subdivisions = 1200;
  const double head = quad::integrate_finite(f, 0.0, sc, hspec, breaks).value;

  auto zf = [&](double u) {
    const std::complex<double> s(sc, -u);
    return std::complex<double>(0.0, 1.0) * (nu * s - x * std::sinh(s));
  };
  const double tail =
      rotated_tail(zf, std::max(std::abs(head), 1e-2), acc_);
  return std::exp(expo) * (head + tail);
}

double KImagEvaluator::operator()(double x) const {
  if (!(x > 0.0)) throw std::domain_error("bessel_k_imag: requires x > 0");
  if (nu_ < 1e-8) return contour_monotonic(x);  // reduces to K_0
  if (x <= 5.5) return series_small_x(x);
  if (nu_ <= x) return contour_monotonic(x);
  return contour_oscillatory(x);
}

double bessel_k_imag(double nu, double x) {
  if (!(nu >= 0.0)) throw std::domain_error("bessel_k_imag: requires nu >= 0");
  return KImagEvaluator(nu)(x);
}

// ---------------------------------------------------------------------------
// int (dchi/chi) K_{i nu}(chi)^2 in u = ln chi, with certified truncation of
// the infinite tail against the K_0 envelope K_0(chi)^2 <= (pi/2chi) e^{-2chi}.
// ---------------------------------------------------------------------------

namespace {

double ksq_tail_bound(double X) {
  // int_X^inf (pi/2) e^{-2chi} / chi^2 dchi <= (pi/4) e^{-2X} / X^2, X >= 1
  return 0.25 * kPi * std::exp(-2.0 * X) / (X * X);
}

}  // namespace

EvalResult ksq_log_integral(const KImagEvaluator& k, double x_lo, double x_hi,
                            const quad::QuadSpec& spec) {
  spec.validate();
  if (!(x_lo > 0.0) || !(x_hi >= x_lo))
    throw std::domain_error("ksq_log_integral: requires 0 < x_lo <= x_hi");
  EvalResult out;
  out.evaluations = 1;
  if (x_lo == x_hi) return out;

  const double nu = k.nu();
  auto integrand = [&](double u) {
    const double v = k(std::exp(u));
    return v * v;
  };

  // Oscillation seeds: K_{i nu}(e^u) has u-period ~ 2pi/nu below chi = nu.
  auto seeds_between = [&](double ua, double ub, std::vector<double>& br) {
    const double osc_end = std::min(ub, std::log(std::max(nu, 1e-300)));
    if (nu > 1.0 && osc_end > ua) {
      const double step = 0.5 * kPi / nu;
      for (double u = ua + step; u < osc_end; u += step) br.push_back(u);
    }
    for (double u = std::max(ua, osc_end) + 0.7; u < ub; u += 0.7)
      br.push_back(u);
  };

  quad::QuadSpec cspec = spec;
  cspec.rel_tol = spec.rel_tol * 0.5;
  cspec.abs_tol = spec.abs_tol * 0.25;

  const double u_lo = std::log(x_lo);
  double x_edge = std::max({std::max(nu, 1.0) * 1.25 + 4.0, x_lo * 1.5, x_lo + 4.0});

  bool all_converged = true;
  if (std::isfinite(x_hi) && x_hi <= x_edge) {
    std::vector<double> br;
    seeds_between(u_lo, std::log(x_hi), br);
    auto r = quad::integrate_finite(integrand, u_lo, std::log(x_hi), cspec, br);
    out.value = r.value;
    out.err_estimate = r.err_estimate;
    out.evaluations += r.evaluations;
    if (!r.converged) all_converged = false;
    if (!all_converged && out.err_estimate <= spec.target(out.value))
      all_converged = true;
    if (!all_converged)
      throw ToleranceError("ksq_log_integral: tolerance not met", out);
    return out;
  }

  // chunked march toward the (possibly infinite) upper limit
  {
    std::vector<double> br;
    seeds_between(u_lo, std::log(x_edge), br);
    auto r = quad::integrate_finite(integrand, u_lo, std::log(x_edge), cspec, br);
    out.value = r.value;
    out.err_estimate = r.err_estimate;
    out.evaluations += r.evaluations;
    all_converged = all_converged && r.converged;
  }
  for (int chunk = 0; chunk < 400; ++chunk) {
    const double target = spec.target(out.value);
    if (std::isfinite(x_hi) && x_edge >= x_hi) break;
    if (ksq_tail_bound(x_edge) <= 0.005 * target && x_edge >= 1.0) {
      if (!std::isfinite(x_hi)) {
        out.err_estimate += ksq_tail_bound(x_edge);
        if (!all_converged && out.err_estimate <= target) all_converged = true;
        if (!all_converged)
          throw ToleranceError("ksq_log_integral: tolerance not met", out);
        return out;
      }
      // finite but remote upper limit: remaining piece bounded by the tail
      out.err_estimate += ksq_tail_bound(x_edge);
      return out;
    }
    const double x_next =
        std::isfinite(x_hi) ? std::min(x_hi, x_edge * std::numbers::e)
                            : x_edge * std::numbers::e;
    std::vector<double> br;
    seeds_between(std::log(x_edge), std::log(x_next), br);
    auto r = quad::integrate_finite(integrand, std::log(x_edge),
                                    std::log(x_next), cspec, br);
    out.value += r.value;
    out.err_estimate += r.err_estimate;
    out.evaluations += r.evaluations;
    all_converged = all_converged && r.converged;
    x_edge = x_next;
  }
  if (!all_converged && out.err_estimate > spec.target(out.value))
    throw ToleranceError("ksq_log_integral: tolerance not met", out);
  return out;
}

EvalResult ksq_log_integral(double nu, double x_lo, double x_hi,
                            const quad::QuadSpec& spec) {
  if (!(nu >= 0.0))
    throw std::domain_error("ksq_log_integral: requires nu >= 0");
  KImagEvaluator k(nu);
  return ksq_log_integral(k, x_lo, x_hi, spec);
}

}  // namespace unruh::specfun
