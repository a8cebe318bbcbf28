#pragma once

#include <complex>

#include "unruh/quad.hpp"

// Special functions behind the census integrals: the real gamma function,
// K_nu(x) for integer order 0..2, the real-valued modified Bessel function of
// imaginary order K_{i nu}(x), and the squared-kernel log integral
// int (dchi/chi) K_{i nu}(chi)^2.

namespace unruh::specfun {

struct EvalResult {
  double value = 0.0;
  double err_estimate = 0.0;
  long evaluations = 0;
};

// Thrown when a requested tolerance could not be met; carries the best
// estimate obtained so far.
class ToleranceError : public std::runtime_error {
 public:
  ToleranceError(const std::string& what, EvalResult best)
      : std::runtime_error(what), best_(best) {}
  const EvalResult& best() const { return best_; }

 private:
  EvalResult best_;
};

// Gamma(x) for real x away from the poles at 0, -1, -2, ...
// Negative arguments go through the reflection formula.
double gamma_real(double x);

// log Gamma(z) for complex z (principal branch), Lanczos approximation.
std::complex<double> lgamma_complex(std::complex<double> z);

// K_n(x) for n in {0, 1, 2}, x > 0. Returns 0 beyond the exponential floor
// (x > ~746) where the result underflows double precision.
double bessel_k_int(int order, double x);

// K_{i nu}(x) = int_0^inf exp(-x cosh t) cos(nu t) dt, real for nu >= 0, x > 0.
double bessel_k_imag(double nu, double x);

// Evaluates K_{i nu}(x) for many x at fixed nu; construction caches the
// nu-dependent series data. `accuracy` is the relative target of the internal
// quadratures; the default gives full double precision, integration kernels
// that only need a few digits can ask for less and run several times faster.
// Pure after construction, safe to share across threads.
class KImagEvaluator {
 public:
  explicit KImagEvaluator(double nu, double accuracy = 5e-14);
  double operator()(double x) const;
  double nu() const { return nu_; }

 private:
  double series_small_x(double x) const;
  double contour_monotonic(double x) const;   // nu <= x
  double contour_oscillatory(double x) const; // nu > x

  double nu_ = 0.0;
  double acc_ = 5e-14;
  std::complex<double> inv_gamma_;  // 1 / Gamma(1 + i nu)
  double pi_over_sinh_ = 0.0;       // pi / sinh(pi nu)
};

// int_{x_lo}^{x_hi} (dchi/chi) K_{i nu}(chi)^2, with x_hi possibly infinite.
// The tail truncation is certified against the K_0 envelope; the oscillatory
// region chi < nu is integrated in u = ln chi with panels no wider than a
// quarter oscillation period.
EvalResult ksq_log_integral(double nu, double x_lo, double x_hi,
                            const quad::QuadSpec& spec);
EvalResult ksq_log_integral(const KImagEvaluator& k, double x_lo, double x_hi,
                            const quad::QuadSpec& spec);

}  // namespace unruh::specfun
