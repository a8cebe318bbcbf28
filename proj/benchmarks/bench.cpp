// Micro-timing harness for the numeric hot paths. Self-contained: wall-clock
// repetition with a volatile sink, no external benchmark framework.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "unruh/census.hpp"
#include "unruh/specfun.hpp"

namespace {

volatile double sink;

void bench(const std::string& name, int iters,
           const std::function<double()>& fn) {
  using clock = std::chrono::steady_clock;
  fn();  // warm-up
  const auto t0 = clock::now();
  for (int i = 0; i < iters; ++i) sink = fn();
  const auto t1 = clock::now();
  const double us =
      std::chrono::duration<double, std::micro>(t1 - t0).count() / iters;
  std::printf("%-42s %10.2f us/call  (%d calls)\n", name.c_str(), us, iters);
}

}  // namespace

int main() {
  using namespace unruh;
  namespace sf = unruh::specfun;

  sf::KImagEvaluator k2(2.0);
  bench("K_i2 series (x = 1)", 200000, [&] { return k2(1.0); });
  bench("K_i2 monotonic contour (x = 12)", 20000, [&] { return k2(12.0); });
  sf::KImagEvaluator k12(12.0);
  bench("K_i12 oscillatory contour (x = 8)", 5000, [&] { return k12(8.0); });
  bench("K_i12 evaluator construction + call", 20000,
        [] { return sf::bessel_k_imag(12.0, 1.0); });
  bench("K_1 rational approx (x = 2)", 2000000,
        [] { return sf::bessel_k_int(1, 2.0); });

  quad::QuadSpec s;
  s.rel_tol = 1e-8;
  s.abs_tol = 1e-300;
  bench("ksq_log_integral (nu = 2, 0.1..inf)", 200,
        [&] { return sf::ksq_log_integral(k2, 0.1, INFINITY, s).value; });

  NumericsConfig cfg;
  cfg.quad.rel_tol = 1e-4;
  bench("census massless (aspect 1e3)", 3, [&] {
    return census_exact(FieldSpec{0.0}, DetectorBox{1e-3, 1.0, 1.0}, cfg)
        .expectation;
  });
  bench("census massive (m chi1 = 0.5)", 3, [&] {
    return census_exact(FieldSpec{0.5}, DetectorBox{1.0, 11.0, 1.0}, cfg)
        .expectation;
  });
  bench("constant_D (rel 1e-5)", 1, [&] {
    NumericsConfig c;
    c.quad.rel_tol = 1e-5;
    return constant_D(c).value;
  });
  return 0;
}
