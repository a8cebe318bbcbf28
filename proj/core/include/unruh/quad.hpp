#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Generic one-dimensional integration engines:
//   - adaptive Gauss-Kronrod 7-15 on finite intervals,
//   - semi-infinite integrals of exponentially damped integrands,
//   - Abel-regularized oscillatory integrals int_0^inf g(x) sin(xy) dx
//     via an exp(-eps x) ladder and polynomial extrapolation eps -> 0.
// All engines are pure; they hold no state between calls.

namespace unruh::quad {

struct QuadSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 4000;
  long max_evaluations = 50000000;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
      throw std::invalid_argument("QuadSpec: tolerances must be positive");
    if (max_subdivisions < 1)
      throw std::invalid_argument("QuadSpec: max_subdivisions must be >= 1");
    if (max_evaluations < 15)
      throw std::invalid_argument("QuadSpec: max_evaluations too small");
  }

  double target(double value_scale) const {
    return std::max(abs_tol, rel_tol * std::abs(value_scale));
  }
};

struct QuadResult {
  double value = 0.0;
  double err_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

// Default damping ladder for Abel regularization.
inline constexpr std::array<double, 5> default_abel_ladder = {0.1, 0.05, 0.025,
                                                              0.0125, 0.00625};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights (QUADPACK dqk15).
inline constexpr std::array<double, 8> gk_x = {
    9.914553711208126e-01, 9.491079123427585e-01, 8.648644233597691e-01,
    7.415311855993944e-01, 5.860872354676911e-01, 4.058451513773972e-01,
    2.077849550078985e-01, 0.0};
inline constexpr std::array<double, 8> gk_wk = {
    2.293532201052922e-02, 6.309209262997855e-02, 1.047900103222502e-01,
    1.406532597155259e-01, 1.690047266392679e-01, 1.903505780647854e-01,
    2.044329400752989e-01, 2.094821410847278e-01};
inline constexpr std::array<double, 4> gk_wg = {
    1.294849661688697e-01, 2.797053914892767e-01, 3.818300505051189e-01,
    4.179591836734694e-01};

struct Panel {
  double a, b;
  double value, err;
  bool splittable = true;
};

template <class F>
inline void gk15(F& f, double a, double b, double& value, double& err,
                 double& resabs) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);

  double fv[15];
  fv[14] = f(c);
  for (int i = 0; i < 7; ++i) {
    const double dx = h * gk_x[i];
    fv[2 * i] = f(c - dx);
    fv[2 * i + 1] = f(c + dx);
  }

  double resk = gk_wk[7] * fv[14];
  double resg = gk_wg[3] * fv[14];
  resabs = std::abs(resk);
  for (int i = 0; i < 7; ++i) {
    const double sum = fv[2 * i] + fv[2 * i + 1];
    resk += gk_wk[i] * sum;
    resabs += gk_wk[i] * (std::abs(fv[2 * i]) + std::abs(fv[2 * i + 1]));
    if (i % 2 == 1) resg += gk_wg[i / 2] * sum;
  }

  const double reskh = resk * 0.5;
  double resasc = gk_wk[7] * std::abs(fv[14] - reskh);
  for (int i = 0; i < 7; ++i)
    resasc += gk_wk[i] * (std::abs(fv[2 * i] - reskh) +
                          std::abs(fv[2 * i + 1] - reskh));

  value = resk * h;
  resabs *= std::abs(h);
  resasc *= std::abs(h);
  err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(err, 50.0 * eps * resabs);

  if (!std::isfinite(value) || !std::isfinite(err))
    throw std::runtime_error("quad: non-finite integrand sample in [" +
                             std::to_string(a) + ", " + std::to_string(b) +
                             "]");
}

struct KahanAcc {
  double sum = 0.0, carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace detail

// Adaptive bisection on [a, b]; worst panel is split first. Interior
// breakpoints seed the initial panel set (used to resolve known oscillation
// scales before the error estimator sees them).
template <class F>
QuadResult integrate_finite(F&& f, double a, double b, const QuadSpec& spec,
                            std::span<const double> breakpoints = {}) {
  spec.validate();
  if (!(a <= b)) throw std::domain_error("integrate_finite: requires a <= b");
  QuadResult out;
  if (a == b) {
    out.converged = true;
    out.evaluations = 0;
    return out;
  }

  std::vector<double> edges;
  edges.reserve(breakpoints.size() + 2);
  edges.push_back(a);
  for (double x : breakpoints)
    if (x > a && x < b) edges.push_back(x);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<detail::Panel> panels;
  panels.reserve(edges.size() + 64);
  long evals = 0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    detail::Panel p{edges[i], edges[i + 1], 0.0, 0.0, true};
    double resabs;
    detail::gk15(f, p.a, p.b, p.value, p.err, resabs);
    evals += 15;
    panels.push_back(p);
  }

  const double eps = std::numeric_limits<double>::epsilon();
  int splits = static_cast<int>(panels.size());
  for (;;) {
    double total = 0.0, total_err = 0.0;
    for (const auto& p : panels) {
      total += p.value;
      total_err += p.err;
    }
    if (total_err <= spec.target(total)) {
      out.converged = true;
      break;
    }
    if (splits >= spec.max_subdivisions || evals + 30 > spec.max_evaluations)
      break;

    std::size_t worst = panels.size();
    double worst_err = 0.0;
    for (std::size_t i = 0; i < panels.size(); ++i)
      if (panels[i].splittable && panels[i].err > worst_err) {
        worst_err = panels[i].err;
        worst = i;
      }
    if (worst == panels.size()) break;  // nothing left to split

    detail::Panel& p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b) ||
        (p.b - p.a) < 8.0 * eps * (std::abs(p.a) + std::abs(p.b))) {
      p.splittable = false;
      continue;
    }
    detail::Panel left{p.a, mid, 0.0, 0.0, true};
    detail::Panel right{mid, p.b, 0.0, 0.0, true};
    double resabs;
    detail::gk15(f, left.a, left.b, left.value, left.err, resabs);
    detail::gk15(f, right.a, right.b, right.value, right.err, resabs);
    evals += 30;
    ++splits;
    p = left;
    panels.push_back(right);
  }

  detail::KahanAcc acc;
  double total_err = 0.0;
  for (const auto& p : panels) {
    acc.add(p.value);
    total_err += p.err;
  }
  out.value = acc.sum;
  out.err_estimate = total_err;
  out.evaluations = evals;
  if (!out.converged) out.converged = total_err <= spec.target(out.value);
  return out;
}

// int_a^inf f, where the caller guarantees |f(x)| <= M exp(-decay x) for some
// unknown M. Integrates growing chunks and certifies truncation from the
// observed envelope once the tail bound drops below 1% of the tolerance.
template <class F>
QuadResult integrate_semi_infinite_damped(F&& f, double a, double decay,
                                          const QuadSpec& spec) {
  spec.validate();
  if (!(decay > 0.0))
    throw std::domain_error("integrate_semi_infinite_damped: decay must be > 0");

  double log_env = -std::numeric_limits<double>::infinity();
  auto wrapped = [&](double x) {
    const double v = f(x);
    const double av = std::abs(v);
    if (av > 0.0) log_env = std::max(log_env, std::log(av) + decay * (x - a));
    return v;
  };

  QuadSpec chunk_spec = spec;
  chunk_spec.rel_tol = spec.rel_tol * 0.5;
  chunk_spec.abs_tol = spec.abs_tol * 0.25;

  const double L = 9.0 / decay;
  QuadResult out;
  bool all_converged = true;
  double x_end = a;
  for (int chunk = 0; chunk < 200; ++chunk) {
    QuadResult r = integrate_finite(wrapped, x_end, x_end + L, chunk_spec);
    out.value += r.value;
    out.err_estimate += r.err_estimate;
    out.evaluations += r.evaluations;
    all_converged = all_converged && r.converged;
    x_end += L;

    const double target = spec.target(out.value);
    const double log_tail = log_env - decay * (x_end - a) - std::log(decay);
    if (chunk >= 1 && log_tail < std::log(0.01 * target)) {
      out.err_estimate += std::exp(log_tail);
      out.converged = all_converged;
      return out;
    }
  }
  out.converged = false;
  return out;
}

namespace detail {

// I(eps) = int_0^inf g(x) sin(xy) exp(-eps x) dx, summed over half-periods of
// the sine with compensated accumulation. The remainder once eps*x is large is
// bounded by a geometric envelope of the last half-period.
template <class G>
QuadResult abel_single(G& g, double y, double eps, const QuadSpec& spec) {
  const double period = std::acos(-1.0) / y;
  QuadResult out;
  KahanAcc acc;
  double err_acc = 0.0;
  double x0 = 0.0;
  double last_abs = std::numeric_limits<double>::infinity();
  const long panel_cap = 4000000;
  for (long n = 0; n < panel_cap; ++n) {
    auto h = [&](double x) { return g(x) * std::sin(x * y) * std::exp(-eps * x); };
    double v, e, resabs;
    gk15(h, x0, x0 + period, v, e, resabs);
    out.evaluations += 15;
    if (e > 1e-14 * (std::abs(v) + resabs)) {
      QuadSpec fine;
      fine.rel_tol = 1e-13;
      fine.abs_tol = std::max(1e-300, 1e-15 * resabs);
      fine.max_subdivisions = 64;
      QuadResult r = integrate_finite(h, x0, x0 + period, fine);
      v = r.value;
      e = r.err_estimate;
      out.evaluations += r.evaluations;
    }
    acc.add(v);
    err_acc += e;
    x0 += period;
    last_abs = std::abs(v);

    if (eps * x0 >= 35.0) {
      const double ratio =
          std::exp(-eps * period) * std::pow(1.0 + period / x0, 6.0);
      const double tail =
          ratio < 1.0 ? last_abs * ratio / (1.0 - ratio) : last_abs * 100.0;
      const double target = spec.target(acc.sum);
      if (tail <= 0.05 * target) {
        out.value = acc.sum;
        out.err_estimate = err_acc + tail;
        out.converged = true;
        return out;
      }
    }
  }
  out.value = acc.sum;
  out.err_estimate = err_acc + last_abs;
  out.converged = false;
  return out;
}

}  // namespace detail

// Abel-regularized oscillatory integral int_0^inf g(x) sin(xy) dx for g of at
// most polynomial growth: evaluates the damped integral on the eps ladder and
// extrapolates eps -> 0 with a Neville polynomial. The extrapolation residual
// feeds the error estimate; non-contracting extrapolants mark the result as
// not converged.
template <class G>
QuadResult integrate_oscillatory_abel(G&& g, double y,
                                      std::span<const double> eps_ladder,
                                      const QuadSpec& spec) {
  spec.validate();
  if (!(y > 0.0))
    throw std::domain_error("integrate_oscillatory_abel: y must be > 0");
  if (eps_ladder.size() < 3)
    throw std::domain_error("integrate_oscillatory_abel: ladder needs >= 3 entries");
  for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
    if (!(eps_ladder[i] > 0.0) ||
        (i > 0 && !(eps_ladder[i] < eps_ladder[i - 1])))
      throw std::domain_error(
          "integrate_oscillatory_abel: ladder must be positive and decreasing");
  }

  const std::size_t m = eps_ladder.size();
  std::vector<double> I(m), rung_err(m);
  QuadResult out;
  QuadSpec rung_spec = spec;
  rung_spec.rel_tol = std::max(1e-14, spec.rel_tol * 0.05);
  rung_spec.abs_tol = spec.abs_tol * 0.05;
  bool rungs_ok = true;
  for (std::size_t i = 0; i < m; ++i) {
    QuadResult r = detail::abel_single(g, y, eps_ladder[i], rung_spec);
    I[i] = r.value;
    rung_err[i] = r.err_estimate;
    out.evaluations += r.evaluations;
    rungs_ok = rungs_ok && r.converged;
  }

  // Lagrange weights of the extrapolant at eps = 0, for honest propagation of
  // the per-rung quadrature error bounds.
  double quad_err = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double w = 1.0;
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) w *= eps_ladder[j] / (eps_ladder[j] - eps_ladder[i]);
    quad_err += std::abs(w) * rung_err[i];
  }

  // Neville tableau evaluated at eps = 0. After depth j, t[i] holds the
  // polynomial through rungs i-j..i; diag[j] = extrapolant through rungs 0..j.
  std::vector<double> t = I;
  std::vector<double> diag(m);
  diag[0] = t[0];
  for (std::size_t j = 1; j < m; ++j) {
    for (std::size_t i = m - 1; i >= j; --i) {
      const double xi = eps_ladder[i];
      const double xij = eps_ladder[i - j];
      t[i] = (xij * t[i] - xi * t[i - 1]) / (xij - xi);
      if (i == j) break;
    }
    diag[j] = t[j];
  }

  const double value = diag[m - 1];
  const double corr_last = std::abs(diag[m - 1] - diag[m - 2]);
  const double corr_prev = std::abs(diag[m - 2] - diag[m - 3]);

  out.value = value;
  out.err_estimate = corr_last + 0.25 * corr_prev + quad_err;
  const double target = spec.target(value);
  const bool contracting = corr_last <= std::max(corr_prev * 4.0, target);
  out.converged = rungs_ok && contracting && out.err_estimate <= target;
  return out;
}

}  // namespace unruh::quad
