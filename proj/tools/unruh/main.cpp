// unruh: finite-volume Unruh particle census CLI.
//
// Subcommands: census, sweep, constants, threshold, commutator, bessel.
// Exit codes: 0 success, 1 usage or domain error, 2 numerical non-convergence.
// UNRUH_NUM_THREADS caps sweep parallelism (0 or unset = all cores).

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "unruh/census.hpp"
#include "unruh/nonlocality.hpp"
#include "unruh/specfun.hpp"
#include "unruh/units.hpp"

namespace {

using nlohmann::json;
using namespace unruh;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoConv = 2;

double mass_to_natural(double value, const std::string& unit) {
  if (unit == "me") return units::electron_masses_to_natural(value);
  if (unit == "kg") return units::si_to_natural(units::QuantityKind::mass, value);
  if (unit == "invm") return value;
  throw std::domain_error("unknown mass unit: " + unit);
}

double accel_to_natural(double value, const std::string& unit) {
  if (unit == "si")
    return units::si_to_natural(units::QuantityKind::acceleration, value);
  if (unit == "g")
    return units::si_to_natural(units::QuantityKind::acceleration,
                                value * units::standard_gravity);
  if (unit == "invm") return value;
  throw std::domain_error("unknown acceleration unit: " + unit);
}

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

unsigned sweep_threads() {
  const char* env = std::getenv("UNRUH_NUM_THREADS");
  unsigned n = 0;
  if (env && *env) n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  if (n == 0) n = std::thread::hardware_concurrency();
  return std::max(1u, n);
}

// flat "key = value" preset loader; '#' starts a comment
std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  auto trim = [](std::string t) {
    const auto a = t.find_first_not_of(" \t\r");
    const auto b = t.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : t.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = value;
  }
  return kv;
}

std::ostream& open_sink(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

// ---------------------------------------------------------------------------

struct CensusArgs {
  double mass = 0.0;
  std::string mass_unit = "me";
  std::optional<double> chi1, a1, chi2, length;
  std::string a1_unit = "si";
  double sperp = 1.0;
  double tol = 1e-5;
  std::string format = "text";
  std::string output;
};

int run_census(const CensusArgs& a) {
  if (a.chi1.has_value() == a.a1.has_value())
    throw std::domain_error("census: give exactly one of --chi1 / --a1");
  if (a.chi2.has_value() == a.length.has_value())
    throw std::domain_error("census: give exactly one of --chi2 / --length");

  FieldSpec field{mass_to_natural(a.mass, a.mass_unit)};
  DetectorBox box;
  box.chi1 = a.chi1 ? *a.chi1 : 1.0 / accel_to_natural(*a.a1, a.a1_unit);
  box.chi2 = a.chi2 ? *a.chi2 : box.chi1 + *a.length;
  box.s_perp = a.sperp;

  NumericsConfig cfg;
  cfg.quad.rel_tol = a.tol;

  const CensusResult r = census_exact(field, box, cfg);
  const bool has_thr = field.mass > 0.0;
  const double thr_nat = has_thr ? sudden_birth_threshold(field) : 0.0;
  const double thr_si =
      has_thr ? units::natural_to_si(units::QuantityKind::acceleration, thr_nat)
              : 0.0;

  std::ofstream file;
  std::ostream& os = open_sink(a.output, file);
  if (a.format == "json") {
    json j{{"n_expect", r.expectation},
           {"n_err", r.err_estimate},
           {"regime", to_string(r.regime)},
           {"converged", r.converged},
           {"threshold_a1_si", has_thr ? json(thr_si) : json(nullptr)}};
    os << j.dump(2) << "\n";
  } else if (a.format == "csv") {
    os << "n_expect,n_err,regime,threshold_a1_si,status\n"
       << sci(r.expectation) << ',' << sci(r.err_estimate) << ','
       << to_string(r.regime) << ','
       << (has_thr ? sci(thr_si) : std::string()) << ','
       << (r.converged ? "ok" : "noconv") << "\n";
  } else {
    os << "expectation   = " << sci(r.expectation) << "\n"
       << "err_estimate  = " << sci(r.err_estimate) << "\n"
       << "regime        = " << to_string(r.regime) << "\n";
    if (has_thr)
      os << "threshold_a1  = " << sci(thr_si) << " m/s^2 ("
         << sci(thr_si / units::standard_gravity) << " g)\n";
    else
      os << "threshold_a1  = n/a (massless field)\n";
  }
  return r.converged ? kExitOk : kExitNoConv;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  double mass = 0.0;
  std::string mass_unit = "me";
  double sperp = 1.0;
  double length = 1.0;
  double a1_min = 0.0, a1_max = 0.0;
  int a1_points = 0;
  std::string a1_unit = "si";
  double tol = 1e-4;
  std::string format = "csv";
  std::string output;
};

struct SweepRow {
  double a1_si = 0, a1_g = 0, a1_nat = 0;
  double n = 0, err = 0;
  RegimeTag regime = RegimeTag::crossover;
  double hi_limit = 0;
  std::optional<double> lo_limit;
  bool ok = false;
};

int run_sweep(const SweepArgs& a) {
  if (a.a1_points < 1) throw std::domain_error("sweep: empty a1 grid");
  if (!(a.a1_min > 0.0) || !(a.a1_max > 0.0) ||
      (a.a1_points > 1 && !(a.a1_max > a.a1_min)))
    throw std::domain_error("sweep: a1 grid must be positive and increasing");
  if (!(a.length > 0.0)) throw std::domain_error("sweep: length must be > 0");

  const double m_nat = mass_to_natural(a.mass, a.mass_unit);

  std::vector<double> a1_nat(a.a1_points);
  for (int i = 0; i < a.a1_points; ++i) {
    const double t = a.a1_points == 1
                         ? 0.0
                         : static_cast<double>(i) / (a.a1_points - 1);
    const double v = a.a1_min * std::pow(a.a1_max / a.a1_min, t);
    a1_nat[i] = accel_to_natural(v, a.a1_unit);
  }

  NumericsConfig const_cfg;
  const_cfg.quad.rel_tol = std::min(1e-4, a.tol);
  const auto C = constant_C(const_cfg);
  const auto D = constant_D(const_cfg);

  std::vector<SweepRow> rows(a1_nat.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= a1_nat.size()) return;
      SweepRow& row = rows[i];
      row.a1_nat = a1_nat[i];
      row.a1_si =
          units::natural_to_si(units::QuantityKind::acceleration, row.a1_nat);
      row.a1_g = row.a1_si / units::standard_gravity;
      DetectorBox box;
      box.chi1 = 1.0 / row.a1_nat;
      box.chi2 = box.chi1 + a.length;
      box.s_perp = a.sperp;
      NumericsConfig cfg;
      cfg.quad.rel_tol = a.tol;
      try {
        const CensusResult r = census_exact(FieldSpec{m_nat}, box, cfg);
        row.n = r.expectation;
        row.err = r.err_estimate;
        row.regime = r.regime;
        row.ok = r.converged;
      } catch (const std::exception&) {
        row.ok = false;
        row.regime = classify_regime(FieldSpec{m_nat}, box);
      }
      row.hi_limit = census_high_acc_limit(a.sperp, row.a1_nat, C.value);
      if (m_nat == 0.0)
        row.lo_limit =
            census_low_acc_limit(box.volume(), row.a1_nat, D.value);
    }
  };
  const unsigned nthreads =
      std::min<unsigned>(sweep_threads(), a1_nat.size());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ofstream file;
  std::ostream& os = open_sink(a.output, file);
  bool all_ok = true;
  if (a.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"a1_si", r.a1_si},
                     {"a1_g", r.a1_g},
                     {"a1_natural", r.a1_nat},
                     {"n_expect", r.n},
                     {"n_err", r.err},
                     {"regime", to_string(r.regime)},
                     {"n_high_limit", r.hi_limit},
                     {"n_low_limit",
                      r.lo_limit ? json(*r.lo_limit) : json(nullptr)},
                     {"status", r.ok ? "ok" : "noconv"}});
      all_ok = all_ok && r.ok;
    }
    os << arr.dump(2) << "\n";
  } else {
    os << "a1_si,a1_g,a1_natural,n_expect,n_err,regime,n_high_limit,"
          "n_low_limit,status\n";
    for (const auto& r : rows) {
      os << sci(r.a1_si) << ',' << sci(r.a1_g) << ',' << sci(r.a1_nat) << ','
         << sci(r.n) << ',' << sci(r.err) << ',' << to_string(r.regime) << ','
         << sci(r.hi_limit) << ','
         << (r.lo_limit ? sci(*r.lo_limit) : std::string()) << ','
         << (r.ok ? "ok" : "noconv") << "\n";
      all_ok = all_ok && r.ok;
    }
  }
  return all_ok ? kExitOk : kExitNoConv;
}

// ---------------------------------------------------------------------------

int run_constants(double tol) {
  NumericsConfig cfg;
  cfg.quad.rel_tol = tol;
  const auto C = constant_C(cfg);
  const auto D = constant_D(cfg);
  std::printf("C = %.9e +/- %.2e\n", C.value, C.err_estimate);
  std::printf("D = %.9e +/- %.2e\n", D.value, D.err_estimate);
  return (C.converged && D.converged) ? kExitOk : kExitNoConv;
}

int run_threshold(double mass, const std::string& unit) {
  if (!(mass > 0.0)) throw std::domain_error("threshold: mass must be > 0");
  const double m_nat = mass_to_natural(mass, unit);
  const double a_si =
      units::natural_to_si(units::QuantityKind::acceleration, m_nat);
  std::printf("threshold_a1 = %.9e m/s^2\n", a_si);
  std::printf("threshold_a1 = %.9e g\n", a_si / units::standard_gravity);
  return kExitOk;
}

int run_commutator(double mass, double rmin, double rmax, int points,
                   double tol, const std::string& output) {
  if (!(rmin < rmax)) throw std::domain_error("commutator: requires rmin < rmax");
  quad::QuadSpec spec;
  spec.rel_tol = tol;
  spec.abs_tol = 5e-9;
  const auto phiphi = nonloc::make_discrepancy_report(
      nonloc::CommKind::phiphi, mass, rmin, rmax, points, spec);
  const auto pipi = nonloc::make_discrepancy_report(
      nonloc::CommKind::pipi, mass, rmin, rmax, points, spec);
  std::ofstream file;
  std::ostream& os = open_sink(output, file);
  nonloc::write_discrepancy_table(os, phiphi);
  os << "\n";
  nonloc::write_discrepancy_table(os, pipi);
  return (phiphi.all_oracle_ok() && pipi.all_oracle_ok()) ? kExitOk
                                                          : kExitNoConv;
}

int run_bessel(double nu, double x, bool imag_order) {
  double v;
  if (imag_order) {
    v = specfun::bessel_k_imag(nu, x);
  } else {
    if (nu != std::floor(nu))
      throw std::domain_error("bessel: real orders must be integer 0, 1 or 2");
    v = specfun::bessel_k_int(static_cast<int>(nu), x);
  }
  std::printf("%.12e\n", v);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume Unruh particle census"};
  app.require_subcommand(1);

  CensusArgs census_args;
  auto* census = app.add_subcommand(
      "census", "expected particle number for one box configuration");
  census->add_option("--mass", census_args.mass, "field mass (>= 0)");
  census->add_option("--mass-unit", census_args.mass_unit,
                     "me | kg | invm (default me)");
  auto* chi1o = census->add_option("--chi1", census_args.chi1,
                                   "near-face horizon distance [m]");
  census->add_option("--a1", census_args.a1, "peak proper acceleration")
      ->excludes(chi1o);
  census->add_option("--a1-unit", census_args.a1_unit, "si | g | invm");
  auto* chi2o = census->add_option("--chi2", census_args.chi2,
                                   "far-face horizon distance [m]");
  census->add_option("--length", census_args.length, "box length [m]")
      ->excludes(chi2o);
  census->add_option("--sperp", census_args.sperp, "cross-section [m^2]");
  census->add_option("--tol", census_args.tol, "relative tolerance");
  census->add_option("--format", census_args.format, "text | csv | json");
  census->add_option("--output", census_args.output, "output path (default stdout)");

  SweepArgs sweep_args;
  std::string sweep_config;
  auto* sweep = app.add_subcommand(
      "sweep", "census over a log-spaced acceleration grid");
  sweep->add_option("--config", sweep_config, "flat key = value preset file");
  sweep->add_option("--mass", sweep_args.mass, "field mass (>= 0)");
  sweep->add_option("--mass-unit", sweep_args.mass_unit, "me | kg | invm");
  sweep->add_option("--sperp", sweep_args.sperp, "cross-section [m^2]");
  sweep->add_option("--length", sweep_args.length, "box length [m]");
  sweep->add_option("--a1-min", sweep_args.a1_min, "grid start (in --a1-unit)");
  sweep->add_option("--a1-max", sweep_args.a1_max, "grid end (in --a1-unit)");
  sweep->add_option("--a1-points", sweep_args.a1_points, "grid size");
  sweep->add_option("--a1-unit", sweep_args.a1_unit, "si | g | invm");
  sweep->add_option("--tol", sweep_args.tol, "relative tolerance");
  sweep->add_option("--format", sweep_args.format, "csv | json");
  sweep->add_option("--output", sweep_args.output, "output path (default stdout)");

  double const_tol = 1e-6;
  auto* constants =
      app.add_subcommand("constants", "high/low acceleration constants C and D");
  constants->add_option("--tol", const_tol, "relative tolerance");

  double thr_mass = 0.0;
  std::string thr_unit = "me";
  auto* threshold =
      app.add_subcommand("threshold", "sudden-birth acceleration m c^3 / hbar");
  threshold->add_option("--mass", thr_mass, "field mass (> 0)")->required();
  threshold->add_option("--mass-unit", thr_unit, "me | kg | invm");

  double comm_mass = 1.0, comm_rmin = 0.1, comm_rmax = 5.0, comm_tol = 1e-5;
  int comm_points = 9;
  std::string comm_output;
  auto* commutator = app.add_subcommand(
      "commutator", "density-commutator discrepancy report (natural units)");
  commutator->add_option("--mass", comm_mass, "field mass [1/m] (> 0)");
  commutator->add_option("--rmin", comm_rmin, "smallest separation [m]");
  commutator->add_option("--rmax", comm_rmax, "largest separation [m]");
  commutator->add_option("--points", comm_points, "grid size (log-spaced)");
  commutator->add_option("--tol", comm_tol, "oracle relative tolerance");
  commutator->add_option("--output", comm_output, "output path");

  double bes_nu = 0.0, bes_x = 1.0;
  bool bes_imag = false;
  auto* bessel = app.add_subcommand("bessel", "evaluate K_nu(x) or K_{i nu}(x)");
  bessel->add_option("--nu", bes_nu, "order")->required();
  bessel->add_option("--x", bes_x, "argument (> 0)")->required();
  bessel->add_flag("--imag", bes_imag, "imaginary order K_{i nu}");

  try {
    app.parse(argc, argv);
    if (census->parsed()) return run_census(census_args);
    if (sweep->parsed()) {
      if (!sweep_config.empty()) {
        // config supplies any option not given on the command line
        const auto kv = load_config(sweep_config);
        auto want = [&](const char* key) {
          return kv.count(key) != 0 && sweep->count(std::string("--") + key) == 0;
        };
        if (want("mass")) sweep_args.mass = std::stod(kv.at("mass"));
        if (want("mass-unit")) sweep_args.mass_unit = kv.at("mass-unit");
        if (want("sperp")) sweep_args.sperp = std::stod(kv.at("sperp"));
        if (want("length")) sweep_args.length = std::stod(kv.at("length"));
        if (want("a1-min")) sweep_args.a1_min = std::stod(kv.at("a1-min"));
        if (want("a1-max")) sweep_args.a1_max = std::stod(kv.at("a1-max"));
        if (want("a1-points")) sweep_args.a1_points = std::stoi(kv.at("a1-points"));
        if (want("a1-unit")) sweep_args.a1_unit = kv.at("a1-unit");
        if (want("tol")) sweep_args.tol = std::stod(kv.at("tol"));
        if (want("format")) sweep_args.format = kv.at("format");
        if (want("output")) sweep_args.output = kv.at("output");
      }
      return run_sweep(sweep_args);
    }
    if (constants->parsed()) return run_constants(const_tol);
    if (threshold->parsed()) return run_threshold(thr_mass, thr_unit);
    if (commutator->parsed())
      return run_commutator(comm_mass, comm_rmin, comm_rmax, comm_points,
                            comm_tol, comm_output);
    if (bessel->parsed()) return run_bessel(bes_nu, bes_x, bes_imag);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConv;
  }
}
