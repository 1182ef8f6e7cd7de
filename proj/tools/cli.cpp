#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "relcount/counting.hpp"
#include "relcount/errors.hpp"
#include "relcount/fuchsian.hpp"
#include "relcount/huber.hpp"
#include "relcount/test_functions.hpp"

namespace relcount::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kCountHeader =
    "X,n_count,main_term,error,regular_count,exceptional_count,word_depth,stable";

struct Settings {
  std::string config;
  std::string group;
  std::string spectral;
  double x = 20.0;
  double x_max = 0.0;
  int x_steps = 1;
  std::string y_policy = "x^2/3";
  int max_word_len = 14;
  bool allow_unstable = false;
  std::uint64_t seed = 0;
  std::string out = ".";
  int r = 64;
  double delta = 0.0;
  bool poisson = false;
  double period_sum_constant = 0.0;
  double cutoff_t = 1.0;
  double tolerance = 1e-5;
  std::vector<double> huber_s{0.6, 0.75, 0.9};
  std::vector<double> huber_t{2.0, 10.0};
  std::vector<double> huber_x{25.0, 100.0};
};

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string resolve(const Settings& st, const std::string& path) {
  if (path.empty() || fs::path(path).is_absolute() || st.config.empty()) return path;
  return (fs::path(st.config).parent_path() / path).string();
}

double y_for(const Settings& st, double X) {
  const std::string& p = st.y_policy;
  if (p == "x^2/3" || p == "x23") return std::cbrt(X * X);
  try {
    std::size_t used = 0;
    const double y = std::stod(p, &used);
    if (used == p.size() && y > 0.0) return y;
  } catch (const std::exception&) {
  }
  throw ConfigError("y-policy must be 'x^2/3' or a positive width, got '" + p + "'");
}

GroupPresentation load_group(const Settings& st) {
  if (st.group.empty()) throw ConfigError("no group file given (key 'group')");
  return parse_group_file(resolve(st, st.group));
}

std::vector<SpectralDatum> load_spectrum(const Settings& st, const GroupPresentation& pres) {
  std::vector<SpectralDatum> spectrum =
      st.spectral.empty() ? constant_spectrum(pres) : parse_spectral_file(resolve(st, st.spectral));
  validate_spectrum(spectrum, pres);
  return spectrum;
}

std::ofstream open_output(const Settings& st, const std::string& name, std::ostream& out) {
  fs::create_directories(resolve(st, st.out));
  const fs::path path = fs::path(resolve(st, st.out)) / name;
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  fmt::print(out, "wrote {}\n", path.string());
  return f;
}

// Returns false when the caller should stop with kUnstableInventory.
bool check_stability(const Settings& st, const Inventory& inv, std::ostream& out, std::ostream& err) {
  fmt::print(out, "inventory: {} representatives, word depth {}, ball {}, {}{}\n", inv.reps.size(),
             inv.word_depth, inv.ball_size, inv.stable ? "stable" : "UNSTABLE",
             inv.saturated ? " (ball saturated)" : "");
  if (inv.diagonal_rejects > 0) {
    fmt::print(err, "warning: {} elements with zero entries rejected\n", inv.diagonal_rejects);
  }
  if (inv.torsion_suspected > 0) {
    fmt::print(err, "warning: {} representatives with B within 1e-9 of 1\n", inv.torsion_suspected);
  }
  if (inv.stable) return true;
  if (st.allow_unstable) {
    fmt::print(err, "warning: inventory still growing at word length {}; continuing\n", st.max_word_len);
    return true;
  }
  fmt::print(err, "error: inventory still growing at word length {} (use --allow-unstable)\n",
             st.max_word_len);
  return false;
}

void write_count_row(std::ostream& f, const CountReport& r) {
  fmt::print(f, "{},{},{},{},{},{},{},{}\n", num(r.X), r.n_count, num(r.main_term), num(r.error),
             r.regular_count, r.exceptional_count, r.word_depth, r.stable ? 1 : 0);
}

int cmd_inventory(const Settings& st, std::ostream& out, std::ostream& err) {
  const auto pres = load_group(st);
  const Inventory inv = coset_inventory(pres, st.x, st.max_word_len);
  if (!check_stability(st, inv, out, err)) return kUnstableInventory;
  auto f = open_output(st, "inventory.csv", out);
  fmt::print(f, "a,b,c,d,b_value,class,word_length\n");
  for (const auto& rep : inv.reps) {
    const auto& g = rep.element;
    fmt::print(f, "{},{},{},{},{},{},{}\n", num(g.a()), num(g.b()), num(g.c()), num(g.d()),
               num(rep.b_value), coset_class_name(rep.klass), rep.word_length);
  }
  fmt::print(out, "identity {}, regular {}, exceptional {} with B < {}\n",
             inv.count_class(CosetClass::kIdentity), inv.count_class(CosetClass::kRegular),
             inv.count_class(CosetClass::kExceptional), num(st.x));
  return kOk;
}

int cmd_count(const Settings& st, std::ostream& out, std::ostream& err) {
  const auto pres = load_group(st);
  const auto spectrum = load_spectrum(st, pres);
  std::vector<double> xs{st.x};
  if (st.x_max > st.x && st.x_steps > 1) {
    xs.clear();
    for (int k = 0; k < st.x_steps; ++k) {
      xs.push_back(st.x * std::pow(st.x_max / st.x, static_cast<double>(k) / (st.x_steps - 1)));
    }
  }
  const Inventory inv = coset_inventory(pres, xs.back(), st.max_word_len);
  if (!check_stability(st, inv, out, err)) return kUnstableInventory;
  auto f = open_output(st, "count.csv", out);
  fmt::print(f, "{}\n", kCountHeader);
  for (double X : xs) {
    const CountReport r = count_from_inventory(inv, spectrum, X);
    write_count_row(f, r);
    fmt::print(out, "X={} N={} M={} E={} (alt M={})\n", num(X), r.n_count, num(r.main_term),
               num(r.error), num(r.main_term_alt));
  }
  return kOk;
}

int cmd_moment_scan(const Settings& st, std::ostream& out, std::ostream& err) {
  MomentScanOptions mo;
  mo.delta = st.delta;
  mo.poisson = st.poisson;
  mo.seed = st.seed;
  const double delta = st.delta > 0.0 ? st.delta : st.x / st.r;
  if (st.r < 1 || st.r * delta > st.x * (1.0 + 1e-12)) {
    throw ConfigError("moment scan grid does not fit: R * delta must not exceed X");
  }
  const auto pres = load_group(st);
  const auto spectrum = load_spectrum(st, pres);
  const Inventory inv = coset_inventory(pres, 2.0 * st.x * (1.0 + 1e-6), st.max_word_len);
  if (!check_stability(st, inv, out, err)) return kUnstableInventory;
  const MomentScan scan = moment_scan(inv, spectrum, st.x, st.r, mo);
  auto f = open_output(st, "moment_scan.csv", out);
  fmt::print(f, "{}\n", kCountHeader);
  for (const auto& r : scan.reports) write_count_row(f, r);
  auto s = open_output(st, "moment_summary.csv", out);
  fmt::print(s, "X,R,delta,mean_square,normalized\n{},{},{},{},{}\n", num(scan.X), scan.R,
             num(scan.delta), num(scan.mean_square), num(scan.normalized));
  fmt::print(out, "(1/R) sum |E|^2 = {}  /(X log^2 X) = {}\n", num(scan.mean_square),
             num(scan.normalized));
  return kOk;
}

std::vector<cplx> s_grid(const Settings& st) {
  std::vector<cplx> grid;
  for (double s : st.huber_s) {
    if (!(s > 0.5 && s <= 1.0)) throw ConfigError("huber-s values must lie in (1/2, 1]");
    grid.emplace_back(s, 0.0);
  }
  for (double t : st.huber_t) grid.emplace_back(0.5, t);
  return grid;
}

double rel_dev(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

int cmd_huber_bench(const Settings& st, std::ostream& out, std::ostream&) {
  const auto grid = s_grid(st);
  auto f = open_output(st, "huber_bench.csv", out);
  fmt::print(f, "s_real,s_imag,X,Y,numeric_real,numeric_imag,closed_real,closed_imag,rel_dev\n");
  using clock = std::chrono::steady_clock;
  for (cplx s : grid) {
    for (double X : st.huber_x) {
      const SmoothedIndicator ind(X, y_for(st, X), Sign::kPlus);
      const auto sp = SpectralParameter::from_s(s);
      const auto t0 = clock::now();
      const cplx dn = huber_numeric(ind, sp);
      const auto t1 = clock::now();
      const cplx dc = huber_closed(ind, sp);
      const auto t2 = clock::now();
      fmt::print(f, "{},{},{},{},{},{},{},{},{}\n", num(s.real()), num(s.imag()), num(X), num(ind.Y()),
                 num(dn.real()), num(dn.imag()), num(dc.real()), num(dc.imag()), num(rel_dev(dn, dc)));
      fmt::print(out, "s={}{:+}i X={}: rel dev {:.3e}, numeric {:.3f} ms, closed {:.3f} ms\n",
                 s.real(), s.imag(), X, rel_dev(dn, dc),
                 std::chrono::duration<double, std::milli>(t1 - t0).count(),
                 std::chrono::duration<double, std::milli>(t2 - t1).count());
    }
  }
  return kOk;
}

// Random unimodular matrix with abcd < 0 and entries of moderate size.
MoebiusElement random_exceptional(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.2, 3.0);
  std::bernoulli_distribution coin(0.5);
  for (;;) {
    const double a = mag(rng), b = mag(rng) * (coin(rng) ? 1 : -1), c = mag(rng) * (coin(rng) ? 1 : -1);
    const double d = (1.0 + b * c) / a;
    if (a * b * c * d < 0.0 && std::abs(d) > 0.05) return {a, b, c, d};
  }
}

int cmd_trace_check(const Settings& st, std::ostream& out, std::ostream& err) {
  const auto pres = load_group(st);
  const double X = st.x, Y = y_for(st, X);
  const Inventory inv = coset_inventory(pres, X + Y, st.max_word_len);
  if (!check_stability(st, inv, out, err)) return kUnstableInventory;

  struct Check {
    std::string name;
    double deviation;
  };
  std::vector<Check> checks;
  std::mt19937_64 rng(st.seed);
  std::vector<MoebiusElement> synthetic;
  for (int k = 0; k < 20; ++k) synthetic.push_back(random_exceptional(rng));

  for (Sign sign : {Sign::kPlus, Sign::kMinus}) {
    const char* tag = sign == Sign::kPlus ? "plus" : "minus";
    const SmoothedIndicator ind(X, Y, sign);
    const TestFunction tf = as_test_function(ind);
    double worst_reg = 0.0, worst_exc = 0.0;
    for (const auto& rep : inv.reps) {
      if (rep.klass == CosetClass::kIdentity) continue;
      const bool reg = rep.klass == CosetClass::kRegular;
      const double q = reg ? q_eval(ind, rep.b_value) : q_tilde_closed(ind, rep.b_value);
      const double dev = std::abs(line_integral(tf, rep.element) - q) / (1.0 + std::abs(q));
      (reg ? worst_reg : worst_exc) = std::max(reg ? worst_reg : worst_exc, dev);
    }
    for (const auto& g : synthetic) {
      const double q = q_tilde_closed(ind, b_invariant(g));
      worst_exc = std::max(worst_exc, std::abs(line_integral(tf, g) - q) / (1.0 + std::abs(q)));
    }
    const auto closed = geometric_side(pres, ind, inv, KernelRoute::kClosed);
    const auto oracle = geometric_side(pres, ind, inv, KernelRoute::kLineIntegral);
    checks.push_back({fmt::format("coset_regular_{}", tag), worst_reg});
    checks.push_back({fmt::format("coset_exceptional_{}", tag), worst_exc});
    checks.push_back({fmt::format("geometric_side_{}", tag),
                      std::abs(closed.total - oracle.total) / std::max(std::abs(oracle.total), 1.0)});
  }
  double worst_huber = 0.0;
  for (cplx s : s_grid(st)) {
    const SmoothedIndicator ind(X, Y, Sign::kPlus);
    const auto sp = SpectralParameter::from_s(s);
    worst_huber = std::max(worst_huber, rel_dev(huber_numeric(ind, sp), huber_closed(ind, sp)));
  }
  checks.push_back({"huber_numeric_vs_closed", worst_huber});

  const auto spectrum = load_spectrum(st, pres);
  const double c = st.period_sum_constant > 0.0 ? st.period_sum_constant : pres.length() / M_PI;
  const SmoothedIndicator plus(X, Y, Sign::kPlus);
  const auto spectral = spectral_side_partial(spectrum, plus, st.cutoff_t, c);
  const auto geometric = geometric_side(pres, plus, inv);
  fmt::print(out, "geometric side {} vs supplied spectral terms {} (difference {}, tail bound {})\n",
             num(geometric.total), num(spectral.value), num(geometric.total - spectral.value),
             num(spectral.tail_bound));

  auto f = open_output(st, "trace_check.csv", out);
  fmt::print(f, "check,max_deviation,tolerance,pass\n");
  bool ok = true;
  for (const auto& c : checks) {
    const bool pass = c.deviation <= st.tolerance;
    ok = ok && pass;
    fmt::print(f, "{},{},{},{}\n", c.name, num(c.deviation), num(st.tolerance), pass ? 1 : 0);
    fmt::print(out, "{:<28} max deviation {:.3e}  {}\n", c.name, c.deviation, pass ? "ok" : "FAIL");
  }
  return ok ? kOk : kOracleFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Settings st;
  CLI::App app{"Double coset counting and relative trace formula checks", "relcount"};
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "Flat 'key = value' configuration file; flags override it")
      ->check(CLI::ExistingFile);
  app.add_option("--group", st.group, "Group file");
  app.add_option("--spectral", st.spectral, "Spectral data file (default: constant eigenfunction)");
  app.add_option("--x", st.x, "X")->check(CLI::PositiveNumber);
  app.add_option("--x-max,--x_max", st.x_max, "Upper end of a logarithmic X grid (count)");
  app.add_option("--x-steps,--x_steps", st.x_steps, "Points on the X grid (count)")->check(CLI::PositiveNumber);
  app.add_option("--y-policy,--y_policy", st.y_policy, "Ramp width: x^2/3 or a fixed positive number");
  app.add_option("--max-word-len,--max_word_len", st.max_word_len, "Word-length cap")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--allow-unstable,--allow_unstable", st.allow_unstable, "Proceed when the inventory is unstable");
  app.add_option("--seed", st.seed, "Seed for sampled checks and Poisson grids");
  app.add_option("--out", st.out, "Output directory");
  app.add_option("--r", st.r, "Moment scan sample count")->check(CLI::PositiveNumber);
  app.add_option("--delta", st.delta, "Moment scan spacing (default X/R)")->check(CLI::NonNegativeNumber);
  app.add_flag("--poisson", st.poisson, "Poisson-spaced moment scan grid");
  app.add_option("--period-sum-constant,--period_sum_constant", st.period_sum_constant,
                 "Constant of the period sum bound (default len/pi)");
  app.add_option("--cutoff-t,--cutoff_t", st.cutoff_t, "Spectral cutoff for the tail bound");
  app.add_option("--tolerance", st.tolerance, "Oracle tolerance for trace-check")->check(CLI::PositiveNumber);
  app.add_option("--huber-s,--huber_s", st.huber_s, "Real s values in (1/2, 1]");
  app.add_option("--huber-t,--huber_t", st.huber_t, "t values, s = 1/2 + it");
  app.add_option("--huber-x,--huber_x", st.huber_x, "X values for huber-bench");

  auto* inventory = app.add_subcommand("inventory", "Coset inventory with B < X");
  auto* count_cmd = app.add_subcommand("count", "N, M and E at X or over an X grid");
  auto* moment = app.add_subcommand("moment-scan", "Mean square of E over [X, 2X]");
  auto* bench = app.add_subcommand("huber-bench", "Numeric and closed Huber transforms over an s grid");
  auto* trace = app.add_subcommand("trace-check", "Per-coset and Huber oracle suites");
  for (auto* sub : {inventory, count_cmd, moment, bench, trace}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kConfigError;
  }
  if (!app.get_option("--config")->empty()) st.config = app.get_option("--config")->as<std::string>();

  try {
    y_for(st, st.x);
    if (*inventory) return cmd_inventory(st, out, err);
    if (*count_cmd) return cmd_count(st, out, err);
    if (*moment) return cmd_moment_scan(st, out, err);
    if (*bench) return cmd_huber_bench(st, out, err);
    if (*trace) return cmd_trace_check(st, out, err);
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kConfigError;
  } catch (const Error& e) {
    fmt::print(err, "error: {}: {}\n", error_code_name(e.code()), e.what());
    switch (e.code()) {
      case ErrorCode::kParse:
      case ErrorCode::kInvalidArgument:
      case ErrorCode::kMissingConstantEigenfunction:
        return kConfigError;
      case ErrorCode::kUnstable:
      case ErrorCode::kIncompleteInventory:
        return kUnstableInventory;
      default:
        return kFailure;
    }
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kFailure;
  }
  return kOk;
}

}  // namespace relcount::cli
