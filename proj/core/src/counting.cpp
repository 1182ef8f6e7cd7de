#include "relcount/counting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "relcount/errors.hpp"
#include "relcount/huber.hpp"
#include "relcount/parallel.hpp"
#include "relcount/quadrature.hpp"

namespace relcount {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_constant_parameter(cplx s) { return std::abs(s - 1.0) < 1e-12; }

bool is_small(cplx s) { return std::abs(s.imag()) < 1e-14 && s.real() > 0.5 && s.real() <= 1.0 + 1e-12; }

std::vector<double> sorted_b_values(const Inventory& inv) {
  std::vector<double> b;
  b.reserve(inv.reps.size());
  for (const auto& r : inv.reps) b.push_back(r.b_value);
  std::sort(b.begin(), b.end());
  return b;
}

// t where (a^2 y^2 + b^2)(c^2 y^2 + d^2) / y^2 = u, with y = e^t.
void level_crossings(const MoebiusElement& g, double u, std::vector<double>& out) {
  const double a2 = g.a() * g.a(), b2 = g.b() * g.b(), c2 = g.c() * g.c(), d2 = g.d() * g.d();
  const double p = a2 * c2, q = a2 * d2 + b2 * c2 - u, r = b2 * d2;
  const double disc = q * q - 4.0 * p * r;
  if (!(disc > 0.0)) return;
  const double big = (-q + std::sqrt(disc)) / (2.0 * p);
  if (!(big > 0.0)) return;
  const double small = r / (p * big);
  out.push_back(0.5 * std::log(small));
  out.push_back(0.5 * std::log(big));
}

}  // namespace

std::vector<SpectralDatum> parse_spectral_text(const std::string& text, const std::string& source) {
  std::vector<SpectralDatum> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double re = 0.0, im = 0.0, period = 0.0;
    std::string extra;
    if (!(fields >> re >> im >> period) || (fields >> extra)) {
      throw Error(ErrorCode::kParse,
                  source + ":" + std::to_string(lineno) + ": expected 's_real,s_imag,period'");
    }
    const cplx s(re, im);
    const bool on_line = std::abs(re - 0.5) < 1e-12;
    if (!is_small(s) && !on_line) {
      throw Error(ErrorCode::kParse, source + ":" + std::to_string(lineno) +
                                         ": s must be real in (1/2, 1] or have real part 1/2");
    }
    out.push_back({s, period});
  }
  return out;
}

std::vector<SpectralDatum> parse_spectral_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open spectral file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spectral_text(buf.str(), path);
}

std::vector<SpectralDatum> constant_spectrum(const GroupPresentation& pres) {
  if (!pres.volume) {
    throw Error(ErrorCode::kMissingConstantEigenfunction, "group volume needed for the constant period");
  }
  return {{cplx(1.0, 0.0), pres.length() / (std::sqrt(*pres.volume) * pres.nu)}};
}

void validate_spectrum(const std::vector<SpectralDatum>& spectral, const GroupPresentation& pres) {
  auto it = std::find_if(spectral.begin(), spectral.end(),
                         [](const SpectralDatum& d) { return is_constant_parameter(d.s); });
  if (it == spectral.end()) {
    throw Error(ErrorCode::kMissingConstantEigenfunction, "spectral data lacks s = 1");
  }
  if (pres.volume) {
    const double expected = constant_spectrum(pres)[0].period;
    if (std::abs(std::abs(it->period) - expected) > 1e-6 * expected) {
      throw Error(ErrorCode::kInvalidArgument,
                  "period at s = 1 disagrees with len / (sqrt(vol) nu) = " + std::to_string(expected));
    }
  }
}

double line_integral(const TestFunction& f, const MoebiusElement& g) {
  const double a = g.a(), b = g.b(), c = g.c(), d = g.d();
  if (a * b * c * d == 0.0) {
    throw Error(ErrorCode::kDegenerateEntries, "line integral needs abcd != 0");
  }
  const double u_max = f.x_support * f.x_support + 1.0;
  std::vector<double> pts;
  level_crossings(g, u_max, pts);
  if (pts.empty()) return 0.0;
  for (double k : f.kinks) level_crossings(g, k * k + 1.0, pts);
  pts.push_back(0.25 * std::log(b * b * d * d / (a * a * c * c)));
  std::sort(pts.begin(), pts.end());
  auto integrand = [&](double t) {
    const double u = inv_cos_sq_v(g, std::exp(t));
    return u >= u_max ? 0.0 : f.f_sq(std::sqrt(std::max(u - 1.0, 0.0)));
  };
  quad::Options opt;
  opt.abs_floor = 1e-14;
  return quad::panels(integrand, pts, opt);
}

GeometricSide geometric_side(const GroupPresentation& pres, const SmoothedIndicator& ind,
                             const Inventory& inv, KernelRoute route) {
  if (!inv.stable) throw Error(ErrorCode::kIncompleteInventory, "inventory is not stable");
  const double need = ind.X() + ind.Y();
  if (inv.x_cover < need) {
    throw Error(ErrorCode::kIncompleteInventory,
                "inventory covers B < " + std::to_string(inv.x_cover) + ", need " + std::to_string(need));
  }
  const TestFunction tf = as_test_function(ind);
  GeometricSide out;
  for (const auto& rep : inv.reps) {
    switch (rep.klass) {
      case CosetClass::kIdentity:
        out.identity_term = tf.f_sq(0.0) * pres.length();
        break;
      case CosetClass::kExceptional:
        out.exceptional_sum += route == KernelRoute::kClosed ? q_tilde_closed(ind, rep.b_value)
                                                             : line_integral(tf, rep.element);
        ++out.exceptional_terms;
        break;
      case CosetClass::kRegular:
        if (rep.b_value >= need) break;
        out.regular_sum += route == KernelRoute::kClosed ? q_eval(ind, rep.b_value)
                                                         : line_integral(tf, rep.element);
        ++out.regular_terms;
        break;
    }
  }
  out.total = out.identity_term + out.exceptional_sum + out.regular_sum;
  return out;
}

double main_term(const std::vector<SpectralDatum>& spectral, double X) {
  if (std::none_of(spectral.begin(), spectral.end(),
                   [](const SpectralDatum& d) { return is_constant_parameter(d.s); })) {
    throw Error(ErrorCode::kMissingConstantEigenfunction, "spectral data lacks s = 1");
  }
  double m = 0.0;
  for (const auto& d : spectral) {
    if (!is_small(d.s)) continue;
    const double s = d.s.real();
    const GammaFactors gf = gamma_factors(SpectralParameter::from_s(cplx(s, 0.0)));
    m += 2.0 / kPi * gf.gamma1.real() * d.period * d.period * std::pow(X, s);
  }
  return m;
}

CountReport count_from_inventory(const Inventory& inv, const std::vector<SpectralDatum>& spectral,
                                 double X) {
  if (X > inv.x_cover) {
    throw Error(ErrorCode::kIncompleteInventory,
                "inventory covers B < " + std::to_string(inv.x_cover) + " only");
  }
  CountReport r;
  r.X = X;
  for (const auto& rep : inv.reps) {
    if (!(rep.b_value < X)) continue;
    switch (rep.klass) {
      case CosetClass::kIdentity: ++r.identity_count; break;
      case CosetClass::kRegular: ++r.regular_count; break;
      case CosetClass::kExceptional: ++r.exceptional_count; break;
    }
  }
  r.n_count = static_cast<std::int64_t>(r.identity_count + r.regular_count + r.exceptional_count);
  r.main_term = main_term(spectral, X);
  r.error = static_cast<double>(r.n_count) - r.main_term;
  r.main_term_alt = 2.0 * r.main_term;
  r.diagonal_rejects = inv.diagonal_rejects;
  r.torsion_suspected = inv.torsion_suspected;
  r.word_depth = inv.word_depth;
  r.stable = inv.stable;
  return r;
}

CountReport count(const GroupPresentation& pres, const std::vector<SpectralDatum>& spectral, double X,
                  const CountOptions& opt) {
  return count_between(pres, pres, MoebiusElement::identity(), spectral, X, opt);
}

CountReport count_between(const GroupPresentation& pres1, const GroupPresentation& pres2,
                          const MoebiusElement& tau, const std::vector<SpectralDatum>& spectral,
                          double X, const CountOptions& opt) {
  const Inventory inv = coset_inventory_between(pres1, pres2, tau, X, opt.max_word_len, opt.inventory);
  if (!inv.stable && !opt.allow_unstable) {
    throw Error(ErrorCode::kUnstable, "inventory still growing at word length " +
                                          std::to_string(opt.max_word_len));
  }
  return count_from_inventory(inv, spectral, X);
}

double dyadic_tail_bound(double X, double Y, double cutoff_T, double period_sum_constant) {
  const int n0 = cutoff_T > 1.0 ? static_cast<int>(std::ceil(std::log2(cutoff_T))) : 0;
  const double ratio = X / Y;
  double sum = 0.0;
  int n = n0;
  for (; std::ldexp(1.0, n) <= ratio; ++n) sum += std::pow(2.0, 0.5 * n);
  // Remaining terms are ratio * 2^{-n/2}, a geometric series.
  sum += ratio * std::pow(2.0, -0.5 * n) / (1.0 - std::sqrt(0.5));
  return period_sum_constant * std::sqrt(X) * sum;
}

SpectralSide spectral_side_partial(const std::vector<SpectralDatum>& spectral,
                                   const SmoothedIndicator& ind, double cutoff_T,
                                   double period_sum_constant) {
  SpectralSide out;
  for (const auto& d : spectral) {
    const cplx dt = huber_closed(ind, SpectralParameter::from_s(d.s));
    out.value += 2.0 * dt.real() * d.period * d.period;
    ++out.terms;
  }
  out.tail_bound = dyadic_tail_bound(ind.X(), ind.Y(), cutoff_T, period_sum_constant);
  return out;
}

std::vector<double> moment_grid(double X, int R, const MomentScanOptions& opt,
                                const std::vector<double>& avoid) {
  if (R < 1) throw Error(ErrorCode::kInvalidArgument, "R must be positive");
  const double delta = opt.delta > 0.0 ? opt.delta : X / R;
  if (R * delta > X * (1.0 + 1e-12)) {
    throw Error(ErrorCode::kInvalidArgument, "R * delta exceeds X; the grid does not fit in [X, 2X]");
  }
  std::vector<double> pts;
  if (R == 1) {
    pts.push_back(X);
  } else if (!opt.poisson) {
    for (int m = 0; m < R; ++m) pts.push_back(X + m * X / (R - 1));
  } else {
    // Gaps are delta plus exponential spacings rescaled to fill the interval.
    std::mt19937_64 rng(opt.seed);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> e(static_cast<std::size_t>(R));
    double total = 0.0;
    for (auto& v : e) total += (v = expo(rng));
    const double gap0 = delta * (1.0 + 1e-6);
    const double free = X - (R - 1) * gap0;
    double x = X + free * e[0] / total;
    for (int m = 0; m < R; ++m) {
      pts.push_back(std::min(x, 2.0 * X));
      if (m + 1 < R) x += gap0 + free * e[static_cast<std::size_t>(m + 1)] / total;
    }
  }
  std::vector<double> sorted = avoid;
  std::sort(sorted.begin(), sorted.end());
  for (auto& x : pts) {
    const double nudge = 1e-9 * (1.0 + x);
    for (int guard = 0; guard < 100; ++guard) {
      auto it = std::lower_bound(sorted.begin(), sorted.end(), x - nudge);
      if (it == sorted.end() || *it > x + nudge) break;
      x += nudge;
    }
  }
  return pts;
}

MomentScan moment_scan(const Inventory& inv, const std::vector<SpectralDatum>& spectral, double X,
                       int R, const MomentScanOptions& opt) {
  MomentScan scan;
  scan.X = X;
  scan.R = R;
  scan.delta = opt.delta > 0.0 ? opt.delta : X / R;
  scan.points = moment_grid(X, R, opt, sorted_b_values(inv));
  if (scan.points.back() > inv.x_cover) {
    throw Error(ErrorCode::kIncompleteInventory, "inventory must cover the whole scan interval");
  }
  scan.reports.resize(scan.points.size());
  parallel_chunks(scan.points.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) scan.reports[i] = count_from_inventory(inv, spectral, scan.points[i]);
  });
  double sum = 0.0;
  for (const auto& r : scan.reports) sum += r.error * r.error;
  scan.mean_square = sum / R;
  const double lx = std::log(X);
  scan.normalized = scan.mean_square / (X * lx * lx);
  return scan;
}

MomentScan moment_scan(const GroupPresentation& pres, const std::vector<SpectralDatum>& spectral,
                       double X, int R, const MomentScanOptions& opt, const CountOptions& count_opt) {
  moment_grid(X, R, opt);
  const Inventory inv = coset_inventory(pres, 2.0 * X * (1.0 + 1e-6), count_opt.max_word_len,
                                        count_opt.inventory);
  if (!inv.stable && !count_opt.allow_unstable) {
    throw Error(ErrorCode::kUnstable, "inventory still growing at word length " +
                                          std::to_string(count_opt.max_word_len));
  }
  return moment_scan(inv, spectral, X, R, opt);
}

}  // namespace relcount
