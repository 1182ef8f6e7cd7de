#include "relcount/huber.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <array>
#include <initializer_list>
#include <string>
#include <numbers>
#include <vector>

#include "relcount/errors.hpp"
#include "relcount/quadrature.hpp"

namespace relcount {

namespace {

constexpr double kPi = std::numbers::pi;

struct Quotient {
  cplx value;
  bool pole;
};

Quotient gamma_quotient(cplx pref, std::initializer_list<cplx> num,
                        std::initializer_list<cplx> den) {
  for (cplx n : num)
    if (is_nonpositive_integer(n)) return {0.0, true};
  for (cplx d : den)
    if (is_nonpositive_integer(d)) return {0.0, false};
  cplx acc = 0.0;
  for (cplx n : num) acc += log_gamma(n);
  for (cplx d : den) acc -= log_gamma(d);
  return {pref * std::exp(acc), false};
}

bool near_integer(cplx x, double tol) {
  return std::abs(x.imag()) < tol && std::abs(x.real() - std::round(x.real())) < tol;
}

bool near_degenerate(cplx s, double tol) {
  return near_integer(s - 0.5, tol) || near_integer((1.0 + s) / 2.0, tol) ||
         near_integer(1.0 - s / 2.0, tol);
}

// Breakpoints in x where the WKB phase sqrt(lambda) asinh(x) advances by pi.
std::vector<double> oscillation_points(const SpectralParameter& s, double x_end) {
  std::vector<double> pts;
  const double omega = std::sqrt(std::abs(s.lambda()));
  if (omega < 1.0) return pts;
  const double step = kPi / omega;
  for (int k = 1; k < 200000; ++k) {
    const double x = std::sinh(k * step);
    if (x >= x_end) break;
    pts.push_back(x);
  }
  return pts;
}

std::vector<double> x_panels(const SpectralParameter& s, double x_end,
                             const std::vector<double>& kinks) {
  std::vector<double> pts = oscillation_points(s, x_end);
  pts.push_back(0.0);
  pts.push_back(x_end);
  for (double k : kinks)
    if (k > 0.0 && k < x_end) pts.push_back(k);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

quad::Options huber_options() {
  quad::Options opt;
  opt.rel_tol = 1e-12;
  opt.fail_tol = 1e-7;
  opt.abs_floor = 1e-12;
  return opt;
}

cplx gs_block(cplx s, double x2) {
  return std::exp((s + 2.0) / 2.0 * std::log(x2)) *
         hyp2f1(1.0 - s / 2.0, -1.0 - s / 2.0, (3.0 - 2.0 * s) / 2.0, -1.0 / x2);
}

cplx third_block(cplx s, double x) {
  return x * hyp_pfq({1.0, 1.5, -0.5}, {(s + 3.0) / 2.0, (4.0 - s) / 2.0}, -1.0 / (x * x));
}

}  // namespace

GammaFactors gamma_factors(const SpectralParameter& sp) {
  const cplx s = sp.s();
  GammaFactors g;
  const cplx den1 = s * (2.0 * s - 1.0);
  if (den1 == 0.0) {
    g.pole1 = true;
  } else {
    const Quotient q1 = gamma_quotient(kPi / 2.0 * 4.0 / den1, {s + 0.5, (s + 1.0) / 2.0},
                                       {s / 2.0, s / 2.0, s / 2.0});
    g.gamma1 = q1.value;
    g.pole1 = q1.pole;
  }
  const Quotient q2 = gamma_quotient(kPi / 2.0, {(1.0 - 2.0 * s) / 2.0, (2.0 - s) / 2.0},
                                     {(1.0 - s) / 2.0, (1.0 - s) / 2.0, (5.0 - s) / 2.0});
  g.gamma2 = q2.value;
  g.pole2 = q2.pole;
  const Quotient q3 = gamma_quotient(-0.5, {(-1.0 - s) / 2.0, (s - 2.0) / 2.0},
                                     {(1.0 - s) / 2.0, s / 2.0});
  g.gamma3 = q3.value;
  g.pole3 = q3.pole;
  return g;
}

cplx huber_numeric(const TestFunction& f, const SpectralParameter& s) {
  const cplx sv = s.s();
  auto integrand = [&](double x) -> cplx {
    const double fv = f.f_sq(x);
    return fv == 0.0 ? cplx(0.0) : fv * xi_kernel(sv, x);
  };
  if (std::isfinite(f.x_support)) {
    return quad::panels_complex(integrand, x_panels(s, f.x_support, f.kinks), huber_options());
  }
  double x0 = 8.0;
  for (double k : f.kinks) x0 = std::max(x0, 2.0 * k);
  const cplx head = quad::panels_complex(integrand, x_panels(s, x0, f.kinks), huber_options());
  try {
    quad::Options opt = huber_options();
    opt.fail_tol = 1e-6;
    const double re = quad::exp_sinh([&](double x) { return integrand(x).real(); }, x0, opt);
    const double im = quad::exp_sinh([&](double x) { return integrand(x).imag(); }, x0, opt);
    return head + cplx(re, im);
  } catch (const Error& e) {
    throw Error(ErrorCode::kSlowDecay, std::string("tail of f is not integrable: ") + e.what());
  }
}

cplx huber_numeric(const SmoothedIndicator& ind, const SpectralParameter& s) {
  return huber_numeric(as_test_function(ind), s);
}

cplx huber_numeric_v(const TestFunction& f, const SpectralParameter& s) {
  if (!std::isfinite(f.x_support)) {
    throw Error(ErrorCode::kInvalidArgument, "v-form needs compact support");
  }
  const cplx sv = s.s();
  const cplx two_d = 2.0 * legendre_sum_prefactor(sv);
  auto integrand = [&](double v) -> cplx {
    const double x = std::tan(v);
    const double fv = f.f_sq(x);
    if (fv == 0.0) return 0.0;
    const auto [pp, pm] = legendre_p(sv, x);
    const double cv = std::cos(v);
    return fv * ((pp + pm) / two_d) / (cv * cv);
  };
  std::vector<double> pts;
  for (double x : x_panels(s, f.x_support, f.kinks)) pts.push_back(std::atan(x));
  return quad::panels_complex(integrand, pts, huber_options());
}

cplx j_s_quadrature(const SpectralParameter& s, double y) {
  if (!(y > 0.0)) throw Error(ErrorCode::kInvalidArgument, "J_s needs y > 0");
  const cplx sv = s.s();
  const double root = std::sqrt(y);
  auto integrand = [&](double x) -> cplx {
    return x * std::sqrt(std::max(y - x * x, 0.0)) * xi_kernel(sv, x);
  };
  return 2.0 * legendre_sum_prefactor(sv) *
         quad::panels_complex(integrand, x_panels(s, root, {}), huber_options());
}

cplx r_s_transformed(const SpectralParameter& s, double y, DegeneratePolicy policy) {
  if (!(y > 0.0)) throw Error(ErrorCode::kInvalidArgument, "R_s needs y > 0");
  auto eval = [y](cplx sv) -> cplx {
    const std::array<cplx, 3> a{(1.0 - sv) / 2.0, sv / 2.0, 1.0};
    const std::array<cplx, 2> b{0.5, 2.5};
    cplx f3;
    if (y < 1.0) {
      f3 = hyp_pfq({a[0], a[1], a[2]}, {b[0], b[1]}, -y);
    } else {
      const auto parts = connect_3f2_large_argument(a, b, -y);
      f3 = parts[0] + parts[1] + parts[2];
    }
    return std::pow(y, 1.5) / 3.0 * f3;
  };
  const cplx sv = s.s();
  if (y >= 1.0 && near_degenerate(sv, 1e-8)) {
    if (policy == DegeneratePolicy::kThrow) {
      throw Error(ErrorCode::kDegenerateParameters,
                  "J_s expansion is singular at s = 1/2 and s = 1");
    }
    const cplx h(1e-6, 1e-6);
    return 2.0 * eval(sv + h) - eval(sv + 2.0 * h);
  }
  return eval(sv);
}

cplx j_s_transformed(const SpectralParameter& s, double y, DegeneratePolicy policy) {
  return 2.0 * legendre_sum_prefactor(s.s()) * r_s_transformed(s, y, policy);
}

cplx j_s(const SpectralParameter& s, double y) {
  if (near_degenerate(s.s(), 1e-4)) return j_s_quadrature(s, y);
  return j_s_transformed(s, y);
}

cplx huber_closed(const SmoothedIndicator& ind, const SpectralParameter& s) {
  const cplx sv = s.s();
  if (std::abs(sv - 0.5) < 1e-4 || std::abs(sv - 1.0) < 1e-4) return huber_numeric(ind, s);
  const double outer = ind.x_outer(), inner = ind.x_inner();
  const cplx r_outer = r_s_transformed(s, outer * outer);
  const cplx r_inner = inner > 0.0 ? r_s_transformed(s, inner * inner) : cplx(0.0);
  return 2.0 / (kPi * ind.H()) * (r_outer - r_inner);
}

cplx huber_leading_terms(const SmoothedIndicator& ind, const SpectralParameter& s) {
  const cplx sv = s.s();
  const GammaFactors g = gamma_factors(s);
  if (g.pole1 || g.pole2 || g.pole3) {
    throw Error(ErrorCode::kParameterPole, "gamma factor pole in the expansion");
  }
  const double lo = std::log(ind.x_outer()), li = std::log(ind.x_inner());
  auto diff = [&](cplx p) { return std::exp(p * lo) - std::exp(p * li); };
  const double H = ind.H();
  return (g.gamma1 * (2.0 / (sv + 2.0)) * diff(sv + 2.0) + g.gamma2 * diff(3.0 - sv) +
          g.gamma3 * diff(1.0)) /
         (kPi * H);
}

cplx huber_small_eigenvalue_form(const SmoothedIndicator& ind, const SpectralParameter& s) {
  const cplx sv = s.s();
  const GammaFactors g = gamma_factors(s);
  const double X = ind.X();
  cplx v = g.gamma1 / kPi * std::pow(X, sv);
  if (!g.pole2) v += g.gamma2 / kPi * (3.0 - sv) / 2.0 * std::pow(X, 1.0 - sv);
  return v;
}

HuberDecomposition huber_decompose(const SmoothedIndicator& ind, const SpectralParameter& s) {
  const cplx sv = s.s();
  if (near_degenerate(sv, 1e-4)) {
    throw Error(ErrorCode::kDegenerateParameters, "decomposition excludes s = 1/2, 1");
  }
  const GammaFactors g = gamma_factors(s);
  const double O = ind.x_outer(), I = ind.x_inner(), H = ind.H(), X = ind.X();
  HuberDecomposition d;
  d.leading = g.gamma1 / kPi * (2.0 / (sv + 2.0)) * (gs_block(sv, O * O) - gs_block(sv, I * I)) / H;
  d.reflected = g.gamma2 / kPi * (gs_block(1.0 - sv, O * O) - gs_block(1.0 - sv, I * I)) / H;
  d.remainder = g.gamma3 / (kPi * H) * (third_block(sv, O) - third_block(sv, I));
  d.a_coef = d.leading / std::pow(X, sv);
  d.b_coef = d.reflected / std::pow(X, 1.0 - sv);
  return d;
}

cplx mean_value_kernel(const SpectralParameter& s, double xi) {
  if (!(xi > 0.0)) throw Error(ErrorCode::kInvalidArgument, "mean value kernel needs xi > 0");
  const cplx sv = s.s();
  const double r = std::sqrt(xi);
  auto integrand = [&](double th) -> cplx { return std::sin(th) * xi_kernel(sv, r * std::sin(th)); };
  std::vector<double> pts;
  for (double x : x_panels(s, r, {})) pts.push_back(std::asin(std::min(x / r, 1.0)));
  return r / kPi * quad::panels_complex(integrand, pts, huber_options());
}

double mean_value_point(const SmoothedIndicator& ind, const SpectralParameter& s) {
  const double target = huber_closed(ind, s).real();
  const double lo = ind.x_inner() * ind.x_inner(), hi = ind.x_outer() * ind.x_outer();
  auto phi = [&](double xi) { return mean_value_kernel(s, xi).real() - target; };
  constexpr int kScan = 64;
  double x0 = lo, f0 = phi(lo);
  if (f0 == 0.0) return lo;
  for (int k = 1; k <= kScan; ++k) {
    const double x1 = lo + (hi - lo) * k / kScan;
    const double f1 = phi(x1);
    if (f1 == 0.0) return x1;
    if ((f0 < 0.0) != (f1 < 0.0)) {
      std::uintmax_t iters = 100;
      const auto bracket = boost::math::tools::toms748_solve(
          phi, x0, x1, f0, f1, boost::math::tools::eps_tolerance<double>(45), iters);
      return 0.5 * (bracket.first + bracket.second);
    }
    x0 = x1;
    f0 = f1;
  }
  throw Error(ErrorCode::kInvalidArgument, "no mean-value point found in [I^2, O^2]");
}

}  // namespace relcount
