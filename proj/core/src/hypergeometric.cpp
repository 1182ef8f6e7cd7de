#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <optional>
#include <string>

#include "relcount/errors.hpp"
#include "relcount/special_functions.hpp"

namespace relcount {

namespace {

constexpr int kMaxTerms = 100000;
constexpr int kTailRun = 50;
constexpr double kTailRatio = 1e-16;
constexpr double kMaxCondition = 1e4;
constexpr double kRouteRadius = 0.75;

struct SeriesOut {
  cplx value;
  cplx deriv;
  double cond;
  bool converged;
};

SeriesOut series2f1(cplx a, cplx b, cplx c, cplx z) {
  cplx term = 1.0, sum = 1.0, dsum = 0.0;
  double maxabs = 1.0;
  int run = 0;
  bool converged = false;
  for (int n = 0; n < kMaxTerms; ++n) {
    const double dn = n;
    term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
    sum += term;
    dsum += (dn + 1.0) * term;
    const double at = std::abs(term);
    maxabs = std::max(maxabs, at);
    if (term == 0.0) {
      converged = true;
      break;
    }
    run = at < kTailRatio * std::abs(sum) ? run + 1 : 0;
    if (run >= kTailRun) {
      converged = true;
      break;
    }
  }
  const cplx deriv = z != 0.0 ? dsum / z : a * b / c;
  const double as = std::abs(sum);
  return {sum, deriv, as > 0.0 ? maxabs / as : INFINITY, converged};
}

bool near_integer(cplx x, double tol = 1e-8) {
  return std::abs(x.imag()) < tol && std::abs(x.real() - std::round(x.real())) < tol;
}

bool terminating(cplx a) { return is_nonpositive_integer(a) && a.real() > -kMaxTerms; }

// prod Gamma(num) / prod Gamma(den); zero if a denominator sits on a pole.
cplx gamma_ratio(std::initializer_list<cplx> num, std::initializer_list<cplx> den) {
  for (cplx d : den)
    if (is_nonpositive_integer(d)) return 0.0;
  cplx acc = 0.0;
  for (cplx n : num) {
    if (is_nonpositive_integer(n)) {
      throw Error(ErrorCode::kDegenerateParameters, "Gamma pole in connection coefficient");
    }
    acc += log_gamma(n);
  }
  for (cplx d : den) acc -= log_gamma(d);
  return std::exp(acc);
}

struct RouteOut {
  cplx value;
  double cond;
  bool ok;
};

RouteOut route_series(cplx a, cplx b, cplx c, cplx z) {
  const SeriesOut s = series2f1(a, b, c, z);
  return {s.value, s.cond, s.converged};
}

RouteOut route_pfaff(cplx a, cplx b, cplx c, cplx z) {
  const cplx w = z / (z - 1.0);
  const SeriesOut s = series2f1(a, c - b, c, w);
  return {std::exp(-a * std::log(1.0 - z)) * s.value, s.cond, s.converged};
}

RouteOut route_inverse(cplx a, cplx b, cplx c, cplx z) {
  if (near_integer(a - b)) return {0.0, INFINITY, false};
  const cplx w = 1.0 / z;
  const cplx lmz = std::log(-z);
  const cplx k1 = gamma_ratio({c, b - a}, {b, c - a}) * std::exp(-a * lmz);
  const cplx k2 = gamma_ratio({c, a - b}, {a, c - b}) * std::exp(-b * lmz);
  SeriesOut s1{0.0, 0.0, 0.0, true}, s2{0.0, 0.0, 0.0, true};
  if (k1 != 0.0) s1 = series2f1(a, a - c + 1.0, a - b + 1.0, w);
  if (k2 != 0.0) s2 = series2f1(b, b - c + 1.0, b - a + 1.0, w);
  const cplx v = k1 * s1.value + k2 * s2.value;
  const double scale =
      std::abs(k1) * s1.cond * std::abs(s1.value) + std::abs(k2) * s2.cond * std::abs(s2.value);
  const double av = std::abs(v);
  return {v, av > 0.0 ? scale / av : INFINITY, s1.converged && s2.converged};
}

RouteOut route_one_minus(cplx a, cplx b, cplx c, cplx z) {
  if (near_integer(c - a - b)) return {0.0, INFINITY, false};
  const cplx w = 1.0 - z;
  const cplx k1 = gamma_ratio({c, c - a - b}, {c - a, c - b});
  const cplx k2 = gamma_ratio({c, a + b - c}, {a, b}) * std::exp((c - a - b) * std::log(w));
  SeriesOut s1{0.0, 0.0, 0.0, true}, s2{0.0, 0.0, 0.0, true};
  if (k1 != 0.0) s1 = series2f1(a, b, a + b - c + 1.0, w);
  if (k2 != 0.0) s2 = series2f1(c - a, c - b, c - a - b + 1.0, w);
  const cplx v = k1 * s1.value + k2 * s2.value;
  const double scale =
      std::abs(k1) * s1.cond * std::abs(s1.value) + std::abs(k2) * s2.cond * std::abs(s2.value);
  const double av = std::abs(v);
  return {v, av > 0.0 ? scale / av : INFINITY, s1.converged && s2.converged};
}

// One Taylor step of z(1-z)F'' + (c - (a+b+1)z)F' - ab F = 0 from z0 to z0 + h.
void taylor_step(cplx a, cplx b, cplx c, cplx z0, cplx h, cplx& f, cplx& df) {
  const cplx p0 = z0 * (1.0 - z0);
  const cplx p1 = 1.0 - 2.0 * z0;
  const double p2 = -1.0;
  const cplx q0 = c - (a + b + 1.0) * z0;
  const cplx q1 = -(a + b + 1.0);
  const cplx ab = a * b;
  // e_n = c_n h^n
  cplx e0 = f, e1 = df * h;
  cplx value = e0 + e1;
  cplx dvalue = e1;  // sum n e_n
  int small = 0;
  for (int n = 0; n < 5000; ++n) {
    const double dn = n;
    const cplx e2 = -((p1 * dn + q0) * (dn + 1.0) * e1 * h +
                      (p2 * dn * (dn - 1.0) + q1 * dn - ab) * e0 * h * h) /
                    (p0 * (dn + 2.0) * (dn + 1.0));
    value += e2;
    dvalue += (dn + 2.0) * e2;
    const double tiny = 1e-17 * (std::abs(value) + std::abs(dvalue) / (dn + 2.0));
    small = std::abs(e2) * (dn + 2.0) <= tiny ? small + 1 : 0;
    if (small >= 3 && n > 4) {
      f = value;
      df = dvalue / h;
      return;
    }
    e0 = e1;
    e1 = e2;
  }
  throw Error(ErrorCode::kContinuationFailure, "Taylor step did not converge");
}

double distance_to_segment(cplx p, cplx s0, cplx s1) {
  const cplx d = s1 - s0;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - s0);
  const double t = std::clamp(((p - s0) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (s0 + t * d));
}

void check_c(cplx c) {
  if (is_nonpositive_integer(c)) {
    throw Error(ErrorCode::kParameterPole, "2F1 lower parameter is a nonpositive integer");
  }
}

}  // namespace

cplx hyp2f1_series(cplx a, cplx b, cplx c, cplx z) {
  check_c(c);
  if (std::abs(z) >= 1.0 && !terminating(a) && !terminating(b)) {
    throw Error(ErrorCode::kDivergent, "2F1 series needs |z| < 1");
  }
  const SeriesOut s = series2f1(a, b, c, z);
  if (!s.converged) throw Error(ErrorCode::kDivergent, "2F1 series did not converge");
  return s.value;
}

cplx hyp2f1_euler(cplx a, cplx b, cplx c, cplx z) {
  return std::exp((c - a - b) * std::log(1.0 - z)) * hyp2f1(c - a, c - b, c, z);
}

cplx hyp2f1_pfaff(cplx a, cplx b, cplx c, cplx z) {
  check_c(c);
  const cplx w = z / (z - 1.0);
  return std::exp(-a * std::log(1.0 - z)) * hyp2f1(a, c - b, c, w);
}

cplx hyp2f1_inverse(cplx a, cplx b, cplx c, cplx z) {
  check_c(c);
  if (near_integer(a - b)) {
    throw Error(ErrorCode::kDegenerateParameters, "a - b is an integer");
  }
  if (std::abs(z) <= 1.0) throw Error(ErrorCode::kDivergent, "inverse route needs |z| > 1");
  const cplx w = 1.0 / z;
  const cplx lmz = std::log(-z);
  const cplx k1 = gamma_ratio({c, b - a}, {b, c - a}) * std::exp(-a * lmz);
  const cplx k2 = gamma_ratio({c, a - b}, {a, c - b}) * std::exp(-b * lmz);
  cplx v = 0.0;
  if (k1 != 0.0) v += k1 * hyp2f1(a, a - c + 1.0, a - b + 1.0, w);
  if (k2 != 0.0) v += k2 * hyp2f1(b, b - c + 1.0, b - a + 1.0, w);
  return v;
}

cplx hyp2f1_one_minus(cplx a, cplx b, cplx c, cplx z) {
  check_c(c);
  if (near_integer(c - a - b)) {
    throw Error(ErrorCode::kDegenerateParameters, "c - a - b is an integer");
  }
  const cplx w = 1.0 - z;
  const cplx k1 = gamma_ratio({c, c - a - b}, {c - a, c - b});
  const cplx k2 = gamma_ratio({c, a + b - c}, {a, b}) * std::exp((c - a - b) * std::log(w));
  cplx v = 0.0;
  if (k1 != 0.0) v += k1 * hyp2f1(a, b, a + b - c + 1.0, w);
  if (k2 != 0.0) v += k2 * hyp2f1(c - a, c - b, c - a - b + 1.0, w);
  return v;
}

cplx hyp2f1_continued(cplx a, cplx b, cplx c, cplx z) {
  check_c(c);
  if (z == 0.0) return 1.0;
  const double az = std::abs(z);
  const cplx dir = z / az;
  double r = std::min(0.45, az);
  SeriesOut start{};
  for (;;) {
    start = series2f1(a, b, c, r * dir);
    if (start.converged && start.cond < 1e2) break;
    r *= 0.5;
    if (r < 1e-10) throw Error(ErrorCode::kContinuationFailure, "no well-conditioned start");
  }
  if (az <= r) return start.value;

  cplx cur = r * dir;
  cplx f = start.value, df = start.deriv;
  std::vector<cplx> targets;
  if (distance_to_segment(1.0, cur, z) < 0.5) {
    targets.push_back(cplx(1.0, z.imag() >= 0.0 ? 0.75 : -0.75));
  }
  targets.push_back(z);
  const double sab = std::sqrt(std::abs(a * b));
  const cplx abc = a + b + 1.0;
  for (const cplx target : targets) {
    int guard = 0;
    while (cur != target) {
      if (++guard > 200000) throw Error(ErrorCode::kContinuationFailure, "too many steps");
      const cplx rem = target - cur;
      const cplx p = cur * (1.0 - cur);
      const double ap = std::abs(p);
      const double aq = std::abs(c - abc * cur);
      const double rad = std::min(std::abs(cur), std::abs(1.0 - cur));
      const double hosc = 1.5 / (sab / std::sqrt(ap) + aq / ap + 1e-300);
      const double hmax = std::min(0.5 * rad, hosc);
      const double arem = std::abs(rem);
      const cplx h = arem <= hmax ? rem : rem * (hmax / arem);
      taylor_step(a, b, c, cur, h, f, df);
      cur = arem <= hmax ? target : cur + h;
    }
  }
  if (!std::isfinite(f.real()) || !std::isfinite(f.imag())) {
    throw Error(ErrorCode::kContinuationFailure, "non-finite continuation result");
  }
  return f;
}

Hyp2f1Result hyp2f1_detailed(cplx a, cplx b, cplx c, cplx z) {
  check_c(c);
  const bool near_cut = z.real() > 1.0 && std::abs(z.imag()) < 1e-3;
  if (z == 0.0) return {1.0, Hyp2f1Route::kTrivial, false};
  if (terminating(a) || terminating(b)) {
    return {series2f1(a, b, c, z).value, Hyp2f1Route::kPolynomial, near_cut};
  }
  if (z.imag() == 0.0 && z.real() > 1.0) {
    // On the cut: value from the upper side.
    return {hyp2f1_continued(a, b, c, z), Hyp2f1Route::kContinuation, true};
  }
  const double az = std::abs(z);
  if (az <= 0.5) {
    const RouteOut r = route_series(a, b, c, z);
    if (r.ok && r.cond <= kMaxCondition) return {r.value, Hyp2f1Route::kSeries, near_cut};
  }
  struct Candidate {
    double radius;
    Hyp2f1Route route;
  };
  Candidate cands[4] = {{az, Hyp2f1Route::kSeries},
                        {std::abs(z / (z - 1.0)), Hyp2f1Route::kPfaff},
                        {1.0 / az, Hyp2f1Route::kInverse},
                        {std::abs(1.0 - z), Hyp2f1Route::kOneMinus}};
  std::sort(std::begin(cands), std::end(cands),
            [](const Candidate& x, const Candidate& y) { return x.radius < y.radius; });
  for (const Candidate& cand : cands) {
    if (cand.radius > kRouteRadius) break;
    RouteOut r{};
    switch (cand.route) {
      case Hyp2f1Route::kSeries: r = route_series(a, b, c, z); break;
      case Hyp2f1Route::kPfaff: r = route_pfaff(a, b, c, z); break;
      case Hyp2f1Route::kInverse: r = route_inverse(a, b, c, z); break;
      case Hyp2f1Route::kOneMinus: r = route_one_minus(a, b, c, z); break;
      default: continue;
    }
    if (r.ok && r.cond <= kMaxCondition && std::isfinite(r.value.real()) &&
        std::isfinite(r.value.imag())) {
      return {r.value, cand.route, near_cut};
    }
  }
  return {hyp2f1_continued(a, b, c, z), Hyp2f1Route::kContinuation, near_cut};
}

cplx hyp2f1(cplx a, cplx b, cplx c, cplx z) { return hyp2f1_detailed(a, b, c, z).value; }

cplx hyp_pfq(const std::vector<cplx>& alphas, const std::vector<cplx>& betas, cplx z) {
  for (cplx b : betas) {
    if (is_nonpositive_integer(b)) {
      throw Error(ErrorCode::kParameterPole, "pFq lower parameter is a nonpositive integer");
    }
  }
  if (z == 0.0) return 1.0;
  const bool terminates = std::any_of(alphas.begin(), alphas.end(), terminating);
  const std::size_t p = alphas.size(), q = betas.size();
  if (!terminates) {
    if (p > q + 1) throw Error(ErrorCode::kDivergent, "pFq with p > q + 1 diverges for z != 0");
    if (p == q + 1 && std::abs(z) >= 1.0) {
      throw Error(ErrorCode::kDivergent, "pFq with p = q + 1 needs |z| < 1");
    }
  }
  cplx term = 1.0, sum = 1.0;
  int run = 0;
  for (int n = 0; n < kMaxTerms; ++n) {
    const double dn = n;
    cplx ratio = z / (dn + 1.0);
    for (cplx al : alphas) ratio *= al + dn;
    for (cplx be : betas) ratio /= be + dn;
    term *= ratio;
    sum += term;
    if (term == 0.0) return sum;
    run = std::abs(term) < kTailRatio * std::abs(sum) ? run + 1 : 0;
    if (run >= kTailRun) return sum;
  }
  throw Error(ErrorCode::kDivergent, "pFq series did not converge within the term cap");
}

std::array<cplx, 3> connect_3f2_large_argument(const std::array<cplx, 3>& a,
                                               const std::array<cplx, 2>& b, cplx z) {
  if (std::abs(z) <= 1.0) {
    throw Error(ErrorCode::kDivergent, "large-argument 3F2 expansion needs |z| > 1");
  }
  if (z.imag() == 0.0 && z.real() >= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "3F2 expansion needs |arg(-z)| < pi");
  }
  for (int j = 0; j < 3; ++j) {
    for (int k = j + 1; k < 3; ++k) {
      if (near_integer(a[k] - a[j])) {
        throw Error(ErrorCode::kDegenerateParameters,
                    "upper parameters " + std::to_string(j) + " and " + std::to_string(k) +
                        " differ by an integer");
      }
    }
  }
  for (cplx bb : b) {
    if (is_nonpositive_integer(bb)) {
      throw Error(ErrorCode::kParameterPole, "3F2 lower parameter is a nonpositive integer");
    }
  }
  const cplx lmz = std::log(-z);
  std::array<cplx, 3> out{};
  for (int j = 0; j < 3; ++j) {
    const cplx k1 = a[(j + 1) % 3], k2 = a[(j + 2) % 3];
    const cplx aj = a[j];
    const cplx pref =
        gamma_ratio({k1 - aj, k2 - aj, b[0], b[1]}, {k1, k2, b[0] - aj, b[1] - aj});
    if (pref == 0.0) continue;
    const cplx inner = hyp_pfq({aj, 1.0 - b[0] + aj, 1.0 - b[1] + aj},
                               {1.0 - k1 + aj, 1.0 - k2 + aj}, 1.0 / z);
    out[j] = pref * std::exp(-aj * lmz) * inner;
  }
  return out;
}

}  // namespace relcount
