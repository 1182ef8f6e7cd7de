#include <cmath>
#include <numbers>

#include "relcount/errors.hpp"
#include "relcount/special_functions.hpp"

namespace relcount {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogPi = 1.1447298858494002;      // log(pi)
constexpr double kHalfLog2Pi = 0.91893853320467274;  // log(2 pi) / 2

// Lanczos coefficients, g = 671/128, 14 terms.
constexpr double kLanczos[14] = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};

// B_{2k} / (2k (2k-1))
constexpr double kStirling[10] = {1.0 / 12.0,         -1.0 / 360.0,       1.0 / 1260.0,
                                  -1.0 / 1680.0,      1.0 / 1188.0,       -691.0 / 360360.0,
                                  1.0 / 156.0,        -3617.0 / 122400.0, 43867.0 / 244188.0,
                                  -174611.0 / 125400.0};

cplx log_gamma_lanczos(cplx z) {
  const cplx tmp0 = z + 5.24218750000000000;
  const cplx tmp = (z + 0.5) * std::log(tmp0) - tmp0;
  cplx ser = 0.999999999999997092;
  cplx y = z;
  for (double c : kLanczos) {
    y += 1.0;
    ser += c / y;
  }
  return tmp + std::log(2.5066282746310005 * ser) - std::log(z);
}

cplx log_gamma_stirling(cplx z) {
  const cplx zinv = 1.0 / z;
  const cplx zinv2 = zinv * zinv;
  cplx series = 0.0;
  cplx p = zinv;
  for (double c : kStirling) {
    series += c * p;
    p *= zinv2;
  }
  return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + series;
}

// Principal log of sin(pi z), stable for large |Im z|.
cplx log_sinpi(cplx z) {
  const double y = z.imag();
  if (std::abs(y) < 20.0) return std::log(std::sin(kPi * z));
  // sin(pi z) = (e^{i pi z} - e^{-i pi z}) / 2i; keep the dominant exponential.
  const double sgn = y > 0 ? 1.0 : -1.0;
  // y > 0: dominant e^{-i pi z}; sin = -e^{-i pi z} (1 - e^{2 i pi z}) / 2i
  const cplx i(0.0, 1.0);
  const cplx lead = -sgn * i * kPi * z;
  const cplx small = std::exp(2.0 * sgn * i * kPi * z);
  const cplx rest = (sgn > 0 ? -1.0 : 1.0) * (1.0 - small) / (2.0 * i);
  cplx lg = lead + std::log(rest);
  const double im = std::remainder(lg.imag(), 2.0 * kPi);
  return {lg.real(), im};
}

}  // namespace

bool is_nonpositive_integer(cplx z) {
  if (z.imag() != 0.0) return false;
  const double x = z.real();
  return x <= 0.0 && x == std::round(x);
}

cplx log_gamma(cplx z) {
  if (is_nonpositive_integer(z)) {
    throw Error(ErrorCode::kPoleAtNonpositiveInteger,
                "log_gamma at " + std::to_string(z.real()));
  }
  if (std::abs(z.imag()) >= 15.0 || z.real() >= 15.0) return log_gamma_stirling(z);
  if (z.real() >= 0.5) return log_gamma_lanczos(z);
  // Reflection with the branch correction that keeps the result analytic in the
  // upper and lower half-planes.
  const double corr = std::copysign(2.0 * kPi, z.imag()) * std::floor(0.5 * z.real() + 0.25);
  const cplx refl = cplx(kLogPi, corr) - log_sinpi(z) -
                    log_gamma_lanczos(1.0 - z);
  return refl;
}

cplx gamma(cplx z) {
  if (z.imag() == 0.0 && z.real() > 0.0 && z.real() < 170.0) {
    return std::tgamma(z.real());
  }
  return std::exp(log_gamma(z));
}

cplx rgamma(cplx z) {
  if (is_nonpositive_integer(z)) return 0.0;
  return std::exp(-log_gamma(z));
}

SpectralParameter::SpectralParameter(cplx s)
    : s_(s), t_(cplx(0.0, -1.0) * (s - 0.5)), lambda_(s * (1.0 - s)) {}

SpectralParameter SpectralParameter::from_s(cplx s) { return SpectralParameter(s); }

SpectralParameter SpectralParameter::from_t(cplx t) {
  return SpectralParameter(0.5 + cplx(0.0, 1.0) * t);
}

SpectralParameter SpectralParameter::from_lambda(double lambda) {
  const double disc = 0.25 - lambda;
  if (disc >= 0.0) return SpectralParameter(0.5 + std::sqrt(disc));
  return SpectralParameter(cplx(0.5, std::sqrt(-disc)));
}

bool SpectralParameter::is_small() const {
  return s_.imag() == 0.0 && s_.real() > 0.5 && s_.real() <= 1.0;
}

}  // namespace relcount
