#include "relcount/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <string>

#include "relcount/errors.hpp"

namespace relcount::quad {

namespace {

using boost::math::quadrature::exp_sinh;
using boost::math::quadrature::gauss_kronrod;
using boost::math::quadrature::tanh_sinh;

tanh_sinh<double>& ts_rule() {
  thread_local tanh_sinh<double> rule(15);
  return rule;
}

exp_sinh<double>& es_rule() {
  thread_local exp_sinh<double> rule(12);
  return rule;
}

template <class T>
T checked(T value, double error, const Options& opt, const char* what) {
  const double mag = std::abs(value);
  if (!std::isfinite(mag) || !std::isfinite(error)) {
    throw Error(ErrorCode::kQuadratureFailure, std::string(what) + ": non-finite result");
  }
  if (error > opt.fail_tol * std::max(mag, opt.abs_floor)) {
    throw Error(ErrorCode::kQuadratureFailure,
                std::string(what) + ": error estimate " + std::to_string(error) +
                    " for value " + std::to_string(mag));
  }
  return value;
}

template <class T, class F>
T ts_impl(const F& f, double a, double b, const Options& opt, double* err) {
  if (a == b) {
    if (err) *err = 0.0;
    return T(0.0);
  }
  double error = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  const T v = ts_rule().integrate(f, a, b, opt.rel_tol, &error, &l1, &levels);
  if (err) *err = error;
  return checked(v, error, opt, "tanh-sinh");
}

template <class T, class F>
T gk_impl(const F& f, double a, double b, const Options& opt, double* err) {
  if (a == b) {
    if (err) *err = 0.0;
    return T(0.0);
  }
  double error = 0.0;
  const T v = gauss_kronrod<double, 31>::integrate(f, a, b, 20, opt.rel_tol, &error);
  if (err) *err = error;
  return checked(v, error, opt, "gauss-kronrod");
}

}  // namespace

double tanh_sinh(const RealFn& f, double a, double b, const Options& opt, double* err) {
  return ts_impl<double>(f, a, b, opt, err);
}

std::complex<double> tanh_sinh_complex(const ComplexFn& f, double a, double b,
                                       const Options& opt, double* err) {
  return ts_impl<std::complex<double>>(f, a, b, opt, err);
}

double gauss_kronrod(const RealFn& f, double a, double b, const Options& opt, double* err) {
  return gk_impl<double>(f, a, b, opt, err);
}

std::complex<double> gauss_kronrod_complex(const ComplexFn& f, double a, double b,
                                           const Options& opt, double* err) {
  return gk_impl<std::complex<double>>(f, a, b, opt, err);
}

double exp_sinh(const RealFn& f, double a, const Options& opt, double* err) {
  double error = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  const double v =
      es_rule().integrate(f, a, std::numeric_limits<double>::infinity(), opt.rel_tol, &error,
                          &l1, &levels);
  if (err) *err = error;
  return checked(v, error, opt, "exp-sinh");
}

template <class T, class F>
T panels_impl(const F& f, const std::vector<double>& points, const Options& opt) {
  T sum = T(0.0);
  double err_sum = 0.0;
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    if (!(points[k + 1] > points[k])) continue;
    double error = 0.0, l1 = 0.0;
    std::size_t levels = 0;
    sum += ts_rule().integrate(f, points[k], points[k + 1], opt.rel_tol, &error, &l1, &levels);
    err_sum += error;
  }
  return checked(sum, err_sum, opt, "tanh-sinh panels");
}

double panels(const RealFn& f, const std::vector<double>& points, const Options& opt) {
  return panels_impl<double>(f, points, opt);
}

std::complex<double> panels_complex(const ComplexFn& f, const std::vector<double>& points,
                                    const Options& opt) {
  return panels_impl<std::complex<double>>(f, points, opt);
}

}  // namespace relcount::quad
