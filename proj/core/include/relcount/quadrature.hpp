#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace relcount::quad {

using RealFn = std::function<double(double)>;
using ComplexFn = std::function<std::complex<double>(double)>;

struct Options {
  double rel_tol = 1e-12;
  // QuadratureFailure when the error estimate exceeds fail_tol * max(|I|, abs_floor).
  double fail_tol = 1e-6;
  double abs_floor = 1e-300;
};

// Double-exponential rule; tolerant of integrable endpoint singularities.
double tanh_sinh(const RealFn& f, double a, double b, const Options& opt = {},
                 double* err = nullptr);
std::complex<double> tanh_sinh_complex(const ComplexFn& f, double a, double b,
                                       const Options& opt = {}, double* err = nullptr);

// Adaptive 31-point Gauss-Kronrod; for smooth integrands.
double gauss_kronrod(const RealFn& f, double a, double b, const Options& opt = {},
                     double* err = nullptr);
std::complex<double> gauss_kronrod_complex(const ComplexFn& f, double a, double b,
                                           const Options& opt = {}, double* err = nullptr);

// [a, inf)
double exp_sinh(const RealFn& f, double a, const Options& opt = {}, double* err = nullptr);

// Sum of tanh-sinh integrals over consecutive panels of the sorted breakpoint list.
double panels(const RealFn& f, const std::vector<double>& points, const Options& opt = {});
std::complex<double> panels_complex(const ComplexFn& f, const std::vector<double>& points,
                                    const Options& opt = {});

}  // namespace relcount::quad
