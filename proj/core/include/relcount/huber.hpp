#pragma once

#include <complex>

#include "relcount/special_functions.hpp"
#include "relcount/test_functions.hpp"

namespace relcount {

struct GammaFactors {
  cplx gamma1 = 0.0, gamma2 = 0.0, gamma3 = 0.0;
  // true when the factor sits on a Gamma pole (value left at 0).
  bool pole1 = false, pole2 = false, pole3 = false;
};

GammaFactors gamma_factors(const SpectralParameter& s);

// d_t(f) = int_0^inf f(x^2+1) F((1-s)/2, s/2; 1/2; -x^2) dx by panel quadrature.
// The support must be finite unless f decays; infinite support uses an
// exp-sinh tail and raises SlowDecay when it fails.
cplx huber_numeric(const TestFunction& f, const SpectralParameter& s);
cplx huber_numeric(const SmoothedIndicator& ind, const SpectralParameter& s);
// Same transform in the v variable, with xi evaluated through the Legendre pair.
cplx huber_numeric_v(const TestFunction& f, const SpectralParameter& s);

enum class DegeneratePolicy { kThrow, kPerturb };

// J_s(y) = int_0^sqrt(y) x sqrt(y - x^2) (P_{s-1}(ix) + P_{s-1}(-ix)) dx.
cplx j_s_quadrature(const SpectralParameter& s, double y);
// Through the 3F2 representation and its large-argument expansion.
cplx j_s_transformed(const SpectralParameter& s, double y,
                     DegeneratePolicy policy = DegeneratePolicy::kThrow);
// Transformed route when admissible, quadrature otherwise.
cplx j_s(const SpectralParameter& s, double y);

// R_s(y) = J_s(y) / (2 D(s)), the normalised version used for d_t.
cplx r_s_transformed(const SpectralParameter& s, double y,
                     DegeneratePolicy policy = DegeneratePolicy::kThrow);

// d_t(f+/-) from J_s differences; falls back to quadrature within 1e-4 of s = 1/2, 1.
cplx huber_closed(const SmoothedIndicator& ind, const SpectralParameter& s);

// sum_j gamma_j / pi * w_j (O^{p_j} - I^{p_j}) / H, the inner hypergeometric
// factors replaced by 1.
cplx huber_leading_terms(const SmoothedIndicator& ind, const SpectralParameter& s);
// gamma1/pi X^s + gamma2/pi (3-s)/2 X^{1-s}.
cplx huber_small_eigenvalue_form(const SmoothedIndicator& ind, const SpectralParameter& s);

struct HuberDecomposition {
  cplx leading;    // the X^s block
  cplx reflected;  // the X^{1-s} block
  cplx remainder;  // the gamma3 block
  cplx a_coef;     // leading / X^s
  cplx b_coef;     // reflected / X^{1-s}
};

HuberDecomposition huber_decompose(const SmoothedIndicator& ind, const SpectralParameter& s);

// (2/pi) R_s'(xi) = (1/pi) int_0^sqrt(xi) x / sqrt(xi - x^2) F(-x^2) dx.
cplx mean_value_kernel(const SpectralParameter& s, double xi);
// A point xi in [I^2, O^2] with mean_value_kernel(s, xi) = d_t(f); s must give
// a real kernel. Throws InvalidArgument if no sign change is found.
double mean_value_point(const SmoothedIndicator& ind, const SpectralParameter& s);

}  // namespace relcount
