#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

namespace relcount {

using cplx = std::complex<double>;

// s = 1/2 + i t, lambda = s (1 - s) = 1/4 + t^2.
class SpectralParameter {
 public:
  static SpectralParameter from_s(cplx s);
  static SpectralParameter from_t(cplx t);
  // Picks s with Re s >= 1/2 (and Im s >= 0 on the critical line).
  static SpectralParameter from_lambda(double lambda);

  cplx s() const { return s_; }
  cplx t() const { return t_; }
  cplx lambda() const { return lambda_; }
  // s real in (1/2, 1].
  bool is_small() const;

 private:
  explicit SpectralParameter(cplx s);
  cplx s_, t_, lambda_;
};

bool is_nonpositive_integer(cplx z);

// Principal branch (cut along the negative real axis), analytic continuation of
// log Gamma from the positive reals. Throws PoleAtNonpositiveInteger.
cplx log_gamma(cplx z);
cplx gamma(cplx z);
// 1/Gamma(z); zero at the poles.
cplx rgamma(cplx z);

enum class Hyp2f1Route {
  kTrivial,
  kPolynomial,
  kSeries,
  kPfaff,
  kInverse,
  kOneMinus,
  kContinuation,
};

struct Hyp2f1Result {
  cplx value;
  Hyp2f1Route route;
  bool near_cut;  // |Im z| < 1e-3 with Re z > 1: reduced accuracy
};

// Gauss 2F1 continued to the plane cut along [1, inf).
cplx hyp2f1(cplx a, cplx b, cplx c, cplx z);
Hyp2f1Result hyp2f1_detailed(cplx a, cplx b, cplx c, cplx z);

// Individual evaluation routes.
cplx hyp2f1_series(cplx a, cplx b, cplx c, cplx z);
// (1-z)^{c-a-b} F(c-a, c-b; c; z)
cplx hyp2f1_euler(cplx a, cplx b, cplx c, cplx z);
// (1-z)^{-a} F(a, c-b; c; z/(z-1))
cplx hyp2f1_pfaff(cplx a, cplx b, cplx c, cplx z);
// Connection at infinity, |arg(-z)| < pi, a - b not an integer.
cplx hyp2f1_inverse(cplx a, cplx b, cplx c, cplx z);
// Connection at 1, c - a - b not an integer.
cplx hyp2f1_one_minus(cplx a, cplx b, cplx c, cplx z);
// Taylor integration of the hypergeometric equation from a point near 0.
cplx hyp2f1_continued(cplx a, cplx b, cplx c, cplx z);

// pFq power series. |z| < 1 required when p = q + 1 unless the series terminates.
cplx hyp_pfq(const std::vector<cplx>& alphas, const std::vector<cplx>& betas, cplx z);

// The three summands of the large-argument expansion of 3F2(a; b; z)
// (each with its Gamma prefix and (-z)^{-a_j}); their sum is 3F2(a; b; z).
// Requires |z| > 1, z not on [0, inf), and a_j pairwise non-congruent mod 1.
std::array<cplx, 3> connect_3f2_large_argument(const std::array<cplx, 3>& a,
                                               const std::array<cplx, 2>& b, cplx z);

// (P_{s-1}(ix), P_{s-1}(-ix)), x >= 0.
std::pair<cplx, cplx> legendre_p(cplx s, double x);

// P_{s-1}(ix) + P_{s-1}(-ix) = 2 D(s) F((1-s)/2, s/2; 1/2; -x^2),
// D(s) = sqrt(pi) / (Gamma((2-s)/2) Gamma((s+1)/2)).
cplx legendre_sum(cplx s, double x);
cplx legendre_sum_prefactor(cplx s);

// Normalised kernel F((1-s)/2, s/2; 1/2; -x^2) = xi_lambda(arctan x).
cplx xi_kernel(cplx s, double x);

// Solution of xi'' + lambda / cos^2 v xi = 0, xi(0) = 1, xi'(0) = 0.
double xi_lambda(double lambda, double v);

}  // namespace relcount
