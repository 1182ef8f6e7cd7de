#include <cmath>
#include <numbers>

#include "relcount/errors.hpp"
#include "relcount/special_functions.hpp"

namespace relcount {

std::pair<cplx, cplx> legendre_p(cplx s, double x) {
  if (!(x >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "legendre_p needs x >= 0");
  const cplx i(0.0, 1.0);
  const cplx p_plus = hyp2f1(1.0 - s, s, 1.0, (1.0 - i * x) / 2.0);
  const cplx p_minus = hyp2f1(1.0 - s, s, 1.0, (1.0 + i * x) / 2.0);
  if (!std::isfinite(std::abs(p_plus)) || !std::isfinite(std::abs(p_minus))) {
    throw Error(ErrorCode::kContinuationFailure, "Legendre evaluation failed");
  }
  return {p_plus, p_minus};
}

cplx legendre_sum_prefactor(cplx s) {
  return std::sqrt(std::numbers::pi) * rgamma((2.0 - s) / 2.0) * rgamma((s + 1.0) / 2.0);
}

cplx xi_kernel(cplx s, double x) { return hyp2f1((1.0 - s) / 2.0, s / 2.0, 0.5, -x * x); }

cplx legendre_sum(cplx s, double x) { return 2.0 * legendre_sum_prefactor(s) * xi_kernel(s, x); }

double xi_lambda(double lambda, double v) {
  if (!(std::abs(v) < std::numbers::pi / 2)) {
    throw Error(ErrorCode::kInvalidArgument, "xi_lambda needs |v| < pi/2");
  }
  const SpectralParameter sp = SpectralParameter::from_lambda(lambda);
  return xi_kernel(sp.s(), std::tan(v)).real();
}

}  // namespace relcount
