#include "relcount/hyperbolic.hpp"

#include <cmath>
#include <string>

#include "relcount/errors.hpp"

namespace relcount {

Point::Point(double x, double y) : x_(x), y_(y) {
  if (!std::isfinite(x) || !std::isfinite(y) || !(y > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "point must have finite coordinates and y > 0, got y = " + std::to_string(y));
  }
}

MoebiusElement::MoebiusElement(double a, double b, double c, double d) {
  const double det = a * d - b * c;
  if (!std::isfinite(det) || !(det > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "matrix determinant must be positive");
  }
  if (std::abs(det - 1.0) > 1e-12) {
    const double r = 1.0 / std::sqrt(det);
    a *= r;
    b *= r;
    c *= r;
    d *= r;
  }
  *this = MoebiusElement(Exact{}, a, b, c, d);
}

MoebiusElement::MoebiusElement(Exact, double a, double b, double c, double d) {
  const double lead = a != 0.0 ? a : (b != 0.0 ? b : c);
  if (lead < 0.0) {
    a = -a;
    b = -b;
    c = -c;
    d = -d;
  }
  a_ = a;
  b_ = b;
  c_ = c;
  d_ = d;
}

MoebiusElement MoebiusElement::rotation(double phi) {
  const double cs = std::cos(phi), sn = std::sin(phi);
  return {cs, sn, -sn, cs};
}

MoebiusElement MoebiusElement::operator*(const MoebiusElement& o) const {
  return {Exact{}, a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_, c_ * o.a_ + d_ * o.c_,
          c_ * o.b_ + d_ * o.d_};
}

bool MoebiusElement::approx_equal(const MoebiusElement& o, double tol) const {
  auto close = [tol](double p, double q) {
    return std::abs(p - q) <= tol * (1.0 + std::max(std::abs(p), std::abs(q)));
  };
  return close(a_, o.a_) && close(b_, o.b_) && close(c_, o.c_) && close(d_, o.d_);
}

double point_pair_invariant(const Point& z, const Point& w) {
  const double dx = z.x() - w.x();
  const double dy = z.y() - w.y();
  return (dx * dx + dy * dy) / (4.0 * z.y() * w.y());
}

double hyperbolic_distance(const Point& z, const Point& w) {
  const double u = point_pair_invariant(z, w);
  // arccosh(1 + 2u) = 2 asinh(sqrt(u))
  return 2.0 * std::asinh(std::sqrt(u));
}

Point apply(const MoebiusElement& g, const Point& z) {
  const std::complex<double> zz = z.z();
  const std::complex<double> den = g.c() * zz + g.d();
  const std::complex<double> w = (g.a() * zz + g.b()) / den;
  return {w.real(), z.y() / std::norm(den)};
}

AngleCoordinates angle_coords(const Point& z) {
  return {std::log(std::hypot(z.x(), z.y())), -std::atan(z.x() / z.y())};
}

double inv_cos_sq_v(const MoebiusElement& g, double y) {
  const double a = g.a(), b = g.b(), c = g.c(), d = g.d();
  return (a * a * y * y + b * b) * (c * c * y * y + d * d) / (y * y);
}

double b_invariant(const MoebiusElement& g) { return std::abs(g.a() * g.d() + g.b() * g.c()); }

AxisMinimum min_u_on_axes(const MoebiusElement& g) {
  const double a = g.a(), b = g.b(), c = g.c(), d = g.d();
  if (a * b * c * d == 0.0) {
    throw Error(ErrorCode::kDegenerateEntries, "min_u_on_axes requires abcd != 0");
  }
  AxisMinimum r{};
  r.x_min = std::sqrt(std::abs(b * d / (a * c)));
  r.y_min = std::sqrt(std::abs(a * b / (c * d)));
  r.min_u = a * b * c * d > 0.0 ? (b_invariant(g) - 1.0) / 2.0 : 0.0;
  return r;
}

}  // namespace relcount
