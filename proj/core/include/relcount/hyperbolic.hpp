#pragma once

#include <complex>

namespace relcount {

// Point of the upper half-plane, y > 0.
class Point {
 public:
  Point(double x, double y);
  static Point i() { return Point(0.0, 1.0); }

  double x() const { return x_; }
  double y() const { return y_; }
  std::complex<double> z() const { return {x_, y_}; }

 private:
  double x_;
  double y_;
};

// Element of PSL(2,R). The constructor renormalises the determinant to 1 and
// picks the sign so that the first nonzero of (a, b, c) is positive.
class MoebiusElement {
 public:
  MoebiusElement(double a, double b, double c, double d);
  static MoebiusElement identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static MoebiusElement diagonal(double m) { return {m, 0.0, 0.0, 1.0 / m}; }
  // Elliptic rotation about i by angle 2*phi.
  static MoebiusElement rotation(double phi);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }

  MoebiusElement operator*(const MoebiusElement& o) const;
  MoebiusElement inverse() const { return {Exact{}, d_, -b_, -c_, a_}; }

  // Entrywise comparison with relative tolerance tol * (1 + |entry|).
  bool approx_equal(const MoebiusElement& o, double tol = 1e-9) const;

  double trace() const { return a_ + d_; }
  bool is_exceptional() const { return a_ * b_ * c_ * d_ < 0.0; }

 private:
  // Entries already unimodular up to rounding: sign normalisation only.
  struct Exact {};
  MoebiusElement(Exact, double a, double b, double c, double d);

  double a_, b_, c_, d_;
};

struct AngleCoordinates {
  double u;
  double v;
};

struct AxisMinimum {
  double min_u;
  double x_min;
  double y_min;
};

double point_pair_invariant(const Point& z, const Point& w);
double hyperbolic_distance(const Point& z, const Point& w);

Point apply(const MoebiusElement& g, const Point& z);

AngleCoordinates angle_coords(const Point& z);

// (a^2 y^2 + b^2)(c^2 y^2 + d^2) / y^2 = 1 / cos^2 v(g iy).
double inv_cos_sq_v(const MoebiusElement& g, double y);

double b_invariant(const MoebiusElement& g);

// inf over x, y > 0 of u(g ix, iy) with its minimiser.
// Throws DegenerateEntries when abcd = 0.
AxisMinimum min_u_on_axes(const MoebiusElement& g);

}  // namespace relcount
