#include <gtest/gtest.h>

#include <cfloat>
#include <cmath>

#include "generators.hpp"
#include "oracles.hpp"
#include "relcount/errors.hpp"
#include "relcount/hyperbolic.hpp"

using namespace relcount;
using relcount::testing::Gen;

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kM = 4.611581789308715;
}  // namespace

TEST(Point, RejectsNonPositiveHeight) {
  EXPECT_THROW(Point(0.0, 0.0), Error);
  EXPECT_THROW(Point(1.0, -2.0), Error);
  EXPECT_THROW(Point(NAN, 1.0), Error);
}

TEST(MoebiusElement, SignNormalisation) {
  const MoebiusElement g(-2.0, -1.0, -1.0, -1.0);
  EXPECT_EQ(g.a(), 2.0);
  EXPECT_EQ(g.d(), 1.0);
  const MoebiusElement h(0.0, -1.0, 1.0, 0.0);
  EXPECT_EQ(h.b(), 1.0);
  EXPECT_EQ(h.c(), -1.0);
}

TEST(MoebiusElement, DeterminantRenormalised) {
  const MoebiusElement g(2.0, 0.0, 0.0, 2.0);
  EXPECT_NEAR(g.a() * g.d() - g.b() * g.c(), 1.0, 1e-15);
  EXPECT_THROW(MoebiusElement(1.0, 2.0, 2.0, 1.0), Error);
}

TEST(MoebiusElement, ProductDeterminantStaysUnimodular) {
  Gen gen(11);
  MoebiusElement g = MoebiusElement::identity();
  // Entries grow geometrically, so ad - bc is only resolvable to eps (|ad| + |bc|).
  for (int k = 0; k < 12; ++k) {
    g = g * gen.unimodular();
    const double scale = std::abs(g.a() * g.d()) + std::abs(g.b() * g.c());
    EXPECT_NEAR(g.a() * g.d() - g.b() * g.c(), 1.0, 1e-12 + 8 * DBL_EPSILON * scale);
  }
}

TEST(PointPairInvariant, Examples) {
  EXPECT_EQ(point_pair_invariant(Point::i(), Point::i()), 0.0);
  EXPECT_DOUBLE_EQ(point_pair_invariant(Point::i(), Point(0.0, 4.0)), 9.0 / 16.0);
}

TEST(PointPairInvariant, CoshDistanceAgreesWithGeodesicLength) {
  // Along the imaginary axis the hyperbolic length of [i, 2i] is int_1^2 dy/y.
  const double length = std::log(2.0);
  const double u = point_pair_invariant(Point::i(), Point(0.0, 2.0));
  EXPECT_NEAR(1.0 + 2.0 * u, 1.25, 1e-15);
  EXPECT_NEAR(std::cosh(length), 1.0 + 2.0 * u, 1e-15);
  EXPECT_NEAR(hyperbolic_distance(Point::i(), Point(0.0, 2.0)), length, 1e-15);
}

TEST(PointPairInvariant, SymmetricExactly) {
  Gen gen(1);
  for (int k = 0; k < 200; ++k) {
    const Point z = gen.point(), w = gen.point();
    EXPECT_EQ(point_pair_invariant(z, w), point_pair_invariant(w, z));
  }
}

TEST(PointPairInvariant, MoebiusInvariant) {
  Gen gen(2);
  for (int k = 0; k < 200; ++k) {
    const Point z = gen.point(), w = gen.point();
    const MoebiusElement g = gen.unimodular();
    const double u = point_pair_invariant(z, w);
    EXPECT_NEAR(point_pair_invariant(apply(g, z), apply(g, w)), u, 1e-10 * (1.0 + u));
  }
}

TEST(Apply, Examples) {
  const Point p = apply(MoebiusElement::identity(), Point::i());
  EXPECT_EQ(p.x(), 0.0);
  EXPECT_EQ(p.y(), 1.0);
  const Point q = apply(MoebiusElement::diagonal(kM), Point(0.0, 0.7));
  EXPECT_NEAR(q.x(), 0.0, 1e-15);
  EXPECT_NEAR(q.y(), kM * kM * 0.7, 1e-13);
}

TEST(AngleCoordinates, Examples) {
  const auto c0 = angle_coords(Point::i());
  EXPECT_EQ(c0.u, 0.0);
  EXPECT_EQ(c0.v, 0.0);
  const auto c1 = angle_coords(Point(1.0, 1.0));
  EXPECT_NEAR(c1.u, std::log(std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(c1.v, -kPi / 4.0, 1e-15);
  EXPECT_NEAR(std::cos(c1.v), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(std::sin(c1.v), -1.0 / std::sqrt(2.0), 1e-12);
}

TEST(AngleCoordinates, DiagonalActionShiftsUOnly) {
  Gen gen(3);
  const auto P = MoebiusElement::diagonal(kM);
  for (int k = 0; k < 100; ++k) {
    const Point z = gen.point();
    const auto before = angle_coords(z), after = angle_coords(apply(P, z));
    EXPECT_NEAR(after.u, before.u + 2.0 * std::log(kM), 1e-12);
    EXPECT_NEAR(after.v, before.v, 1e-12);
  }
}

TEST(AngleCoordinates, CosSinIdentities) {
  Gen gen(4);
  for (int k = 0; k < 100; ++k) {
    const Point z = gen.point();
    const auto c = angle_coords(z);
    const double r = std::abs(z.z());
    EXPECT_NEAR(std::cos(c.v), z.y() / r, 1e-12);
    EXPECT_NEAR(std::sin(c.v), -z.x() / r, 1e-12);
    EXPECT_NEAR(std::exp(c.u), r, 1e-12 * r);
  }
}

TEST(InvCosSqV, Examples) {
  for (double y : {0.1, 1.0, 7.5}) {
    EXPECT_DOUBLE_EQ(inv_cos_sq_v(MoebiusElement::identity(), y), 1.0);
    EXPECT_NEAR(inv_cos_sq_v(MoebiusElement::diagonal(kM), y), 1.0, 1e-14);
  }
}

TEST(InvCosSqV, TwoPathConsistency) {
  Gen gen(5);
  for (int k = 0; k < 200; ++k) {
    const MoebiusElement g = gen.unimodular();
    const double y = k == 0 ? 1.7 : gen.log_uniform(0.1, 10.0);
    const double v = angle_coords(apply(g, Point(0.0, y))).v;
    const double direct = inv_cos_sq_v(g, y);
    EXPECT_NEAR(direct, 1.0 / (std::cos(v) * std::cos(v)), 1e-10 * direct);
  }
}

TEST(BInvariant, Examples) {
  EXPECT_EQ(b_invariant(MoebiusElement::identity()), 1.0);
  Gen gen(6);
  for (int k = 0; k < 100; ++k) EXPECT_LT(b_invariant(gen.unimodular(true)), 1.0);
  for (int k = 0; k < 100; ++k) EXPECT_GT(b_invariant(gen.unimodular(false)), 1.0);
}

TEST(BInvariant, TwoSidedDiagonalInvariance) {
  Gen gen(7);
  for (int k = 0; k < 200; ++k) {
    const MoebiusElement g = gen.unimodular();
    const int j = gen.integer(-5, 5), l = gen.integer(-5, 5);
    const auto Pj = MoebiusElement::diagonal(std::pow(kM, j));
    const auto Pl = MoebiusElement::diagonal(std::pow(kM, l));
    const double b = b_invariant(g);
    EXPECT_NEAR(b_invariant(Pj * g * Pl), b, 1e-12 * b);
  }
}

TEST(MinUOnAxes, RegularExampleWithBThree) {
  const MoebiusElement g(2.0, 1.0, 1.0, 1.0);
  ASSERT_DOUBLE_EQ(b_invariant(g), 3.0);
  const auto m = min_u_on_axes(g);
  EXPECT_DOUBLE_EQ(m.min_u, 1.0);
  EXPECT_DOUBLE_EQ(4.0 * m.min_u, 2.0 * b_invariant(g) - 2.0);
  EXPECT_NEAR(m.x_min * m.x_min, std::abs(g.b() * g.d() / (g.a() * g.c())), 1e-15);
  EXPECT_NEAR(m.y_min * m.y_min, std::abs(g.a() * g.b() / (g.c() * g.d())), 1e-15);
}

TEST(MinUOnAxes, ExceptionalIsZero) {
  const MoebiusElement g(1.0, 1.0, -0.5, 0.5);
  ASSERT_LT(g.a() * g.b() * g.c() * g.d(), 0.0);
  EXPECT_EQ(min_u_on_axes(g).min_u, 0.0);
}

TEST(MinUOnAxes, DegenerateEntriesRejected) {
  try {
    min_u_on_axes(MoebiusElement(1.0, 1.0, 0.0, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateEntries);
  }
}

TEST(MinUOnAxes, MinimiserAttainsMinimum) {
  Gen gen(8);
  for (int k = 0; k < 100; ++k) {
    const MoebiusElement g = gen.unimodular();
    const auto m = min_u_on_axes(g);
    const double at = point_pair_invariant(apply(g, Point(0.0, m.x_min)), Point(0.0, m.y_min));
    EXPECT_NEAR(at, m.min_u, 1e-9 * (1.0 + m.min_u));
  }
}

TEST(MinUOnAxes, BruteForceOracle) {
  Gen gen(9);
  for (int k = 0; k < 20; ++k) {
    const MoebiusElement g = gen.unimodular();
    const double brute = relcount::testing::brute_force_min_4u(g);
    EXPECT_NEAR(brute, 4.0 * min_u_on_axes(g).min_u, 1e-6) << "sample " << k;
  }
}

TEST(MinUOnAxes, CoshOfAxisDistanceIsB) {
  // For abcd > 0 the axes of g and of the identity are disjoint; the distance
  // between geodesics with endpoints (0, inf) and (p, q), 0 < p < q, has
  // cosh d = (q + p) / (q - p).
  Gen gen(10);
  for (int k = 0; k < 100; ++k) {
    const MoebiusElement g = gen.unimodular(false);
    double p = std::abs(g.b() / g.d()), q = std::abs(g.a() / g.c());
    if (p > q) std::swap(p, q);
    const double cosh_d = (q + p) / (q - p);
    EXPECT_NEAR(1.0 + 2.0 * min_u_on_axes(g).min_u, cosh_d, 1e-9 * cosh_d);
    EXPECT_NEAR(2.0 * cosh_d, 2.0 * b_invariant(g), 1e-9 * cosh_d);
  }
}
