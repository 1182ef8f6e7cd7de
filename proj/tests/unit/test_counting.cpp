#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "generators.hpp"
#include "oracles.hpp"
#include "relcount/counting.hpp"
#include "relcount/errors.hpp"
#include "relcount/huber.hpp"

using namespace relcount;
using relcount::testing::Gen;

namespace {

const GroupPresentation& demo() {
  static const GroupPresentation pres = parse_group_file(relcount::testing::data_path("demo_group.txt"));
  return pres;
}

const std::vector<SpectralDatum>& demo_spectrum() {
  static const auto s = parse_spectral_file(relcount::testing::data_path("demo_spectral.csv"));
  return s;
}

// Inventory good for every X' <= X + X^{2/3}.
const Inventory& demo_inventory() {
  static const Inventory inv = coset_inventory(demo(), 900.0, 30);
  return inv;
}

Inventory exceptional_only(int n, std::uint64_t seed) {
  Gen gen(seed);
  Inventory inv;
  inv.reps.push_back(CosetRepresentative{});
  for (int k = 0; k < n; ++k) inv.reps.push_back(reduce_double_coset(demo(), gen.unimodular(true)));
  inv.x_cover = 1e6;
  inv.stable = inv.saturated = true;
  return inv;
}

ErrorCode error_code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST(DemoInventory, IsStable) {
  ASSERT_TRUE(demo_inventory().stable);
  EXPECT_GE(demo_inventory().x_cover, 900.0);
}

TEST(SpectralData, ParseAndValidate) {
  const auto s = parse_spectral_text("# comment\n1,0,0.8\n\n0.75,0,0.1\n0.5,9.53,0.2\n");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[2].s, cplx(0.5, 9.53));
  EXPECT_EQ(error_code_of([] { parse_spectral_text("1,0\n"); }), ErrorCode::kParse);
  EXPECT_EQ(error_code_of([] { parse_spectral_text("1,0,1,2\n"); }), ErrorCode::kParse);
  EXPECT_EQ(error_code_of([] { parse_spectral_text("0.3,0,1\n"); }), ErrorCode::kParse);
  EXPECT_EQ(error_code_of([] { parse_spectral_text("0.7,1,1\n"); }), ErrorCode::kParse);
  EXPECT_EQ(error_code_of([] { parse_spectral_file("/nonexistent.csv"); }), ErrorCode::kParse);

  const auto c = constant_spectrum(demo());
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(c[0].period, demo().length() / std::sqrt(4 * M_PI), 1e-14);
  EXPECT_NO_THROW(validate_spectrum(demo_spectrum(), demo()));
  EXPECT_EQ(error_code_of([] { validate_spectrum({{0.75, 1.0}}, demo()); }),
            ErrorCode::kMissingConstantEigenfunction);
  EXPECT_THROW(validate_spectrum({{1.0, 0.5}}, demo()), Error);
}

TEST(MainTerm, ConstantOnly) {
  const double u0 = demo_spectrum()[0].period;
  for (double X : {1.0, 10.0, 123.4}) EXPECT_NEAR(main_term(demo_spectrum(), X), 2 / M_PI * u0 * u0 * X, 1e-13 * X);
}

TEST(MainTerm, AtOneSumsCoefficients) {
  const std::vector<SpectralDatum> s = {{1.0, 0.7}, {0.8, 0.3}, {0.6, 0.2}, {cplx(0.5, 9.5), 5.0}};
  double expected = 0.0;
  for (int k = 0; k < 3; ++k) {
    const auto g = gamma_factors(SpectralParameter::from_s(s[k].s));
    expected += 2 / M_PI * g.gamma1.real() * s[k].period * s[k].period;
  }
  EXPECT_NEAR(main_term(s, 1.0), expected, 1e-13);
}

TEST(MainTerm, Errors) {
  EXPECT_EQ(error_code_of([] { main_term({}, 10.0); }), ErrorCode::kMissingConstantEigenfunction);
  EXPECT_EQ(error_code_of([] { main_term({{0.75, 1.0}}, 10.0); }), ErrorCode::kMissingConstantEigenfunction);
}

TEST(Count, IdentityOnlyBelowSmallestB) {
  const auto r = count(demo(), demo_spectrum(), 5.0);
  EXPECT_EQ(r.n_count, 1);
  EXPECT_EQ(r.identity_count, 1u);
  EXPECT_EQ(r.regular_count, 0u);
  EXPECT_EQ(r.exceptional_count, 0u);
  EXPECT_TRUE(r.stable);
}

TEST(Count, ErrorIsExactDifference) {
  for (double X : {7.0, 33.3, 250.0}) {
    const auto r = count_from_inventory(demo_inventory(), demo_spectrum(), X);
    EXPECT_EQ(r.error, static_cast<double>(r.n_count) - r.main_term);
    EXPECT_EQ(r.main_term_alt, 2.0 * r.main_term);
    EXPECT_EQ(static_cast<std::size_t>(r.n_count), r.identity_count + r.regular_count + r.exceptional_count);
  }
}

TEST(Count, MatchesDirectInventoryCount) {
  const auto r = count(demo(), demo_spectrum(), 100.0);
  EXPECT_EQ(static_cast<std::size_t>(r.n_count), demo_inventory().count_below(100.0));
  EXPECT_EQ(r.n_count, count_from_inventory(demo_inventory(), demo_spectrum(), 100.0).n_count);
}

TEST(Count, MonotoneInX) {
  std::int64_t prev = 0;
  for (double X = 2.0; X < 800.0; X *= 1.07) {
    const auto r = count_from_inventory(demo_inventory(), demo_spectrum(), X);
    EXPECT_GE(r.n_count, prev);
    prev = r.n_count;
  }
}

TEST(Count, GrowthSlopeNearOne) {
  // Below X ~ 10^3 the X^{2/3} error scale is comparable to the main term.
  const Inventory inv = coset_inventory(demo(), 10000.0, 40);
  ASSERT_TRUE(inv.stable);
  std::vector<double> xs, ns;
  for (int k = 0; k <= 20; ++k) {
    const double X = 1000.0 * std::pow(10.0, k / 20.0);
    xs.push_back(X);
    ns.push_back(static_cast<double>(count_from_inventory(inv, demo_spectrum(), X).n_count));
  }
  EXPECT_NEAR(relcount::testing::loglog_slope(xs, ns), 1.0, 0.15);
  const auto r = count_from_inventory(inv, demo_spectrum(), 9999.0);
  EXPECT_LT(std::abs(r.error), 0.1 * r.main_term);
  EXPECT_GT(std::abs(r.n_count - r.main_term_alt), 0.4 * r.main_term);
}

TEST(Count, JumpsAtBValues) {
  const auto& inv = demo_inventory();
  std::set<double> bs;
  for (const auto& r : inv.reps) {
    if (r.klass == CosetClass::kRegular && r.b_value < 400.0) bs.insert(r.b_value);
  }
  for (double b : bs) {
    const auto below = count_from_inventory(inv, demo_spectrum(), b * (1 - 1e-9));
    const auto above = count_from_inventory(inv, demo_spectrum(), b * (1 + 1e-9));
    EXPECT_GT(above.n_count, below.n_count) << b;
  }
  // Between consecutive B-values E is continuous with slope -dM/dX.
  auto it = bs.begin();
  const double lo = *it, hi = *std::next(it);
  const auto p = count_from_inventory(inv, demo_spectrum(), lo + 0.25 * (hi - lo));
  const auto q = count_from_inventory(inv, demo_spectrum(), lo + 0.75 * (hi - lo));
  EXPECT_EQ(p.n_count, q.n_count);
}

TEST(Count, UnstableThrows) {
  CountOptions opt;
  opt.max_word_len = 2;
  EXPECT_EQ(error_code_of([&] { count(demo(), demo_spectrum(), 300.0, opt); }), ErrorCode::kUnstable);
  opt.allow_unstable = true;
  const auto r = count(demo(), demo_spectrum(), 300.0, opt);
  EXPECT_FALSE(r.stable);
}

TEST(CountBetween, IdentityConjugatorMatchesCount) {
  for (double X : {20.0, 150.0}) {
    const auto a = count(demo(), demo_spectrum(), X);
    const auto b = count_between(demo(), demo(), MoebiusElement::identity(), demo_spectrum(), X);
    EXPECT_EQ(a.n_count, b.n_count);
    EXPECT_EQ(a.main_term, b.main_term);
  }
}

TEST(CountBetween, RotatedGeodesicSlope) {
  // g_k = K(k pi/8) diag(m) K(k pi/8)^{-1}, so K(pi/8) maps the imaginary axis onto the axis of g_1.
  const auto tau = MoebiusElement::rotation(M_PI / 8.0);
  ASSERT_TRUE((tau * demo().axis_element() * tau.inverse()).approx_equal(demo().generators[1], 1e-12));
  const Inventory inv = coset_inventory_between(demo(), demo(), tau, 800.0, 30);
  ASSERT_TRUE(inv.stable);
  std::vector<double> xs, ns;
  for (int k = 0; k <= 10; ++k) {
    const double X = 80.0 * std::pow(10.0, k / 10.0);
    xs.push_back(X);
    ns.push_back(static_cast<double>(inv.count_below(X)));
  }
  EXPECT_NEAR(relcount::testing::loglog_slope(xs, ns), 1.0, 0.15);
}

TEST(GeometricSide, IncompleteInventoryRejected) {
  const SmoothedIndicator ind(100.0, 10.0, Sign::kPlus);
  const Inventory small = coset_inventory(demo(), 50.0, 14);
  EXPECT_EQ(error_code_of([&] { geometric_side(demo(), ind, small); }), ErrorCode::kIncompleteInventory);
  const Inventory shallow = coset_inventory(demo(), 200.0, 2);
  EXPECT_EQ(error_code_of([&] { geometric_side(demo(), ind, shallow); }), ErrorCode::kIncompleteInventory);
}

TEST(GeometricSide, IdentityTermVanishesForIndicators) {
  for (Sign sg : {Sign::kPlus, Sign::kMinus}) {
    const auto gs = geometric_side(demo(), SmoothedIndicator(100.0, 20.0, sg), demo_inventory());
    EXPECT_EQ(gs.identity_term, 0.0);
    EXPECT_EQ(gs.exceptional_terms, 0u);
    EXPECT_NEAR(gs.total, gs.regular_sum + gs.exceptional_sum, 1e-12 * gs.total);
  }
}

TEST(GeometricSide, ClosedFormsMatchLineIntegrals) {
  for (Sign sg : {Sign::kPlus, Sign::kMinus}) {
    const SmoothedIndicator ind(150.0, 150.0 / 4, sg);
    const auto a = geometric_side(demo(), ind, demo_inventory(), KernelRoute::kClosed);
    const auto b = geometric_side(demo(), ind, demo_inventory(), KernelRoute::kLineIntegral);
    EXPECT_NEAR(a.total, b.total, 1e-5 * std::abs(a.total));
    EXPECT_EQ(a.regular_terms, b.regular_terms);
  }
}

TEST(GeometricSide, ExceptionalOnlyInventory) {
  const Inventory inv = exceptional_only(40, 50);
  const SmoothedIndicator ind(30.0, 10.0, Sign::kPlus);
  const auto gs = geometric_side(demo(), ind, inv);
  EXPECT_EQ(gs.regular_terms, 0u);
  EXPECT_EQ(gs.exceptional_terms, 40u);
  EXPECT_EQ(gs.total, gs.exceptional_sum);
  for (const auto& r : inv.reps) {
    if (r.klass != CosetClass::kExceptional) continue;
    const double v = q_tilde_closed(ind, r.b_value);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0 + 1e-12);
  }
  const auto li = geometric_side(demo(), ind, inv, KernelRoute::kLineIntegral);
  EXPECT_NEAR(li.total, gs.total, 1e-6 * gs.total);
}

TEST(LineIntegral, PerCosetOracle) {
  const SmoothedIndicator ind(60.0, 15.0, Sign::kMinus);
  const auto f = as_test_function(ind);
  for (const auto& r : demo_inventory().reps) {
    if (r.klass != CosetClass::kRegular || r.b_value > 80.0) continue;
    EXPECT_NEAR(line_integral(f, r.element), q_eval(ind, r.b_value), 1e-6);
  }
  Gen gen(51);
  for (int k = 0; k < 20; ++k) {
    const auto g = gen.unimodular(true);
    EXPECT_NEAR(line_integral(f, g), q_tilde_closed(ind, b_invariant(g)), 1e-6);
  }
}

TEST(Sandwich, HoldsOnGrid) {
  for (int k = 0; k < 20; ++k) {
    const double X = 30.0 * std::pow(20.0, k / 19.0);
    const double Y = std::pow(X, 2.0 / 3.0) / 2;
    std::size_t n = 0;
    for (const auto& r : demo_inventory().reps) n += (r.klass == CosetClass::kRegular && r.b_value < X) ? 1 : 0;
    const double lo = geometric_side(demo(), SmoothedIndicator(X, Y, Sign::kMinus), demo_inventory()).regular_sum;
    const double hi = geometric_side(demo(), SmoothedIndicator(X, Y, Sign::kPlus), demo_inventory()).regular_sum;
    EXPECT_LE(lo, static_cast<double>(n) + 1e-9) << X;
    EXPECT_GE(hi, static_cast<double>(n) - 1e-9) << X;
  }
}

TEST(SpectralSide, ConstantOnlyLeadingTerm) {
  const double u0 = demo_spectrum()[0].period;
  for (double X : {100.0, 400.0}) {
    const double Y = std::pow(X, 2.0 / 3.0);
    const SmoothedIndicator ind(X, Y, Sign::kPlus);
    const auto sp = spectral_side_partial(demo_spectrum(), ind, 10.0, demo().length() / M_PI);
    EXPECT_EQ(sp.terms, 1u);
    const double d = huber_closed(ind, SpectralParameter::from_s(1.0)).real();
    EXPECT_NEAR(sp.value, 2 * d * u0 * u0, 1e-12 * sp.value);
    EXPECT_NEAR(sp.value, 2 / M_PI * u0 * u0 * X, 2 * u0 * u0 * Y);
  }
}

TEST(SpectralSide, EmptyListGivesFullTail) {
  const SmoothedIndicator ind(400.0, 50.0, Sign::kPlus);
  const auto sp = spectral_side_partial({}, ind, 1.0, 1.0);
  EXPECT_EQ(sp.value, 0.0);
  EXPECT_EQ(sp.terms, 0u);
  EXPECT_EQ(sp.tail_bound, dyadic_tail_bound(400.0, 50.0, 1.0, 1.0));
  EXPECT_GT(sp.tail_bound, 0.0);
}

TEST(SpectralSide, TailBoundByDirectBlocks) {
  // C X^{1/2} sum_{n>=n0} 2^{-n/2} min(2^n, X/Y), summed directly over blocks.
  const double X = 1000.0, Y = 10.0, C = 0.7;
  for (double T : {1.0, 3.0, 64.0, 1e4}) {
    double direct = 0.0;
    for (int n = static_cast<int>(std::ceil(std::log2(T))); n < 400; ++n) {
      direct += std::pow(2.0, -n / 2.0) * std::min(std::pow(2.0, n), X / Y);
    }
    EXPECT_NEAR(dyadic_tail_bound(X, Y, T, C), C * std::sqrt(X) * direct, 1e-10 * direct);
  }
  EXPECT_GT(dyadic_tail_bound(X, Y, 1.0, C), dyadic_tail_bound(X, Y, 100.0, C));
}

TEST(SpectralSide, SyntheticSpectrumBelowBound) {
  const double X = 200.0, Y = std::pow(X, 2.0 / 3.0);
  const SmoothedIndicator ind(X, Y, Sign::kPlus);
  std::vector<SpectralDatum> synth;
  for (int j = 1; j <= 40; ++j) synth.push_back({cplx(0.5, j), 1.0 / j});
  const auto sp = spectral_side_partial(synth, ind, 1.0, 1.0);
  EXPECT_EQ(sp.terms, 40u);
  double abs_sum = 0.0;
  for (const auto& d : synth) {
    abs_sum += 2.0 * std::abs(huber_closed(ind, SpectralParameter::from_s(d.s))) * d.period * d.period;
  }
  EXPECT_LE(std::abs(sp.value), abs_sum + 1e-12);
  EXPECT_LE(abs_sum, sp.tail_bound);
}

TEST(TraceFormula, ConstantTermDifferenceIsXToTwoThirds) {
  std::vector<double> ratios;
  for (double X : {60.0, 120.0, 240.0, 480.0}) {
    const double Y = std::pow(X, 2.0 / 3.0);
    const SmoothedIndicator ind(X, Y, Sign::kPlus);
    const double geo = geometric_side(demo(), ind, demo_inventory()).total;
    const double spectrum = spectral_side_partial(demo_spectrum(), ind, 10.0, 1.0).value;
    ratios.push_back(std::abs(geo - spectrum) / Y);
  }
  const double top = *std::max_element(ratios.begin(), ratios.end());
  EXPECT_LT(top, 3.0);
  // No systematic growth across the decade.
  EXPECT_LT(ratios.back(), 2.0 * ratios.front() + 0.5);
}

TEST(MomentGrid, EquallySpaced) {
  const auto pts = moment_grid(100.0, 11, {});
  ASSERT_EQ(pts.size(), 11u);
  EXPECT_NEAR(pts.front(), 100.0, 1e-6);
  EXPECT_NEAR(pts.back(), 200.0, 1e-6);
  for (std::size_t k = 1; k < pts.size(); ++k) EXPECT_GT(pts[k] - pts[k - 1], 100.0 / 11);
}

TEST(MomentGrid, PoissonSpacingAndDeterminism) {
  MomentScanOptions opt;
  opt.poisson = true;
  opt.delta = 1.5;
  opt.seed = 9;
  const auto a = moment_grid(500.0, 64, opt), b = moment_grid(500.0, 64, opt);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 64u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_GE(a[i], 500.0);
    EXPECT_LE(a[i], 1000.0);
    for (std::size_t j = 0; j < i; ++j) EXPECT_GT(std::abs(a[i] - a[j]), 1.5);
  }
  opt.seed = 10;
  EXPECT_NE(moment_grid(500.0, 64, opt), a);
}

TEST(MomentGrid, AvoidsBValues) {
  const auto pts = moment_grid(100.0, 11, {}, {110.0, 150.0});
  for (double p : pts) {
    EXPECT_NE(p, 110.0);
    EXPECT_NE(p, 150.0);
  }
}

TEST(MomentGrid, RejectsOverfull) {
  MomentScanOptions opt;
  opt.delta = 10.0;
  EXPECT_EQ(error_code_of([&] { moment_grid(100.0, 11, opt); }), ErrorCode::kInvalidArgument);
  EXPECT_THROW(moment_grid(100.0, 0, {}), Error);
}

TEST(MomentScan, SinglePointIsCount) {
  const auto scan = moment_scan(demo_inventory(), demo_spectrum(), 120.0, 1);
  ASSERT_EQ(scan.reports.size(), 1u);
  const auto r = count_from_inventory(demo_inventory(), demo_spectrum(), scan.points[0]);
  EXPECT_EQ(scan.reports[0].n_count, r.n_count);
  EXPECT_EQ(scan.mean_square, r.error * r.error);
}

TEST(MomentScan, StatisticMatchesReports) {
  const auto scan = moment_scan(demo_inventory(), demo_spectrum(), 200.0, 16);
  double ms = 0.0;
  for (const auto& r : scan.reports) ms += r.error * r.error;
  ms /= 16;
  EXPECT_NEAR(scan.mean_square, ms, 1e-12 * ms);
  EXPECT_NEAR(scan.normalized, ms / (200.0 * std::log(200.0) * std::log(200.0)), 1e-12 * scan.normalized);
  const auto again = moment_scan(demo(), demo_spectrum(), 200.0, 16);
  EXPECT_EQ(again.mean_square, scan.mean_square);
}
