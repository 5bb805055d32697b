#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wfarey/errors.hpp"
#include "wfarey/polynomial.hpp"
#include "wfarey/quadrature.hpp"

using namespace wfarey;

namespace {

Rational R(std::int64_t p, std::int64_t q = 1) { return Rational(BigInt(p), BigInt(q)); }

Polynomial poly(std::initializer_list<Rational> c) { return Polynomial(std::vector<Rational>(c)); }

// Real roots of p in [lo, hi] counted by sign changes on a dense grid.
int dense_sign_changes(const Polynomial& p, double lo, double hi, int n = 10000) {
  int changes = 0;
  double prev = p(lo);
  for (int i = 1; i <= n; ++i) {
    const double cur = p(lo + (hi - lo) * i / n);
    if ((prev < 0 && cur > 0) || (prev > 0 && cur < 0)) ++changes;
    if (cur != 0) prev = cur;
  }
  return changes;
}

}  // namespace

TEST(Polynomial, EvaluationAndCalculus) {
  const Polynomial p = poly({R(28, 25), R(-4, 5), R(1)});
  EXPECT_EQ(p(R(2, 5)), R(24, 25));
  EXPECT_EQ(p(R(1)), R(33, 25));
  EXPECT_EQ(p.derivative(), poly({R(-4, 5), R(2)}));
  EXPECT_DOUBLE_EQ(p(0.4), 0.96);
  // (s - 2/5)^2 + 24/25 after shifting by 2/5
  EXPECT_EQ(p.taylor_shift(R(2, 5)), poly({R(24, 25), R(0), R(1)}));
}

TEST(Polynomial, DivisionAndGcd) {
  const Polynomial a = poly({R(-1), R(0), R(1)});  // s^2 - 1
  const Polynomial b = poly({R(-1), R(1)});         // s - 1
  const auto [q, r] = Polynomial::divmod(a, b);
  EXPECT_EQ(q, poly({R(1), R(1)}));
  EXPECT_TRUE(r.is_zero());
  const Polynomial sq = b * b * poly({R(2), R(1)});
  EXPECT_EQ(sq.square_free(), (b * poly({R(2), R(1)})).monic());
}

TEST(IsolateRoots, DerivativeOfExampleParabola) {
  const auto roots = isolate_roots(poly({R(-4, 5), R(2)}), R(1, 5), R(1));
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_TRUE(roots[0].exact());
  EXPECT_EQ(roots[0].lo, R(2, 5));
}

TEST(IsolateRoots, NoRealRoots) { EXPECT_TRUE(isolate_roots(poly({R(1), R(0), R(1)}), R(0), R(1)).empty()); }

TEST(IsolateRoots, TwoSeparatedRoots) {
  const Polynomial p = poly({R(-1, 3), R(1)}) * poly({R(-2, 3), R(1)});
  const auto roots = isolate_roots(p, R(0), R(1));
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_LE(roots[0].hi, roots[1].lo);
  for (const auto& r : roots) {
    const double x = root_to_double(p, r);
    EXPECT_NEAR(std::abs(p(x)), 0.0, 1e-14);
  }
}

TEST(IsolateRoots, IrrationalRootsAndRefinement) {
  const Polynomial p = poly({R(-1, 2), R(0), R(1)});  // s^2 - 1/2
  const auto roots = isolate_roots(p, R(0), R(1));
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_NEAR(root_to_double(p, roots[0]), std::sqrt(0.5), 1e-15);
  const RootInterval fine = refine_root(p, roots[0], R(1, 1 << 30));
  EXPECT_LE((fine.hi - fine.lo).to_double(), std::ldexp(1.0, -30));
  EXPECT_LE(fine.lo.to_double(), std::sqrt(0.5));
  EXPECT_GE(fine.hi.to_double(), std::sqrt(0.5));
}

TEST(IsolateRoots, RootsAtEndpointsAndRepeatedRoots) {
  const Polynomial p = poly({R(0), R(-1), R(1)});  // s (s - 1)
  const auto roots = isolate_roots(p, R(0), R(1));
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_EQ(roots[0].lo, R(0));
  EXPECT_EQ(roots[1].hi, R(1));
  const Polynomial dbl = poly({R(-1, 3), R(1)}) * poly({R(-1, 3), R(1)});
  const auto r2 = isolate_roots(dbl, R(0), R(1));
  ASSERT_EQ(r2.size(), 1u);
  EXPECT_EQ(root_multiplicity(dbl, R(1, 3)), 2);
}

TEST(IsolateRoots, CountMatchesDenseSampling) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    // Products of distinct linear factors with roots on a 1/97 grid, so
    // every root is simple and the dense scan sees each sign change.
    Polynomial p = poly({R(1)});
    const int k = 1 + static_cast<int>(rng() % 5);
    std::vector<int> used;
    for (int i = 0; i < k; ++i) {
      int r = static_cast<int>(rng() % 150) - 25;
      if (std::find(used.begin(), used.end(), r) != used.end()) continue;
      used.push_back(r);
      p = p * poly({R(-r, 97), R(1)});
    }
    p = p * poly({R(1, 10), R(0), R(1)});  // no real roots
    const auto roots = isolate_roots(p, R(1, 1000), R(999, 1000));
    EXPECT_EQ(static_cast<int>(roots.size()), dense_sign_changes(p, 0.001, 0.999)) << "trial " << trial;
  }
}

TEST(RangeEnclosure, ContainsTrueRange) {
  const Polynomial p = poly({R(28, 25), R(-4, 5), R(1)});
  const Enclosure e = range_enclosure(p, R(1, 5), R(1));
  EXPECT_LE(e.lo, R(24, 25));
  EXPECT_GE(e.hi, R(33, 25));
  EXPECT_LT((R(24, 25) - e.lo).to_double(), 1e-12);
  EXPECT_LT((e.hi - R(33, 25)).to_double(), 1e-12);
}

TEST(Quadrature, PolynomialIsExact) {
  const auto r = integrate(QuadratureRequest{[](double s) { return s * s; }, 0.0, 1.0});
  EXPECT_NEAR(r.value, 1.0 / 3.0, 1e-12);
  EXPECT_LE(r.error_bound, kDefaultQuadTol);
}

TEST(Quadrature, LinearAndAdditiveAcrossKnots) {
  auto f = [](double s) { return std::exp(-s) * std::sin(5 * s); };
  auto g = [](double s) { return std::sqrt(s + 1); };
  const double a = integrate(f, 0.0, 2.0), b = integrate(g, 0.0, 2.0);
  const double ab = integrate([&](double s) { return 2 * f(s) - 3 * g(s); }, 0.0, 2.0);
  EXPECT_NEAR(ab, 2 * a - 3 * b, 1e-9);
  const double split = integrate(f, 0.0, 0.7) + integrate(f, 0.7, 2.0);
  EXPECT_NEAR(split, a, 1e-10);
  EXPECT_NEAR(integrate(f, 0.0, 2.0, {0.7, 1.3}), a, 1e-10);
}

TEST(Quadrature, ForcedKnotAtKinkSavesPanels) {
  // Square-root cusp, the kink type of the Hall density at its upper branch point.
  const double kink = 1.0 / std::numbers::pi;
  auto f = [kink](double s) { return std::sqrt(std::abs(s - kink)); };
  const auto without = integrate(QuadratureRequest{f, 0.0, 1.0, {}});
  const auto with = integrate(QuadratureRequest{f, 0.0, 1.0, {kink}});
  const double exact = (2.0 / 3.0) * (std::pow(kink, 1.5) + std::pow(1 - kink, 1.5));
  EXPECT_NEAR(with.value, exact, kDefaultQuadTol);
  // Without the knot the K15 - G7 estimate is optimistic at the cusp.
  EXPECT_NEAR(without.value, exact, 1e-9);
  EXPECT_GE(without.panels, 10 * with.panels);
}

TEST(Quadrature, ForcedKnotAtSlopeKink) {
  const double kink = 1.0 / std::numbers::pi;
  auto f = [kink](double s) { return std::abs(s - kink); };
  const auto without = integrate(QuadratureRequest{f, 0.0, 1.0, {}, 1e-12});
  const auto with = integrate(QuadratureRequest{f, 0.0, 1.0, {kink}, 1e-12});
  const double exact = 0.5 * (kink * kink + (1 - kink) * (1 - kink));
  EXPECT_NEAR(with.value, exact, 1e-12);
  EXPECT_NEAR(without.value, exact, 1e-11);
  EXPECT_EQ(with.panels, 2);
  EXPECT_GT(without.panels, 4 * with.panels);
}

TEST(Quadrature, KnotSegmentsKeepSmoothIntegrandsExact) {
  const auto r = integrate(QuadratureRequest{[](double s) { return 3 * s * s; }, 0.0, 2.0, {0.5, 1.25}});
  EXPECT_NEAR(r.value, 8.0, 1e-13);
  EXPECT_EQ(r.panels, 3);
}

TEST(Quadrature, BudgetExhaustionThrows) {
  QuadratureRequest req{[](double s) { return std::sin(1.0 / s) / s; }, 0.0, 1.0, {}, 1e-14, 20};
  EXPECT_THROW(integrate(req), QuadratureError);
}

TEST(Quadrature, CleanKnots) {
  const auto k = clean_knots({0.5, 0.0, 0.25, 0.5, 1.0, 2.0, 0.25 + 1e-18}, 0.0, 1.0);
  ASSERT_EQ(k.size(), 2u);
  EXPECT_EQ(k[0], 0.25);
  EXPECT_EQ(k[1], 0.5);
}

TEST(InvertMonotone, IdentityAndRangeErrors) {
  EXPECT_NEAR(invert_monotone([](double s) { return s; }, 0.0, 1.0, 0.25), 0.25, 1e-12);
  const double s = invert_monotone([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 2.0, 0.5);
  EXPECT_NEAR(s, 1.0, 1e-11);
  EXPECT_THROW(invert_monotone([](double x) { return x; }, 0.0, 1.0, 1.5), DomainError);
}

TEST(CompensatedSum, RecoversSmallTerms) {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  EXPECT_EQ(s.value(), 1000.0);
}
