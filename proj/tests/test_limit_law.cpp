#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "wfarey/limit_law.hpp"
#include "wfarey/stats.hpp"

using namespace wfarey;

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

Unit fixture(const std::string& name) { return load_unit(std::string(WFAREY_DATA_DIR) + "/" + name); }

// Hall density written out branch by branch, independent of hall_pdf.
double hall_pdf_ref(double z) {
  const double a = kPi2 * z;
  if (z <= 3.0 / kPi2) return 0.0;
  if (z <= 12.0 / kPi2) return 6.0 * std::log(a / 3.0) / (kPi2 * z * z);
  return -12.0 * std::log(0.5 + std::sqrt(0.25 - 3.0 / a)) / (kPi2 * z * z);
}

const LimitLaw& example_law() {
  static const LimitLaw law(fixture("example1.unit"));
  return law;
}

}  // namespace

TEST(Hall, SupportAndLimits) {
  EXPECT_EQ(hall_cdf(0.0), 0.0);
  EXPECT_EQ(hall_cdf(kHallLower), 0.0);
  EXPECT_EQ(hall_pdf(0.1), 0.0);
  EXPECT_NEAR(hall_cdf(kHallUpper), 1.5 - std::log(2.0), 1e-14);
  EXPECT_NEAR(hall_cdf(1e6), 1.0, 1e-6);
  EXPECT_DOUBLE_EQ(kHallLower, 3.0 / kPi2);
  EXPECT_DOUBLE_EQ(kHallUpper, 12.0 / kPi2);
}

TEST(Hall, DensityMatchesBranchFormulas) {
  for (double z = 0.05; z < 8.0; z += 0.0371) EXPECT_NEAR(hall_pdf(z), hall_pdf_ref(z), 1e-13) << z;
}

TEST(Hall, CdfIsIntegralOfDensity) {
  for (double z : {0.4, kHallUpper, 1.5, 4.0}) {
    const double integral = integrate(hall_pdf_ref, kHallLower, z, {kHallUpper}, 1e-13);
    EXPECT_NEAR(hall_cdf(z), integral, 1e-11) << z;
  }
  EXPECT_NEAR(integrate_half_line(hall_pdf, {kHallLower, kHallUpper}, 1e-12), 1.0, 1e-9);
  EXPECT_NEAR(integrate_half_line([](double z) { return z * hall_pdf(z); }, {kHallLower, kHallUpper}, 1e-12), 1.0,
              1e-8);
}

TEST(WeightedLaw, ConstantUnitsReduceToHall) {
  for (int c : {1, 3}) {
    const LimitLaw law(Unit::constant(c));
    for (double z : {0.2, 0.5, 1.0, 1.7, 3.0}) {
      EXPECT_NEAR(law.cdf(z), hall_cdf(z), 1e-12) << c << " " << z;
      EXPECT_NEAR(law.pdf(z), hall_pdf(z), 1e-12) << c << " " << z;
    }
    const auto k = law.kink_values();
    ASSERT_EQ(k.size(), 2u);
    EXPECT_NEAR(k[0], kHallLower, 1e-15);
    EXPECT_NEAR(k[1], kHallUpper, 1e-15);
  }
}

TEST(WeightedLaw, ZeroBelowFirstKink) {
  const LimitLaw& law = example_law();
  const double first = law.kink_values().front();
  EXPECT_EQ(weighted_cdf(law, 0.5 * first), 0.0);
  EXPECT_EQ(weighted_pdf(law, 0.99 * first), 0.0);
  EXPECT_GT(weighted_cdf(law, 1.5 * first), 0.0);
}

TEST(WeightedLaw, NormalizedWithUnitMean) {
  for (const char* name : {"example1.unit", "steep.unit"}) {
    const LimitLaw law(fixture(name));
    const auto knots = law.kink_values();
    const auto h = [&](double z) { return law.pdf(z); };
    EXPECT_NEAR(integrate_half_line(h, knots, 1e-9), 1.0, 1e-6) << name;
    EXPECT_NEAR(integrate_half_line([&](double z) { return z * law.pdf(z); }, knots, 1e-9), 1.0, 1e-6) << name;
  }
}

TEST(WeightedLaw, DensityIsDerivativeAwayFromKinks) {
  const LimitLaw& law = example_law();
  const auto kinks = law.kink_values();
  const double h = 1e-5;
  for (double z = 0.05; z < 3.0; z += 0.0617) {
    bool near_kink = false;
    for (double k : kinks) near_kink |= std::abs(z - k) < 10 * h;
    if (near_kink) continue;
    const double fd = (law.cdf(z + h) - law.cdf(z - h)) / (2 * h);
    EXPECT_NEAR(fd, law.pdf(z), 1e-5) << z;
  }
}

TEST(WeightedLaw, CdfIsMonotone) {
  const LimitLaw& law = example_law();
  double prev = 0.0;
  for (double z = 0.0; z < 6.0; z += 0.01) {
    const double F = law.cdf(z);
    EXPECT_GE(F, prev - 1e-12);
    EXPECT_LE(F, 1.0 + 1e-12);
    prev = F;
  }
}

TEST(WeightedLaw, AgreesWithDirectMixture) {
  // H_u(z) = int H_1(m z) m ds recomputed by brute midpoint sums.
  const LimitLaw& law = example_law();
  const UnitDerived& d = law.derived();
  const Unit& u = law.unit();
  const int n = 200000;
  for (double z : {0.2, 0.6, 1.3}) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double m = d.m(u, (i + 0.5) / n);
      acc += hall_cdf(m * z) * m / n;
    }
    EXPECT_NEAR(law.cdf(z), acc, 1e-7) << z;
  }
}

TEST(Kinks, CatalogOfExample) {
  const LimitLaw& law = example_law();
  const auto& kinks = law.kinks();
  ASSERT_EQ(kinks.size(), 7u);
  const double scale = law.derived().C / kTwoZeta2;
  for (std::size_t i = 0; i < kinks.size(); ++i) {
    if (i) EXPECT_LT(kinks[i - 1].z, kinks[i].z);
    ASSERT_FALSE(kinks[i].preimages.empty());
    for (const auto& pre : kinks[i].preimages) {
      EXPECT_TRUE(pre.factor == 1 || pre.factor == 4);
      const double us = law.unit().eval(pre.point.s);
      EXPECT_NEAR(kinks[i].z, scale * pre.factor * us * us, 1e-14);
    }
  }
  EXPECT_NEAR(kinks[0].z, 0.086632, 1e-6);
  EXPECT_NEAR(kinks[1].z, 0.319359, 1e-6);
  EXPECT_NEAR(kinks[4].z, 1.277437, 1e-6);
  EXPECT_EQ(kink_points(law), law.kink_values());
}

TEST(Kinks, DuplicateValuesMerge) {
  // u(0) = u(1) = 1 so both endpoints land on the same kinks.
  const Unit u = parse_unit(R"({"pieces":[{"from":"0","to":"1","poly":["1","1","-1"]}]})");
  const LimitLaw law(u);
  const auto& kinks = law.kinks();
  std::size_t merged = 0;
  for (const auto& k : kinks) merged += k.preimages.size() > 1;
  EXPECT_EQ(kinks.size(), 4u);  // {1, 4} x {u^2 = 1, u(1/2)^2 = 25/16}
  EXPECT_EQ(merged, 2u);
}

TEST(KinkDetector, FindsSyntheticKinks) {
  const double dz = 0.001;
  std::vector<double> h;
  for (int i = 0; i <= 2000; ++i) {
    const double z = i * dz;
    h.push_back(std::sin(z) + 0.3 * std::abs(z - 0.5) + 0.2 * std::max(0.0, z - 1.4));
  }
  const auto idx = detect_kinks(h, dz);
  ASSERT_EQ(idx.size(), 2u);
  EXPECT_NEAR(idx[0] * dz, 0.5, 2 * dz);
  EXPECT_NEAR(idx[1] * dz, 1.4, 2 * dz);
}

TEST(KinkDetector, QuietOnSmoothInput) {
  std::vector<double> h;
  for (int i = 0; i <= 2000; ++i) h.push_back(std::exp(-i * 0.002) * std::cos(i * 0.004));
  EXPECT_TRUE(detect_kinks(h, 0.002).empty());
}
