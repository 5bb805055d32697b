#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "wfarey/errors.hpp"
#include "wfarey/section.hpp"

using namespace wfarey;

namespace {

Rational R(std::int64_t p, std::int64_t q = 1) { return Rational(BigInt(p), BigInt(q)); }

Unit fixture(const std::string& name) { return load_unit(std::string(WFAREY_DATA_DIR) + "/" + name); }

const LimitLaw& example_law() {
  static const LimitLaw law(fixture("example1.unit"));
  return law;
}

const std::vector<LimitSample>& example_sample() {
  static const auto s = sample_limit_P(example_law(), 1'000'000, 20240611);
  return s;
}

}  // namespace

TEST(ReturnPairs, ClassicalOrderThree) {
  const auto f = brute_force_farey(Unit::constant(1), R(3));
  const auto proc = return_pairs(f);
  ASSERT_EQ(proc.pairs.size(), 4u);
  const double expect[4][2] = {{1.0, 1.0 / 3}, {2.0 / 3, 1.0}, {1.0, 2.0 / 3}, {1.0 / 3, 1.0}};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(proc.pairs[i].c, expect[i][0]) << i;
    EXPECT_DOUBLE_EQ(proc.pairs[i].d, expect[i][1]) << i;
  }
  EXPECT_EQ(proc.pairs[0].c_exact(R(3)), R(1));
  EXPECT_EQ(proc.pairs[0].d_exact(R(3)), R(1, 3));
}

TEST(ReturnPairs, RefusesNonUnimodularSequence) {
  EXPECT_THROW(return_pairs(brute_force_farey(fixture("steep.unit"), R(5))), NotUnimodularError);
  EXPECT_NO_THROW(return_pairs(brute_force_farey(fixture("steep.unit"), R(11))));
}

TEST(ReturnPairs, GapIdentityAndContainment) {
  for (const char* name : {"example1.unit", "steep.unit", "one.unit"}) {
    const Unit u = fixture(name);
    for (std::int64_t Q : {11, 60, 237}) {
      const auto f = generate_farey(u, R(Q));
      const auto proc = return_pairs(f);
      EXPECT_EQ(gap_identity_failures(f, proc), 0u) << name << " " << Q;
      const auto rep = containment_check(u, f, proc);
      EXPECT_TRUE(rep.ok()) << name << " " << Q;
      EXPECT_EQ(rep.pairs, f.size());
    }
  }
}

TEST(Hits, LatticeReconstruction) {
  for (const char* name : {"one.unit", "example1.unit"}) {
    const Unit u = fixture(name);
    for (std::int64_t Q : {5, 40}) {
      const auto rep = verify_hits(u, generate_farey(u, R(Q)));
      EXPECT_TRUE(rep.ok()) << name << " " << Q;
      EXPECT_GT(rep.hits, 0u);
    }
  }
}

TEST(Hits, NextLiftIsNeverAdmissible) {
  const Unit u = fixture("example1.unit");
  const Rational Q(57);
  const auto f = generate_farey(u, Q);
  const auto proc = return_pairs(f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Rational c = proc.pairs[i].c_exact(Q), d = proc.pairs[i].d_exact(Q);
    ASSERT_TRUE(lift_admissible(u, Q, f.points[i], c, d)) << i;
    ASSERT_FALSE(lift_admissible(u, Q, f.points[i], c + d, d)) << i;
  }
  EXPECT_FALSE(lift_admissible(u, Q, R(0), R(0), R(1)));
}

TEST(Pentagon, GeometryOfExample) {
  const Pentagon pent = Pentagon::of(example_law().derived());
  EXPECT_DOUBLE_EQ(pent.l, 25.0 / 33.0);
  EXPECT_DOUBLE_EQ(pent.L, 2.0);
  EXPECT_TRUE(pent.contains(1.0, 1.0));
  EXPECT_FALSE(pent.contains(0.3, 0.3));
  EXPECT_FALSE(pent.contains(2.1, 0.5));
  EXPECT_DOUBLE_EQ(pent.area(), 4.0 - pent.l * pent.l / 2);
}

TEST(Pentagon, HallTriangleDensity) {
  const LimitLaw law(Unit::constant(1));
  const Pentagon pent = Pentagon::of(law.derived());
  EXPECT_NEAR(pentagon_density(pent, law, 0.6, 0.7), 2.0, 1e-12);
  EXPECT_NEAR(pentagon_density(pent, law, 0.9, 0.2), 2.0, 1e-12);
  EXPECT_EQ(pentagon_density(pent, law, 0.3, 0.4), 0.0);
  EXPECT_EQ(pentagon_density(pent, law, 1.2, 0.4), 0.0);
}

TEST(Pentagon, DensityVanishesOutside) {
  const LimitLaw& law = example_law();
  const Pentagon pent = Pentagon::of(law.derived());
  EXPECT_EQ(pentagon_density(pent, law, pent.L + 0.1, pent.L + 0.1), 0.0);
  EXPECT_EQ(pentagon_density(pent, law, 0.2, 0.2), 0.0);
  EXPECT_GT(pentagon_density(pent, law, 0.9, 0.9), 0.0);
}

TEST(Pentagon, DensityNormalizedWithUnitMeanZ) {
  for (const char* name : {"one.unit", "steep.unit"}) {
    const LimitLaw law(fixture(name));
    const double C = law.derived().C;
    EXPECT_NEAR(integrate_against_p(law, [](double, double) { return 1.0; }), 1.0, 1e-6) << name;
    EXPECT_NEAR(integrate_against_p(law, [C](double x, double y) { return z_value(C, x, y); }), 1.0, 1e-6) << name;
  }
}

TEST(Pentagon, ZDistributionMatchesLaw) {
  const LimitLaw& law = example_law();
  for (double z : {0.3, 0.9, 1.6}) EXPECT_NEAR(z_cdf_from_density(law, z), law.cdf(z), 1e-6) << z;
}

TEST(ZValue, Examples) {
  EXPECT_DOUBLE_EQ(z_value(1.0, 1.0, 1.0), 3.0 / (std::numbers::pi * std::numbers::pi));
  EXPECT_DOUBLE_EQ(z_value(2.0, 0.5, 2.0), 2.0 / kTwoZeta2);
  const auto proc = return_pairs(brute_force_farey(Unit::constant(1), R(3)));
  const auto zs = z_values(proc, 1.0);
  ASSERT_EQ(zs.size(), 4u);
  EXPECT_DOUBLE_EQ(zs[0], 3.0 / kTwoZeta2);  // Q^2 gap / (2 zeta 2) with gap 1/3
}

TEST(BoxMass, TotalsAndAdditivity) {
  const LimitLaw& law = example_law();
  EXPECT_NEAR(box_mass(law, 0.0, 2.5, 0.0, 2.5), 1.0, 1e-9);
  const double whole = box_mass(law, 0.4, 1.3, 0.2, 1.1);
  const double split = box_mass(law, 0.4, 0.8, 0.2, 1.1) + box_mass(law, 0.8, 1.3, 0.2, 0.5) +
                       box_mass(law, 0.8, 1.3, 0.5, 1.1);
  EXPECT_NEAR(whole, split, 1e-10);
  EXPECT_NEAR(box_mass(law, 0.0, 0.2, 0.0, 0.2), 0.0, 1e-15);
  // symmetric in x and y
  EXPECT_NEAR(box_mass(law, 0.3, 0.9, 1.0, 1.4), box_mass(law, 1.0, 1.4, 0.3, 0.9), 1e-12);
}

TEST(BoxMass, AgreesWithDensityQuadrature) {
  const LimitLaw& law = example_law();
  // A smooth bump integrated against p versus the same bump summed over
  // a fine grid of boxes at cell centers.
  auto g = [](double x, double y) { return std::exp(-(x - 1) * (x - 1) - (y - 0.8) * (y - 0.8)); };
  const double direct = integrate_against_p(law, g);
  const int n = 60;
  const double h = 2.0 / n;
  double grid = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) grid += g((i + 0.5) * h, (j + 0.5) * h) * box_mass(law, i * h, (i + 1) * h, j * h, (j + 1) * h);
  EXPECT_NEAR(direct, grid, 2e-3);
}

TEST(Sampler, DeterministicPerIndex) {
  const LimitLaw& law = example_law();
  const auto a = sample_limit_P(law, 1000, 5);
  const auto b = sample_limit_P(law, 3000, 5);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].x, b[i].x);
    ASSERT_EQ(a[i].y, b[i].y);
    ASSERT_EQ(a[i].s, b[i].s);
  }
  EXPECT_NE(sample_limit_P(law, 1, 6)[0].x, a[0].x);
}

TEST(Sampler, SupportAndMoments) {
  const LimitLaw& law = example_law();
  const Pentagon pent = Pentagon::of(law.derived());
  const auto& sample = example_sample();
  const double C = law.derived().C;
  double sz = 0, sz2 = 0, sx = 0, sx2 = 0;
  for (const auto& d : sample) {
    const double v = 1.0 / law.unit().eval(d.s);
    ASSERT_TRUE(pent.contains(d.x, d.y, 1e-12));
    ASSERT_LE(std::max(d.x, d.y), v + 1e-12);
    ASSERT_GT(d.x + d.y, v - 1e-12);
    const double z = z_value(C, d.x, d.y);
    sz += z, sz2 += z * z, sx += d.x, sx2 += d.x * d.x;
  }
  const double n = static_cast<double>(sample.size());
  const double mz = sz / n, se_z = std::sqrt((sz2 / n - mz * mz) / n);
  EXPECT_LE(std::abs(mz - 1.0), 3 * se_z);
  const double mx = sx / n, se_x = std::sqrt((sx2 / n - mx * mx) / n);
  const double centroid = integrate_against_p(law, [](double x, double) { return x; });
  EXPECT_LE(std::abs(mx - centroid), 3 * se_x);
}

TEST(Sampler, BoxFrequencies) {
  const LimitLaw& law = example_law();
  const auto& sample = example_sample();
  const double boxes[3][4] = {{0.5, 1.0, 0.5, 1.0}, {0.0, 0.6, 0.6, 2.0}, {1.0, 2.0, 0.0, 0.5}};
  for (const auto& b : boxes) {
    std::size_t hits = 0;
    for (const auto& d : sample) hits += d.x >= b[0] && d.x < b[1] && d.y >= b[2] && d.y < b[3];
    const double p = box_mass(law, b[0], b[1], b[2], b[3]);
    const double n = static_cast<double>(sample.size());
    EXPECT_LE(std::abs(hits / n - p), 4 * std::sqrt(p * (1 - p) / n)) << b[0] << " " << b[2];
  }
}

TEST(Tabulated, MatchesExactCdf) {
  const LimitLaw& law = example_law();
  const TabulatedCdf tab = tabulate_weighted_cdf(law);
  for (double z = 0.01; z < 5.0; z += 0.0731) EXPECT_NEAR(tab(z), law.cdf(z), 1e-8) << z;
}

TEST(Convergence, ReportAtModerateOrder) {
  const LimitLaw& law = example_law();
  const Pentagon pent = Pentagon::of(law.derived());
  const auto f = generate_farey(law.unit(), R(400));
  const auto rep = convergence_report(return_pairs(f), law, pent, 10);
  EXPECT_EQ(rep.pairs, f.size());
  EXPECT_DOUBLE_EQ(rep.containment_fraction, 1.0);
  EXPECT_LT(rep.ks_z, 0.01);
  EXPECT_LT(rep.discrepancy_max, 0.01);
  EXPECT_EQ(rep.bins, 10u);
}

TEST(Statistics, KsAndHistogram) {
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back((i + 0.5) / 1000);
  EXPECT_NEAR(ks_distance(xs, [](double x) { return std::clamp(x, 0.0, 1.0); }), 0.0005, 1e-12);
  const auto hist = histogram(xs, 0.0, 0.5, 5);
  EXPECT_EQ(hist.above, 500u);
  for (double d : hist.density) EXPECT_NEAR(d, 1.0, 1e-12);
  const auto pts = ecdf_points(xs, 11);
  ASSERT_EQ(pts.size(), 11u);
  EXPECT_DOUBLE_EQ(pts.back().second, 1.0);
}
