#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wfarey/farey.hpp"
#include "wfarey/limit_law.hpp"
#include "wfarey/stats.hpp"

namespace wfarey {

/// (c_i, d_i) = (q_{i+1}, q_i) / Q, with q_n = 1 from the appended 1/1.
struct ReturnPair {
  std::int64_t q_next = 0;
  std::int64_t q_curr = 0;
  double c = 0.0;
  double d = 0.0;

  Rational c_exact(const Rational& Q) const { return Rational(q_next) / Q; }
  Rational d_exact(const Rational& Q) const { return Rational(q_curr) / Q; }
};

struct ReturnProcess {
  std::string unit_hash;
  Rational order_Q;
  std::vector<ReturnPair> pairs;
};

/// Throws NotUnimodularError if some consecutive pair (1/1 appended) is not unimodular.
ReturnProcess return_pairs(const FareySequence& f);

/// Number of i where s_{i+1} - s_i != 1/(Q^2 c_i d_i), evaluated exactly.
std::size_t gap_identity_failures(const FareySequence& f, const ReturnProcess& proc);

struct ContainmentReport {
  std::size_t pairs = 0;
  std::size_t d_above_v = 0;        // d_i > v(s_i)
  std::size_t c_above_v = 0;        // c_i > v(s_{i+1})
  std::size_t sum_below_mediant = 0;  // c_i + d_i <= v(mediant)

  bool ok() const noexcept { return d_above_v == 0 && c_above_v == 0 && sum_below_mediant == 0; }
};

/// The three exact inequalities placing each pair in the closed pentagon.
ContainmentReport containment_check(const Unit& u, const FareySequence& f, const ReturnProcess& proc);

/// Whether c > 0 and c <= v(s + 1/(Q^2 c d)), the admissibility test for a
/// lift c of the hit at s with vertical vector (0, d). Exact.
bool lift_admissible(const Unit& u, const Rational& Q, const Rational& s, const Rational& c, const Rational& d);

struct HitMismatch {
  std::size_t index = 0;
  std::string reason;
};

struct HitReport {
  std::size_t hits = 0;
  std::vector<HitMismatch> mismatches;

  bool ok() const noexcept { return mismatches.empty(); }
};

/// Rebuilds every hit from the lattice: shears the basis by t_i = Q^2 s_i,
/// checks for the vertical vector (0, q_i/Q) below v(s_i), selects the lift
/// by testing c and c + d, and compares with return_pairs.
HitReport verify_hits(const Unit& u, const FareySequence& f);

/// Omega = {0 < x, y <= L} with x + y > l.
struct Pentagon {
  double l = 0.0;
  double L = 0.0;

  static Pentagon of(const UnitDerived& d) { return {d.l, d.L}; }
  bool contains(double x, double y, double eps = 0.0) const {
    return x > -eps && y > -eps && x <= L + eps && y <= L + eps && x + y > l - eps;
  }
  double area() const { return L * L - l * l / 2.0; }
};

/// p(x, y) = (2/C) lambda{s : max(x, y) <= v(s) < x + y}.
double pentagon_density(const Pentagon& pent, const LimitLaw& law, double x, double y);

/// int int g(x, y) p(x, y) dx dy by nested adaptive quadrature. `hyperbolas`
/// lists kappa for every curve x y = kappa across which g jumps.
double integrate_against_p(const LimitLaw& law, const std::function<double(double, double)>& g,
                           const std::vector<double>& hyperbolas = {}, double tol = 1e-8);

/// P(Z <= z) computed from p.
double z_cdf_from_density(const LimitLaw& law, double z, double tol = 1e-8);

/// Exact P-mass of [x0, x1) x [y0, y1), from P = int P_{v(s)} m(s) ds.
double box_mass(const LimitLaw& law, double x0, double x1, double y0, double y1);

/// Z = C / (2 zeta(2) x y).
double z_value(double C, double x, double y);

struct LimitSample {
  double s = 0.0;
  double x = 0.0;
  double y = 0.0;
};

/// Draws from P: s with density m, then (x, y) uniform on the triangle
/// {x, y <= v(s) < x + y}. Draw k depends only on (seed, k).
std::vector<LimitSample> sample_limit_P(const LimitLaw& law, std::size_t count, std::uint64_t seed);

/// H_u tabulated at the kinks and a uniform grid, exact outside the grid.
TabulatedCdf tabulate_weighted_cdf(const LimitLaw& law, std::size_t nodes = 1500);

struct ConvergenceReport {
  std::size_t pairs = 0;
  double ks_z = 0.0;
  double discrepancy_max = 0.0;
  double discrepancy_l1 = 0.0;
  std::size_t bins = 0;
  double containment_fraction = 0.0;
  double eps = 0.0;
};

ConvergenceReport convergence_report(const ReturnProcess& proc, const LimitLaw& law, const Pentagon& pent,
                                     std::size_t bins, double eps = 1e-12);

/// Normalized Z values of the pairs.
std::vector<double> z_values(const ReturnProcess& proc, double C);

}  // namespace wfarey
