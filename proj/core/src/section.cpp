#include "wfarey/section.hpp"

#include <algorithm>
#include <cmath>

#include "wfarey/errors.hpp"

namespace wfarey {

namespace {

__extension__ typedef __int128 i128;

std::int64_t small(const BigInt& x) { return x.convert_to<std::int64_t>(); }

const Rational& point_or_one(const FareySequence& f, std::size_t i, const Rational& one) {
  return i < f.points.size() ? f.points[i] : one;
}

double ramp2(double t) { return t > 0.0 ? 0.5 * t * t : 0.0; }

// Area of [x0, x1] x [y0, y1] inside the triangle {x, y <= w < x + y}.
double box_triangle_area(double x0, double x1, double y0, double y1, double w) {
  const double X1 = std::min(x1, w);
  const double Y1 = std::min(y1, w);
  if (X1 <= x0 || Y1 <= y0) return 0.0;
  const double below = ramp2(w - x0 - y0) - ramp2(w - X1 - y0) - ramp2(w - x0 - Y1) + ramp2(w - X1 - Y1);
  return (X1 - x0) * (Y1 - y0) - below;
}

// Values of v at which the pushforward distribution function can kink.
std::vector<double> v_breaks(const UnitDerived& d) {
  std::vector<double> w{d.l, d.L};
  for (const auto& mp : d.monotone_pieces) {
    w.push_back(mp.v_from);
    w.push_back(mp.v_to);
  }
  std::sort(w.begin(), w.end());
  std::vector<double> out;
  for (double x : w)
    if (out.empty() || x - out.back() > 1e-14 * x) out.push_back(x);
  return out;
}

struct SplitMix64 {
  std::uint64_t state;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace

ReturnProcess return_pairs(const FareySequence& f) {
  ReturnProcess proc;
  proc.unit_hash = f.unit_hash;
  proc.order_Q = f.order_Q;
  proc.pairs.reserve(f.points.size());
  const double Qd = f.order_Q.to_double();
  const Rational one(1);
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    const Rational& a = f.points[i];
    const Rational& b = point_or_one(f, i + 1, one);
    const std::int64_t pa = small(a.num()), qa = small(a.den()), pb = small(b.num()), qb = small(b.den());
    if (static_cast<i128>(pb) * qa - static_cast<i128>(pa) * qb != 1) {
      throw NotUnimodularError("gap " + std::to_string(i) + " (" + a.to_string() + ", " + b.to_string() +
                               ") is not unimodular; the order is below the unimodularity threshold");
    }
    proc.pairs.push_back(ReturnPair{qb, qa, static_cast<double>(qb) / Qd, static_cast<double>(qa) / Qd});
  }
  return proc;
}

std::size_t gap_identity_failures(const FareySequence& f, const ReturnProcess& proc) {
  if (proc.pairs.size() != f.points.size()) throw DomainError("process and sequence lengths differ");
  const Rational& Q = f.order_Q;
  const Rational Q2 = Q * Q;
  const Rational one(1);
  std::size_t bad = 0;
  for (std::size_t i = 0; i < proc.pairs.size(); ++i) {
    const Rational gap = point_or_one(f, i + 1, one) - f.points[i];
    const Rational cd = proc.pairs[i].c_exact(Q) * proc.pairs[i].d_exact(Q);
    if (gap != (Q2 * cd).reciprocal()) ++bad;
  }
  return bad;
}

ContainmentReport containment_check(const Unit& u, const FareySequence& f, const ReturnProcess& proc) {
  if (proc.pairs.size() != f.points.size()) throw DomainError("process and sequence lengths differ");
  const DenominatorTest member(u, f.order_Q);
  const Rational one(1);
  ContainmentReport rep;
  for (std::size_t i = 0; i < proc.pairs.size(); ++i) {
    const Rational& a = f.points[i];
    const Rational& b = point_or_one(f, i + 1, one);
    ++rep.pairs;
    // d <= v(s)  <=>  u(s) q <= Q
    if (!member(a.num(), a.den())) ++rep.d_above_v;
    if (!member(b.num(), b.den())) ++rep.c_above_v;
    if (member(BigInt(a.num() + b.num()), BigInt(a.den() + b.den()))) ++rep.sum_below_mediant;
  }
  return rep;
}

bool lift_admissible(const Unit& u, const Rational& Q, const Rational& s, const Rational& c, const Rational& d) {
  if (c.sign() <= 0 || d.sign() <= 0) return false;
  const Rational next = s + (Q * Q * c * d).reciprocal();
  if (Rational(1) < next) return false;
  return u.eval(next) * c <= Rational(1);
}

HitReport verify_hits(const Unit& u, const FareySequence& f) {
  HitReport rep;
  const Rational& Q = f.order_Q;
  const Rational Q2 = Q * Q;
  const Rational one(1);
  const Rational c_cap = u.min_lower().reciprocal();
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    ++rep.hits;
    auto fail = [&](std::string why) { rep.mismatches.push_back({i, std::move(why)}); };
    const Rational& a = f.points[i];
    const Rational& b = point_or_one(f, i + 1, one);

    // Basis columns of the lattice at this order.
    const Rational b1x = Q * Rational(b.num()), b1y = Rational(b.den()) / Q;
    const Rational b2x = Q * Rational(a.num()), b2y = Rational(a.den()) / Q;
    if (b1x * b2y - b2x * b1y != one) {
      fail("basis determinant is not 1");
      continue;
    }

    const Rational t = Q2 * a;
    const Rational v2x = b2x - t * b2y;
    if (!v2x.is_zero()) {
      fail("sheared lattice has no vertical vector at t_i");
      continue;
    }
    const Rational d = b2y;
    if (u.eval(a) * d > one) fail("vertical vector lies above v(s_i)");

    const Rational v1x = b1x - t * b1y;
    if (v1x != d.reciprocal()) fail("horizontal period is not 1/d");

    // Candidates c in b1y + d Z; keep the largest admissible one.
    Rational c = b1y - d * Rational((b1y / d).ceil() - 1);
    std::optional<Rational> best;
    for (; c <= c_cap; c += d)
      if (lift_admissible(u, Q, a, c, d)) best = c;
    if (!best) {
      fail("no admissible lift");
      continue;
    }
    if (lift_admissible(u, Q, a, *best + d, d)) fail("lift c + d is admissible");
    if (*best != b1y || d != Rational(a.den()) / Q) {
      fail("lattice lift " + best->to_string() + " differs from q_{i+1}/Q = " + b1y.to_string());
    }
    if (t + (*best * d).reciprocal() != Q2 * b) fail("next hit time does not match s_{i+1}");
  }
  return rep;
}

double pentagon_density(const Pentagon& pent, const LimitLaw& law, double x, double y) {
  if (!(x > 0.0 && y > 0.0) || !pent.contains(x, y)) return 0.0;
  const auto& d = law.derived();
  return 2.0 / d.C * pushforward_mass(d, law.unit(), std::max(x, y), x + y);
}

double integrate_against_p(const LimitLaw& law, const std::function<double(double, double)>& g,
                           const std::vector<double>& hyperbolas, double tol) {
  const auto& d = law.derived();
  const Pentagon pent = Pentagon::of(d);
  const std::vector<double> W = v_breaks(d);
  const double L = d.L;

  std::vector<double> xk;
  for (double w : W) {
    xk.push_back(w);
    xk.push_back(w / 2);
    for (double w2 : W) xk.push_back(w - w2);
  }
  for (double k : hyperbolas) {
    xk.push_back(std::sqrt(k));
    for (double w : W) {
      xk.push_back(k / w);
      const double disc = w * w - 4 * k;
      if (disc >= 0) {
        xk.push_back((w - std::sqrt(disc)) / 2);
        xk.push_back((w + std::sqrt(disc)) / 2);
      }
    }
  }
  const double inner_tol = tol * 1e-2;
  auto inner = [&](double x) {
    std::vector<double> yk{x};
    for (double w : W) {
      yk.push_back(w);
      yk.push_back(w - x);
    }
    for (double k : hyperbolas) yk.push_back(k / x);
    auto f = [&](double y) {
      const double p = pentagon_density(pent, law, x, y);
      return p == 0.0 ? 0.0 : p * g(x, y);
    };
    return integrate(QuadratureRequest{f, 0.0, L, clean_knots(std::move(yk), 0.0, L), inner_tol,
                                       kDefaultMaxSubdivisions})
        .value;
  };
  return integrate(QuadratureRequest{inner, 0.0, L, clean_knots(std::move(xk), 0.0, L), tol, kDefaultMaxSubdivisions})
      .value;
}

double z_value(double C, double x, double y) { return C / (kTwoZeta2 * x * y); }

double z_cdf_from_density(const LimitLaw& law, double z, double tol) {
  if (z <= 0.0) return 0.0;
  const double kappa = law.derived().C / (kTwoZeta2 * z);
  auto g = [kappa](double x, double y) { return x * y >= kappa ? 1.0 : 0.0; };
  return integrate_against_p(law, g, {kappa}, tol);
}

double box_mass(const LimitLaw& law, double x0, double x1, double y0, double y1) {
  const auto& d = law.derived();
  const Unit& u = law.unit();
  x0 = std::max(x0, 0.0);
  y0 = std::max(y0, 0.0);
  if (!(x1 > x0 && y1 > y0)) return 0.0;
  std::vector<double> knots = d.knots();
  for (double w : {x0, x1, y0, y1, x0 + y0, x1 + y0, x0 + y1, x1 + y1}) {
    const auto s = v_level_crossings(d, u, w);
    knots.insert(knots.end(), s.begin(), s.end());
  }
  auto f = [&](double s) { return box_triangle_area(x0, x1, y0, y1, 1.0 / u.eval_clamped(s)); };
  const double area = integrate(QuadratureRequest{f, 0.0, 1.0, clean_knots(std::move(knots), 0.0, 1.0), 1e-13,
                                                  kDefaultMaxSubdivisions})
                          .value;
  return 2.0 / d.C * area;
}

std::vector<LimitSample> sample_limit_P(const LimitLaw& law, std::size_t count, std::uint64_t seed) {
  const auto& d = law.derived();
  const Unit& u = law.unit();

  // Cumulative M(s) = int_0^s m on a fine grid; Hermite in between.
  constexpr std::size_t kGrid = 4096;
  std::vector<double> nodes = d.knots();
  for (std::size_t k = 0; k <= kGrid; ++k) nodes.push_back(static_cast<double>(k) / kGrid);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  auto m = [&](double s) { return d.m(u, s); };
  std::vector<double> M(nodes.size(), 0.0), dM(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    dM[k] = m(nodes[k]);
    if (k > 0) M[k] = M[k - 1] + integrate(m, nodes[k - 1], nodes[k], {}, 1e-15);
  }
  const double total = M.back();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    M[k] /= total;
    dM[k] /= total;
  }
  auto inverse = [&](double U) {
    const auto it = std::upper_bound(M.begin(), M.end(), U);
    std::size_t j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - M.begin(), 1)) - 1;
    j = std::min(j, nodes.size() - 2);
    const double s0 = nodes[j], h = nodes[j + 1] - s0;
    auto H = [&](double s) {
      const double t = (s - s0) / h, t2 = t * t, t3 = t2 * t;
      return (2 * t3 - 3 * t2 + 1) * M[j] + (t3 - 2 * t2 + t) * h * dM[j] + (-2 * t3 + 3 * t2) * M[j + 1] +
             (t3 - t2) * h * dM[j + 1];
    };
    return invert_monotone(H, s0, nodes[j + 1], std::clamp(U, M[j], M[j + 1]));
  };

  std::vector<LimitSample> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    SplitMix64 rng{seed ^ (0xd1b54a32d192ed03ULL * (static_cast<std::uint64_t>(k) + 1))};
    rng.next();
    LimitSample& smp = out[k];
    smp.s = inverse(rng.uniform());
    const double w = 1.0 / u.eval_clamped(smp.s);
    do {
      smp.x = w * rng.uniform();
      smp.y = w * rng.uniform();
    } while (!(smp.x + smp.y > w));
  }
  return out;
}

TabulatedCdf tabulate_weighted_cdf(const LimitLaw& law, std::size_t nodes) {
  const auto kinks = law.kink_values();
  const double lo = kinks.front();
  const double hi = 3.0 * kinks.back();
  std::vector<double> z = kinks;
  for (std::size_t k = 0; k <= nodes; ++k) z.push_back(lo + (hi - lo) * static_cast<double>(k) / nodes);
  z.push_back(hi);
  return TabulatedCdf::build([&](double x) { return law.cdf(x); }, [&](double x) { return law.pdf(x); }, std::move(z),
                             [&law](double x) { return law.cdf(x); });
}

std::vector<double> z_values(const ReturnProcess& proc, double C) {
  std::vector<double> z;
  z.reserve(proc.pairs.size());
  for (const auto& p : proc.pairs) z.push_back(z_value(C, p.c, p.d));
  return z;
}

ConvergenceReport convergence_report(const ReturnProcess& proc, const LimitLaw& law, const Pentagon& pent,
                                     std::size_t bins, double eps) {
  if (proc.pairs.empty()) throw DomainError("convergence report of an empty process");
  if (bins == 0) throw DomainError("need at least one bin");
  ConvergenceReport rep;
  rep.pairs = proc.pairs.size();
  rep.bins = bins;
  rep.eps = eps;

  const TabulatedCdf H = tabulate_weighted_cdf(law);
  rep.ks_z = ks_distance(z_values(proc, law.derived().C), [&H](double z) { return H(z); });

  const double L = pent.L;
  const double w = L / static_cast<double>(bins);
  std::vector<double> counts(bins * bins, 0.0);
  std::size_t inside = 0;
  for (const auto& p : proc.pairs) {
    if (pent.contains(p.c, p.d, eps)) ++inside;
    const auto ix = std::min(bins - 1, static_cast<std::size_t>(std::max(0.0, p.c / w)));
    const auto iy = std::min(bins - 1, static_cast<std::size_t>(std::max(0.0, p.d / w)));
    counts[ix * bins + iy] += 1.0;
  }
  const double n = static_cast<double>(rep.pairs);
  for (std::size_t ix = 0; ix < bins; ++ix) {
    for (std::size_t iy = 0; iy < bins; ++iy) {
      const double x0 = ix * w, y0 = iy * w;
      const double expected = box_mass(law, x0, ix + 1 == bins ? L : x0 + w, y0, iy + 1 == bins ? L : y0 + w);
      const double diff = std::abs(counts[ix * bins + iy] / n - expected);
      rep.discrepancy_max = std::max(rep.discrepancy_max, diff);
      rep.discrepancy_l1 += diff;
    }
  }
  rep.containment_fraction = static_cast<double>(inside) / n;
  return rep;
}

}  // namespace wfarey
