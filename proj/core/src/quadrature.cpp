#include "wfarey/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "wfarey/errors.hpp"

namespace wfarey {

namespace {

// Kronrod 15-point abscissae (xgk) and weights; the odd-indexed abscissae
// are the 7-point Gauss nodes with weights wg.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  std::size_t segment = 0;
};

// Maps t in [0, 1] onto a knot-split segment [lo, hi], flattening the map at
// ends that sit on a forced knot. A square-root or x^(3/2) kink at the knot
// becomes smooth in t, so the panel needs no refinement toward it.
struct Segment {
  double lo;
  double hi;
  bool left_knot;
  bool right_knot;

  double operator()(const RealFn& f, double t) const {
    const double w = hi - lo;
    double phi = t, dphi = 1.0;
    if (left_knot && right_knot) {
      phi = t * t * (3.0 - 2.0 * t);
      dphi = 6.0 * t * (1.0 - t);
    } else if (left_knot) {
      phi = t * t;
      dphi = 2.0 * t;
    } else if (right_knot) {
      const double r = 1.0 - t;
      phi = 1.0 - r * r;
      dphi = 2.0 * r;
    }
    double s = lo + w * phi;
    if (s <= lo) s = std::nextafter(lo, hi);
    if (s >= hi) s = std::nextafter(hi, lo);
    return f(s) * w * dphi;
  }
};

Panel gauss_kronrod(const RealFn& f, double a, double b, long& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::abs(resk);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    const double w = kWgk[static_cast<std::size_t>(j)];
    resk += w * (f1 + f2);
    resabs += w * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[static_cast<std::size_t>(j / 2)] * (f1 + f2);
  }
  evals += 15;
  const double value = resk * half;
  double err = std::abs((resk - resg) * half);
  // Roundoff floor relative to the panel's absolute mass.
  err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * resabs * std::abs(half));
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << "non-finite integrand on panel [" << a << ", " << b << "] of the segment map";
    throw QuadratureError(os.str(), value, std::numeric_limits<double>::infinity());
  }
  return {a, b, value, err};
}

}  // namespace

std::vector<double> clean_knots(std::vector<double> knots, double a, double b) {
  std::sort(knots.begin(), knots.end());
  std::vector<double> out;
  const double scale = std::max({std::abs(a), std::abs(b), 1.0});
  const double eps = 1e-15 * scale;
  for (double k : knots) {
    if (!std::isfinite(k) || k <= a + eps || k >= b - eps) continue;
    if (!out.empty() && k - out.back() <= eps) continue;
    out.push_back(k);
  }
  return out;
}

double kronrod15(const RealFn& f, double a, double b) {
  long evals = 0;
  return gauss_kronrod(f, a, b, evals).value;
}

QuadratureResult integrate(const QuadratureRequest& req) {
  QuadratureResult res;
  if (req.b == req.a) return res;
  if (req.b < req.a) throw DomainError("integration bounds out of order");

  auto by_error = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(by_error)> active(by_error);
  std::vector<Panel> settled;
  double total_error = 0.0;

  std::vector<double> edges{req.a};
  for (double k : clean_knots(req.forced_knots, req.a, req.b)) edges.push_back(k);
  edges.push_back(req.b);
  const std::size_t nseg = edges.size() - 1;
  // Panels live in the t coordinate of their segment.
  std::vector<RealFn> mapped;
  mapped.reserve(nseg);
  for (std::size_t i = 0; i < nseg; ++i) {
    const Segment seg{edges[i], edges[i + 1], i > 0, i + 1 < nseg};
    mapped.push_back([seg, &f = req.integrand](double t) { return seg(f, t); });
  }
  auto panel = [&](std::size_t seg, double a, double b) {
    Panel p = gauss_kronrod(mapped[seg], a, b, res.evaluations);
    p.segment = seg;
    return p;
  };
  for (std::size_t i = 0; i < nseg; ++i) {
    Panel p = panel(i, 0.0, 1.0);
    total_error += p.error;
    active.push(p);
  }

  int splits = 0;
  while (total_error > req.tol && !active.empty()) {
    Panel worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) || splits >= req.max_subdivisions) {
      // Cannot refine further; keep it and stop once nothing else helps.
      settled.push_back(worst);
      if (splits >= req.max_subdivisions) break;
      continue;
    }
    ++splits;
    Panel left = panel(worst.segment, worst.a, mid);
    Panel right = panel(worst.segment, mid, worst.b);
    total_error += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
    // Guard against drift in the running error sum.
    if (splits % 256 == 0) {
      double t = 0.0;
      auto copy = active;
      while (!copy.empty()) {
        t += copy.top().error;
        copy.pop();
      }
      for (const auto& s : settled) t += s.error;
      total_error = t;
    }
  }

  while (!active.empty()) {
    settled.push_back(active.top());
    active.pop();
  }
  std::sort(settled.begin(), settled.end(), [](const Panel& x, const Panel& y) {
    return x.segment != y.segment ? x.segment < y.segment : x.a < y.a;
  });
  CompensatedSum value;
  CompensatedSum error;
  for (const auto& p : settled) {
    value.add(p.value);
    error.add(p.error);
  }
  res.value = value.value();
  res.error_bound = error.value();
  res.panels = static_cast<int>(settled.size());
  if (res.error_bound > req.tol) {
    std::ostringstream os;
    os << "quadrature on [" << req.a << ", " << req.b << "] did not reach tol " << req.tol
       << " (error bound " << res.error_bound << " after " << splits << " subdivisions)";
    throw QuadratureError(os.str(), res.value, res.error_bound);
  }
  return res;
}

double integrate(const RealFn& f, double a, double b, std::vector<double> knots, double tol) {
  return integrate(QuadratureRequest{f, a, b, std::move(knots), tol, kDefaultMaxSubdivisions}).value;
}

double invert_monotone(const RealFn& f, double a, double b, double target, double tol) {
  if (b < a) std::swap(a, b);
  const double fa = f(a) - target;
  const double fb = f(b) - target;
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) {
    std::ostringstream os;
    os << "target " << target << " outside the range [" << std::min(fa, fb) + target << ", "
       << std::max(fa, fb) + target << "] of the function on [" << a << ", " << b << "]";
    throw DomainError(os.str());
  }
  auto g = [&](double s) { return f(s) - target; };
  auto narrow = [tol](double lo, double hi) { return std::abs(hi - lo) <= tol; };
  std::uintmax_t max_iter = 400;
  auto [lo, hi] = boost::math::tools::toms748_solve(g, a, b, fa, fb, narrow, max_iter);
  return 0.5 * (lo + hi);
}

}  // namespace wfarey
