#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace wfarey {

/// Piecewise-cubic Hermite interpolant of a distribution function from
/// values and derivatives at the nodes. Outside the node range it defers
/// to `fallback` (when given) or clamps to the end values.
class TabulatedCdf {
 public:
  TabulatedCdf(std::vector<double> nodes, std::vector<double> values, std::vector<double> slopes,
               std::function<double(double)> fallback = {});

  /// Samples F and f at `nodes` (sorted, deduplicated first).
  static TabulatedCdf build(const std::function<double(double)>& F, const std::function<double(double)>& f,
                            std::vector<double> nodes, std::function<double(double)> fallback = {});

  double operator()(double z) const;

 private:
  std::vector<double> x_, y_, d_;
  std::function<double(double)> fallback_;
};

/// sup |F_n - F| for a sample; the sample is copied and sorted.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Equal-width histogram of `sample` over [lo, hi) normalized as a density
/// (the values integrate to the in-range fraction).
struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> density;
  std::size_t below = 0;
  std::size_t above = 0;

  double width() const { return (hi - lo) / static_cast<double>(density.size()); }
  double center(std::size_t k) const { return lo + (static_cast<double>(k) + 0.5) * width(); }
};

Histogram histogram(const std::vector<double>& sample, double lo, double hi, std::size_t bins);

/// (x, F_n(x)) at `points` evenly spaced quantile positions of the sample.
std::vector<std::pair<double, double>> ecdf_points(std::vector<double> sample, std::size_t points);

/// Flags grid points where the density has a kink: the scaled second
/// difference J_i = |h_{i+1} - 2 h_i + h_{i-1}| / dz is a local maximum
/// within +-guard and exceeds ratio * (median of J over the surrounding
/// window, guard excluded) + floor.
struct KinkDetectorOptions {
  std::size_t guard = 3;
  std::size_t window = 60;
  double ratio = 3.0;
  double floor = 1e-5;
};

std::vector<std::size_t> detect_kinks(const std::vector<double>& h, double dz, const KinkDetectorOptions& opts = {});

}  // namespace wfarey
