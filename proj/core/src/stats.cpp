#include "wfarey/stats.hpp"

#include <algorithm>
#include <cmath>

#include "wfarey/errors.hpp"

namespace wfarey {

TabulatedCdf::TabulatedCdf(std::vector<double> nodes, std::vector<double> values, std::vector<double> slopes,
                           std::function<double(double)> fallback)
    : x_(std::move(nodes)), y_(std::move(values)), d_(std::move(slopes)), fallback_(std::move(fallback)) {
  if (x_.size() < 2 || x_.size() != y_.size() || x_.size() != d_.size())
    throw DomainError("tabulated CDF needs at least two nodes with matching values and slopes");
  if (!std::is_sorted(x_.begin(), x_.end())) throw DomainError("tabulated CDF nodes must be sorted");
}

TabulatedCdf TabulatedCdf::build(const std::function<double(double)>& F, const std::function<double(double)>& f,
                                 std::vector<double> nodes, std::function<double(double)> fallback) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::vector<double> y, d;
  y.reserve(nodes.size());
  d.reserve(nodes.size());
  for (double z : nodes) {
    y.push_back(F(z));
    d.push_back(f(z));
  }
  return TabulatedCdf(std::move(nodes), std::move(y), std::move(d), std::move(fallback));
}

double TabulatedCdf::operator()(double z) const {
  if (z <= x_.front()) return fallback_ ? fallback_(z) : y_.front();
  if (z >= x_.back()) return fallback_ ? fallback_(z) : y_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), z);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double t = (z - x_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double v = (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * d_[i] + (-2 * t3 + 3 * t2) * y_[i + 1] +
                   (t3 - t2) * h * d_[i + 1];
  return std::clamp(v, std::min(y_[i], y_[i + 1]), std::max(y_[i], y_[i + 1]));
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("KS distance of an empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double worst = 0.0;
  std::size_t i = 0;
  while (i < sample.size()) {
    std::size_t j = i;
    while (j < sample.size() && sample[j] == sample[i]) ++j;
    const double F = cdf(sample[i]);
    worst = std::max({worst, std::abs(F - static_cast<double>(i) / n), std::abs(static_cast<double>(j) / n - F)});
    i = j;
  }
  return worst;
}

Histogram histogram(const std::vector<double>& sample, double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw DomainError("histogram needs bins >= 1 and hi > lo");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.density.assign(bins, 0.0);
  const double w = h.width();
  for (double x : sample) {
    if (x < lo) {
      ++h.below;
    } else if (x >= hi) {
      ++h.above;
    } else {
      auto k = static_cast<std::size_t>((x - lo) / w);
      h.density[std::min(k, bins - 1)] += 1.0;
    }
  }
  if (!sample.empty())
    for (double& c : h.density) c /= static_cast<double>(sample.size()) * w;
  return h;
}

std::vector<std::pair<double, double>> ecdf_points(std::vector<double> sample, std::size_t points) {
  std::vector<std::pair<double, double>> out;
  if (sample.empty() || points == 0) return out;
  std::sort(sample.begin(), sample.end());
  const std::size_t n = sample.size();
  points = std::min(points, n);
  for (std::size_t k = 1; k <= points; ++k) {
    const std::size_t idx = (k * n) / points - 1;
    out.emplace_back(sample[idx], static_cast<double>(idx + 1) / static_cast<double>(n));
  }
  return out;
}

std::vector<std::size_t> detect_kinks(const std::vector<double>& h, double dz, const KinkDetectorOptions& opts) {
  std::vector<std::size_t> out;
  const std::size_t n = h.size();
  if (n < 3) return out;
  std::vector<double> J(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) J[i] = std::abs(h[i + 1] - 2.0 * h[i] + h[i - 1]) / dz;
  std::vector<double> ring;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const std::size_t lo = i > opts.guard ? i - opts.guard : 1;
    const std::size_t hi = std::min(n - 2, i + opts.guard);
    bool peak = true;
    for (std::size_t j = lo; j <= hi && peak; ++j) peak = J[j] <= J[i];
    if (!peak) continue;
    ring.clear();
    const std::size_t wlo = i > opts.window ? i - opts.window : 1;
    const std::size_t whi = std::min(n - 2, i + opts.window);
    for (std::size_t j = wlo; j <= whi; ++j)
      if (j + opts.guard < i || j > i + opts.guard) ring.push_back(J[j]);
    double median = 0.0;
    if (!ring.empty()) {
      auto mid = ring.begin() + static_cast<std::ptrdiff_t>(ring.size() / 2);
      std::nth_element(ring.begin(), mid, ring.end());
      median = *mid;
    }
    if (J[i] > opts.ratio * median + opts.floor) out.push_back(i);
  }
  return out;
}

}  // namespace wfarey
