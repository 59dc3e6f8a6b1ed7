#include "klpath/stats.hpp"

#include <algorithm>
#include <cmath>

#include "klpath/error.hpp"

namespace klpath {

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("KS distance needs two nonempty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

std::optional<LineFit> least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("least squares needs equally many x and y values");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  const double slope = sxy / sxx;
  return LineFit{slope, my - slope * mx};
}

std::vector<double> quantiles(std::vector<double> sample, std::size_t count) {
  if (sample.empty()) throw InvalidArgument("quantiles of an empty sample");
  if (count < 2) throw InvalidArgument("at least two quantiles are needed");
  std::sort(sample.begin(), sample.end());
  std::vector<double> out(count);
  const double last = static_cast<double>(sample.size() - 1);
  for (std::size_t k = 0; k < count; ++k) {
    const double pos = last * static_cast<double>(k) / static_cast<double>(count - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sample.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    out[k] = sample[lo] + (sample[hi] - sample[lo]) * frac;
  }
  return out;
}

}  // namespace klpath
