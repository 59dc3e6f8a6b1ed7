#pragma once

#include <optional>
#include <span>
#include <vector>

namespace klpath {

/// Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|. Tied
/// values are consumed together before the gap is measured, so atoms shared
/// by both samples do not inflate the distance.
double ks_distance(std::span<const double> a, std::span<const double> b);

struct LineFit {
  double slope;
  double intercept;
};

/// Ordinary least squares y = slope x + intercept; empty with fewer than two
/// distinct x values.
std::optional<LineFit> least_squares(std::span<const double> x, std::span<const double> y);

/// `count` evenly spaced order statistics (probabilities 0, 1/(count-1), ..., 1)
/// of the sample, by linear interpolation between order statistics.
std::vector<double> quantiles(std::vector<double> sample, std::size_t count);

}  // namespace klpath
