#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "klpath/modarith.hpp"
#include "klpath/path.hpp"

namespace klpath {

/// Largest modulus for which averages over all units are computed; larger
/// moduli are refused rather than subsampled.
inline constexpr std::uint64_t kMaxExactAverageModulus = 1'000'000;

struct TimePair {
  RationalTime s;
  RationalTime t;
};

/// M_alpha(s, t) = (1/phi) sum over all units a of |Kl_q(t; (a, b0)) - Kl_q(s; (a, b0))|^alpha
/// for every pair, sharing one O(q) prefix pass per a. `alpha` must be even
/// and >= 2. Independent of `threads`.
std::vector<double> moments(std::span<const TimePair> pairs, unsigned alpha, const UnitResidue& b0,
                            unsigned threads = 1);

double moment(const RationalTime& s, const RationalTime& t, unsigned alpha, const UnitResidue& b0,
              unsigned threads = 1);

/// beta = min(alpha/2, alpha delta/n, 2, delta alpha/(n/2 + delta), 1 + delta/(n/2 - delta)) - 1,
/// evaluated exactly. Requires 0 < delta <= delta_admissible(n) and
/// alpha > max(n/delta, (n/2 + delta)/delta); HypothesisViolation otherwise.
double beta_parameter(unsigned n, double delta, std::uint64_t alpha);

/// Smallest even alpha with alpha > max(n/delta, (n/2 + delta)/delta).
std::uint64_t smallest_admissible_alpha(unsigned n, double delta);

struct TightnessParams {
  std::vector<double> gaps;          // each in (0, 1]
  std::size_t samples_per_gap = 32;  // random placements of (s, s + gap)
  std::uint64_t seed = 0;
  std::uint64_t grid_factor = 64;    // times live on the grid 1/((phi-1) grid_factor)
  unsigned threads = 1;
};

struct MomentSample {
  double s;
  double t;
  double moment;
};

struct GapSummary {
  double gap;           // exact grid value of the requested gap
  double mean_moment;   // average over the placements
  std::size_t zero_moments;
};

struct BoundViolation {
  double s;
  double t;
  double moment;
  double bound;  // 2^alpha (t - s)^(alpha/2)
};

struct MomentReport {
  std::uint64_t p;
  unsigned n;
  std::uint64_t b0;
  unsigned alpha;
  std::uint64_t seed;
  std::uint64_t time_denominator;
  std::vector<GapSummary> gaps;
  std::vector<MomentSample> samples;
  std::optional<double> fitted_slope;
  std::optional<double> fitted_intercept;
  std::size_t excluded_from_fit = 0;  // gaps whose mean moment is 0
  std::vector<BoundViolation> violations;
  std::optional<double> beta_prediction;
};

/// Moments over random placements per gap, an OLS fit of log M_alpha against
/// log gap, and the pairs violating the small-gap bound (checked for every
/// pair with t - s <= 1/(phi - 1)).
MomentReport tightness_scan(const UnitResidue& b0, unsigned alpha, const TightnessParams& params);

struct LawParams {
  std::vector<double> t_points;  // each in [0, 1]
  std::uint64_t truncation = 0;  // H; 0 selects H = q
  std::size_t mc_samples = 10000;
  std::uint64_t seed = 0;
  std::uint64_t grid_factor = 64;
  std::size_t quantile_count = 101;
  unsigned threads = 1;
};

struct LawAtTime {
  double t;
  double ks_re;
  double ks_im;
  std::vector<double> path_re_quantiles;
  std::vector<double> path_im_quantiles;
  std::vector<double> limit_re_quantiles;
  std::vector<double> limit_im_quantiles;
};

struct LawComparisonReport {
  std::uint64_t p;
  unsigned n;
  std::uint64_t b0;
  std::uint64_t truncation;
  std::size_t mc_samples;
  std::uint64_t seed;
  std::vector<LawAtTime> times;
  double zero_mass_fraction;  // share of units a with |Kl_q(1; (a, b0))| < 1e-9
};

/// One-dimensional KS distances between the path marginals over all units a
/// and Monte Carlo draws of the truncated limit series, per real and
/// imaginary part. Sample i of the series uses MuSampler(derive_seed(seed, i)).
LawComparisonReport compare_laws(const UnitResidue& b0, const LawParams& params);

struct SupReport {
  double max_abs;  // max over units a and the grid of |step approximation|
  double log_q;
  double ratio;    // max_abs / log q
  std::uint64_t argmax_a;
  double argmax_t;
};

/// Throws InvalidArgument for an empty grid. t = 0 contributes the empty sum.
SupReport sup_statistics(const UnitResidue& b0, std::span<const RationalTime> t_grid, unsigned threads = 1);

}  // namespace klpath
