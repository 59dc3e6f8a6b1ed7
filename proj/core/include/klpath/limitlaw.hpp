#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "klpath/counter_rng.hpp"
#include "klpath/modarith.hpp"
#include "klpath/path.hpp"

namespace klpath {

/// Draws of U_h ~ mu = (1/2) delta_0 + mu_0, where mu_0 is the law of
/// 2 cos(pi V) with V uniform on (0, 1) (density 1/(2 pi sqrt(4 - x^2)) on
/// (-2, 2)). U_h is a pure function of (seed, h): one Philox block per h, its
/// first bit choosing the atom and its upper 64 bits giving V.
class MuSampler {
 public:
  explicit MuSampler(std::uint64_t seed) noexcept : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  double operator()(std::int64_t h) const noexcept;

 private:
  std::uint64_t seed_;
  Philox4x32 gen_;
};

double sample_mu(const MuSampler& sampler, std::int64_t h) noexcept;

/// The draws U_h, |h| <= H, of one realization of the random Fourier series.
class LimitSeriesSample {
 public:
  LimitSeriesSample(const MuSampler& sampler, std::uint64_t truncation);
  /// Explicit draws, draws[h + H] = U_h; size must be 2H + 1.
  LimitSeriesSample(std::uint64_t truncation, std::vector<double> draws);

  std::uint64_t truncation() const noexcept { return truncation_; }
  double draw(std::int64_t h) const { return draws_.at(static_cast<std::size_t>(h + static_cast<std::int64_t>(truncation_))); }
  std::span<const double> draws() const noexcept { return draws_; }

 private:
  std::uint64_t truncation_;
  std::vector<double> draws_;
};

/// Coefficients (e(h t) - 1)/(2 pi i h) of the series at a fixed t, shared
/// by every sample evaluated at that t.
class LimitSeriesCoefficients {
 public:
  LimitSeriesCoefficients(double t, std::uint64_t truncation);

  double t() const noexcept { return t_; }
  std::uint64_t truncation() const noexcept { return re_.size(); }

  /// t U_0 + sum_{0 < |h| <= H} (e(h t) - 1)/(2 pi i h) U_h, accumulated in
  /// symmetric pairs (h, -h) in increasing h. Samples truncated beyond H
  /// contribute only their first H pairs.
  std::complex<double> evaluate(const LimitSeriesSample& sample) const;

 private:
  double t_;
  std::vector<double> re_;  // sin(2 pi h t)/(2 pi h)
  std::vector<double> im_;  // (1 - cos(2 pi h t))/(2 pi h)
};

std::complex<double> limit_series_eval(double t, const LimitSeriesSample& sample);

/// Increment between s and t of q^{-1/2} sum_{|h| <= (q-1)/2} alpha_q(h; x) U_h.
/// The sample must have truncation (q-1)/2.
std::complex<double> truncated_surrogate(const RationalTime& t, const RationalTime& s, const PrimePowerModulus& m,
                                         const LimitSeriesSample& sample);

/// sigma^2 of the surrogate increment computed two ways.
struct SigmaSquared {
  double coefficient_sum;  // (4/q) sum_{|h| <= (q-1)/2} |alpha(h;t) - alpha(h;s)|^2
  double plancherel;       // 4 |I_{s,t}| / q
};

SigmaSquared sigma_squared(const RationalTime& s, const RationalTime& t, const PrimePowerModulus& m);

/// Subgaussian parameter of the surrogate increment. Both routes of
/// sigma_squared must agree within 1e-8 q (std::logic_error otherwise); the
/// Plancherel value is returned. Zero when s = t.
double sigma_subgaussian(const RationalTime& s, const RationalTime& t, const PrimePowerModulus& m);

}  // namespace klpath
