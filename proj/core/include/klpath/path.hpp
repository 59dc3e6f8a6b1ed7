#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "klpath/kloosterman.hpp"
#include "klpath/modarith.hpp"

namespace klpath {

/// A time t = numerator / denominator in [0, 1], kept exact so that the
/// segment and block indices (ceilings of multiples of t) never suffer from
/// floating-point boundary errors.
class RationalTime {
 public:
  RationalTime(std::uint64_t numerator, std::uint64_t denominator);

  /// Nearest multiple of 1/denominator to t; t must lie in [0, 1].
  static RationalTime from_double(double t, std::uint64_t denominator);

  std::uint64_t numerator() const noexcept { return num_; }
  std::uint64_t denominator() const noexcept { return den_; }
  double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const noexcept { return num_ == 0; }

  friend std::strong_ordering operator<=>(const RationalTime& l, const RationalTime& r) noexcept {
    return static_cast<u128>(l.num_) * r.den_ <=> static_cast<u128>(r.num_) * l.den_;
  }
  friend bool operator==(const RationalTime& l, const RationalTime& r) noexcept {
    return (l <=> r) == std::strong_ordering::equal;
  }

 private:
  std::uint64_t num_;
  std::uint64_t den_;
};

/// ceil((phi - 1) t): index j of the path segment containing t (0 at t = 0).
std::uint64_t segment_index(const RationalTime& t, const PrimePowerModulus& m);

/// ceil(p^(n-1) t): index k of the step-function block containing t.
std::uint64_t block_index(const RationalTime& t, const PrimePowerModulus& m);

/// floor(x_k(t)) with x_k(t) = phi t + k - 1 and k = block_index(t): the last
/// summation index of the step approximation. Defined as 0 at t = 0.
std::uint64_t step_endpoint(const RationalTime& t, const PrimePowerModulus& m);

/// j + floor((j - 1)/(p - 1)): the j-th element of J, for 1 <= j <= phi.
std::uint64_t index_map(std::uint64_t j, const PrimePowerModulus& m);

/// The piecewise-linear parametrization t -> Kl_q(t; (a, b)) of the
/// Kloosterman path: knots z_1..z_phi and slopes
/// alpha_j = (phi - 1)(z_{j+1} - z_j), segment j covering ((j-1)/(phi-1), j/(phi-1)].
class PathFunction {
 public:
  explicit PathFunction(const PartialSumSeries& series);
  PathFunction(const PrimePowerModulus& m, std::vector<std::complex<double>> knots);

  const PrimePowerModulus& modulus() const noexcept { return modulus_; }
  std::span<const std::complex<double>> knots() const noexcept { return knots_; }
  std::span<const std::complex<double>> slopes() const noexcept { return slopes_; }
  /// z_j, 1-based.
  const std::complex<double>& knot(std::uint64_t j) const;

  /// alpha_j (t - (j-1)/(phi-1)) + z_j; z_1 at t = 0, z_{j+1} exactly at t = j/(phi-1).
  std::complex<double> operator()(const RationalTime& t) const;

 private:
  PrimePowerModulus modulus_;
  std::vector<std::complex<double>> knots_;
  std::vector<std::complex<double>> slopes_;
};

std::complex<double> path_eval(const RationalTime& t, const PathFunction& path);

/// Path value computed straight from the knots (linear interpolation on the
/// segment), for sweeps that do not need a PathFunction per unit.
std::complex<double> path_value(std::span<const std::complex<double>> knots, const RationalTime& t,
                                const PrimePowerModulus& m);

/// Whether t = 0 is rejected or mapped to the value of the empty sum.
enum class ZeroTime { reject, allow };

/// Step approximation q^{-1/2} sum over units x <= floor(x_k(t)) of
/// e_q(a x + b x-bar), by direct summation.
std::complex<double> step_approx(const RationalTime& t, const UnitResidue& a, const UnitResidue& b,
                                 ZeroTime zero = ZeroTime::reject);

/// Same value read off a precomputed prefix series in O(1).
std::complex<double> step_approx(const RationalTime& t, const PartialSumSeries& series,
                                 ZeroTime zero = ZeroTime::reject);

/// Prefix-series lookup on raw knots (normalized prefix sums in J order).
std::complex<double> step_value(std::span<const std::complex<double>> knots, const RationalTime& t,
                                const PrimePowerModulus& m);

/// Which x enter the Fourier coefficients: every 1 <= x <= floor(x_k(t)), or
/// only those coprime to p.
enum class FourierConvention { all_x, coprime_x };

/// alpha_q(h; t) = q^{-1/2} sum_{1 <= x <= floor(x_k(t))} e_q(h x), by the
/// closed-form geometric sum.
std::complex<double> fourier_coeff(std::int64_t h, const RationalTime& t, const PrimePowerModulus& m,
                                   FourierConvention convention = FourierConvention::all_x,
                                   ZeroTime zero = ZeroTime::reject);

/// numerator / denominator with a 128-bit numerator.
struct ExactRational {
  u128 numerator;
  std::uint64_t denominator;

  double value() const noexcept { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  std::uint64_t floor() const noexcept { return static_cast<std::uint64_t>(numerator / denominator); }
};

/// The integer interval I_{s,t} = (x_j(s), x_k(t)] separating the step
/// approximations at s and t. Its cardinality counts the integers in it.
struct IntegerInterval {
  ExactRational lower;
  ExactRational upper;
  std::uint64_t cardinality;
};

/// Requires s < t. At s = 0 the lower end is 0, matching the empty sum.
IntegerInterval interval_between(const RationalTime& s, const RationalTime& t, const PrimePowerModulus& m);

/// Writes the knots as CSV with header `j,t,re,im`, t = (j-1)/(phi-1).
void write_path_csv(std::ostream& out, const PathFunction& path);

}  // namespace klpath
