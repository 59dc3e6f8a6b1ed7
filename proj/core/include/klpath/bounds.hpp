#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "klpath/modarith.hpp"

namespace klpath {

/// Constants of Korolev's short Kloosterman sum estimate.
struct KorolevConstants {
  static constexpr std::uint64_t gamma1 = 900;
  /// gamma2 = 1/gamma2_denominator = 160^-4.
  static constexpr std::uint64_t gamma2_denominator = 655360000;
  static constexpr long double gamma2() noexcept { return 1.0L / gamma2_denominator; }
};
static_assert(KorolevConstants::gamma2_denominator == 160ULL * 160 * 160 * 160);

/// An odd prime power p^n described by (p, n) only, so that exponents far
/// beyond 64-bit q (n up to 40 and more) can be reasoned about.
class PrimePower {
 public:
  PrimePower(std::uint64_t p, unsigned n);
  explicit PrimePower(const PrimePowerModulus& m) : p_(m.p()), n_(m.n()) {}

  std::uint64_t p() const noexcept { return p_; }
  unsigned n() const noexcept { return n_; }
  long double log_q() const noexcept;

 private:
  std::uint64_t p_;
  unsigned n_;
};

/// max(p^15, exp(gamma1 (log q)^(2/3))) <= N <= p^(n/2). The p^15 and q
/// comparisons are exact integer comparisons (N^2 <= q for the upper end);
/// the exponential term is compared in the log domain.
bool korolev_condition(std::uint64_t N, const PrimePower& pp);

/// N exp(-gamma2 (log N)^3 / (log q)^2), times 4 when `factor4` is set.
/// The factor-4 form assumes n >= 31 and throws HypothesisViolation otherwise.
double korolev_bound(std::uint64_t N, const PrimePower& pp, bool factor4 = false);

/// Admissible range 0 < delta <= min(gamma2 n / 16, n/2 - 15).
struct DeltaWindow {
  unsigned n;
  /// Largest double not exceeding the exact bound.
  double delta_max;
  /// The exact bound as numerator / denominator.
  std::uint64_t numerator;
  std::uint64_t denominator;
};

/// Throws HypothesisViolation for n <= 30, where the window is empty.
DeltaWindow delta_admissible(unsigned n);

/// delta/n <= gamma2/8 - delta/n <= gamma2 ((n/2 - delta)/n)^3, evaluated in
/// exact rational arithmetic on the binary value of delta.
bool exponent_chain_check(double delta, unsigned n);

struct ShortSumReport {
  std::uint64_t N;
  std::size_t sums;      // number of (a, c) pairs scanned
  double max_abs;        // max |sum|
  double mean_abs;
  double ratio_trivial;  // max / N
  double ratio_sqrt;     // max / sqrt(N)
  double korolev;        // korolev_bound(N), as if its hypothesis held
  double ratio_korolev;  // max / korolev
};

/// |sum_{c < x <= c + N, p does not divide x} e_q(a x + b x-bar)| by direct
/// summation for every start c and every a in `a_values` (all units when
/// empty).
ShortSumReport short_sum_scan(const UnitResidue& b, std::uint64_t N, std::span<const std::uint64_t> starts,
                              std::span<const std::uint64_t> a_values = {}, unsigned threads = 1);

}  // namespace klpath
