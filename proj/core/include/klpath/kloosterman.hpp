#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "klpath/modarith.hpp"

namespace klpath {

/// Per-modulus lookup data shared read-only by every kernel: the batch
/// inverse table and the table of q-th roots of unity.
struct ModulusTables {
  explicit ModulusTables(const PrimePowerModulus& m);

  PrimePowerModulus modulus;
  std::vector<std::uint64_t> inverse;
  RootTable roots;
};

/// The phi(q) normalized prefix sums Kl_{j;q}(a, b) for j running through J.
struct PartialSumSeries {
  UnitResidue a;
  UnitResidue b;
  /// values[i] is the prefix sum up to the (i+1)-th unit j_{i+1}.
  std::vector<std::complex<double>> values;

  const PrimePowerModulus& modulus() const noexcept { return a.modulus(); }
};

/// Streaming evaluator of Kloosterman sums S(a, b; q) for one fixed b.
///
/// Terms are visited in increasing x; a*x mod q is updated incrementally and
/// b*x-bar comes from a table built once per kernel. Terms are summed
/// sequentially inside blocks of 1024 and the block totals are combined by a
/// pairwise tree, so every result is a fixed function of (a, b, q).
class KloostermanKernel {
 public:
  static constexpr std::size_t kBlockSize = 1024;

  explicit KloostermanKernel(const UnitResidue& b);
  KloostermanKernel(const UnitResidue& b, std::shared_ptr<const ModulusTables> tables);

  const PrimePowerModulus& modulus() const noexcept { return tables_->modulus; }
  const UnitResidue& b() const noexcept { return b_; }
  const ModulusTables& tables() const noexcept { return *tables_; }

  /// Unnormalized complete sum S(a, b; q); `a` must be a unit in [1, q).
  std::complex<double> complete_sum(std::uint64_t a) const;

  /// Normalized prefix sums for `a`; `out` must have exactly phi entries.
  void prefix_sums(std::uint64_t a, std::span<std::complex<double>> out) const;

 private:
  template <class Sink>
  std::complex<double> accumulate(std::uint64_t a, Sink&& sink) const;

  std::shared_ptr<const ModulusTables> tables_;
  UnitResidue b_;
  std::vector<std::uint64_t> b_inverse_;  // b * x-bar mod q, indexed by x
};

/// Kl_q(a, b) = q^{-1/2} S(a, b; q), real by the x -> -x symmetry. The
/// accumulated imaginary part is checked against 1e-9 sqrt(phi) and a
/// std::logic_error is thrown if it is exceeded.
double full_sum(const UnitResidue& a, const UnitResidue& b);

/// Normalized complete sum including its (rounding-level) imaginary part.
std::complex<double> full_sum_complex(const UnitResidue& a, const UnitResidue& b);

/// All phi normalized prefix sums in one O(q) pass.
PartialSumSeries partial_sums(const UnitResidue& a, const UnitResidue& b);

/// Prefix sums for every unit a at a chosen set of prefix indices.
struct PrefixTable {
  PrimePowerModulus modulus;
  std::uint64_t b;
  std::vector<std::uint64_t> a_values;  // all units, increasing
  std::vector<std::uint64_t> prefixes;  // requested elements of J
  std::vector<std::complex<double>> values;  // row-major, one row per a

  const std::complex<double>& at(std::size_t a_row, std::size_t prefix_col) const {
    return values[a_row * prefixes.size() + prefix_col];
  }
  /// Row of unit a (a must be a unit in [1, q)).
  std::size_t row_of(std::uint64_t a) const noexcept { return unit_rank(a, modulus.p()) - 1; }
};

/// Sweeps every unit a; throws InvalidArgument for a prefix index outside J.
PrefixTable bulk_partial_sums(const UnitResidue& b, std::span<const std::uint64_t> prefix_indices,
                              unsigned threads = 1);

}  // namespace klpath
