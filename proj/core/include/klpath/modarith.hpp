#pragma once

#include <complex>
#include <cstdint>
#include <ranges>
#include <vector>

namespace klpath {

__extension__ typedef unsigned __int128 u128;
__extension__ typedef __int128 i128;

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n) noexcept;

/// (a * b) mod m without overflow.
constexpr std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

/// Arithmetic context for an odd prime power q = p^n.
///
/// Construction validates that p is an odd prime, n >= 1 and that q fits in
/// an unsigned 64-bit integer.
class PrimePowerModulus {
 public:
  PrimePowerModulus(std::uint64_t p, unsigned n);

  std::uint64_t p() const noexcept { return p_; }
  unsigned n() const noexcept { return n_; }
  std::uint64_t q() const noexcept { return q_; }
  /// Euler phi of q, p^(n-1) (p-1).
  std::uint64_t phi() const noexcept { return phi_; }
  /// p^(n-1), the number of blocks of the path enumeration.
  std::uint64_t block_count() const noexcept { return q_ / p_; }
  /// p^(n/2) as a double.
  double sqrt_q() const noexcept { return sqrt_q_; }

  bool is_unit(std::uint64_t x) const noexcept { return x % p_ != 0; }
  /// Representative of x in [0, q).
  std::uint64_t reduce(std::int64_t x) const noexcept;

  friend bool operator==(const PrimePowerModulus& l, const PrimePowerModulus& r) noexcept {
    return l.p_ == r.p_ && l.n_ == r.n_;
  }

 private:
  std::uint64_t p_;
  unsigned n_;
  std::uint64_t q_;
  std::uint64_t phi_;
  double sqrt_q_;
};

/// An element of (Z/qZ)^x, stored as its representative in [1, q-1].
class UnitResidue {
 public:
  /// Reduces `value` modulo q; throws InvalidArgument when p divides it.
  UnitResidue(std::int64_t value, const PrimePowerModulus& modulus);

  std::uint64_t value() const noexcept { return value_; }
  const PrimePowerModulus& modulus() const noexcept { return modulus_; }

  friend bool operator==(const UnitResidue& l, const UnitResidue& r) noexcept {
    return l.value_ == r.value_ && l.modulus_ == r.modulus_;
  }

 private:
  struct Unchecked {};
  UnitResidue(std::uint64_t value, const PrimePowerModulus& modulus, Unchecked) noexcept
      : value_(value), modulus_(modulus) {}
  friend UnitResidue inv_mod(const UnitResidue& x);

  std::uint64_t value_;
  PrimePowerModulus modulus_;
};

/// Inverse modulo m by the extended Euclidean algorithm. Requires gcd(x, m) = 1
/// and m >= 2; throws InvalidArgument otherwise.
std::uint64_t inv_mod(std::uint64_t x, std::uint64_t m);

/// x-bar: the unique unit y with x y = 1 (mod q).
UnitResidue inv_mod(const UnitResidue& x);

/// exp(2 pi i x / q), with x reduced modulo q in integer arithmetic first.
std::complex<double> e_q(std::int64_t x, const PrimePowerModulus& m);

/// Inverses of every residue modulo q by batch inversion (one extended Euclid
/// call in total). Entry x holds x-bar for units and 0 for multiples of p.
std::vector<std::uint64_t> inverse_table(const PrimePowerModulus& m);

/// e_q(k) for k in [0, q), each entry computed by e_q directly.
class RootTable {
 public:
  explicit RootTable(const PrimePowerModulus& m);

  const std::complex<double>& operator[](std::uint64_t k) const noexcept { return roots_[k]; }
  std::size_t size() const noexcept { return roots_.size(); }

 private:
  std::vector<std::complex<double>> roots_;
};

/// The index set J = {1 <= j <= q : p does not divide j} in increasing order.
inline auto units(const PrimePowerModulus& m) {
  return std::views::iota(std::uint64_t{1}, m.q()) |
         std::views::filter([p = m.p()](std::uint64_t x) { return x % p != 0; }) |
         std::views::transform([m](std::uint64_t x) { return UnitResidue(static_cast<std::int64_t>(x), m); });
}

/// Position (1-based) of a unit j within J, i.e. j - floor(j/p).
constexpr std::uint64_t unit_rank(std::uint64_t j, std::uint64_t p) noexcept { return j - j / p; }

}  // namespace klpath
