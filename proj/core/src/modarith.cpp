#include "klpath/modarith.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "klpath/error.hpp"

namespace klpath {
namespace {

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) noexcept {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

bool is_strong_probable_prime(std::uint64_t n, std::uint64_t d, unsigned s, std::uint64_t base) noexcept {
  std::uint64_t x = pow_mod(base, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
  static constexpr std::uint64_t kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (n < 2) return false;
  for (std::uint64_t sp : kSmall) {
    if (n % sp == 0) return n == sp;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  // The first twelve primes are a deterministic witness set below 3.3e24.
  for (std::uint64_t base : kSmall) {
    if (!is_strong_probable_prime(n, d, s, base)) return false;
  }
  return true;
}

PrimePowerModulus::PrimePowerModulus(std::uint64_t p, unsigned n) : p_(p), n_(n) {
  if (p == 2 || !is_prime(p)) {
    throw InvalidArgument("p = " + std::to_string(p) + " is not an odd prime");
  }
  if (n == 0) throw InvalidArgument("exponent n must be >= 1");
  q_ = 1;
  for (unsigned i = 0; i < n; ++i) {
    if (q_ > std::numeric_limits<std::uint64_t>::max() / p) {
      throw InvalidArgument("q = " + std::to_string(p) + "^" + std::to_string(n) + " does not fit in 64 bits");
    }
    q_ *= p;
  }
  phi_ = q_ / p * (p - 1);
  sqrt_q_ = std::pow(static_cast<double>(p), 0.5 * n);
}

std::uint64_t PrimePowerModulus::reduce(std::int64_t x) const noexcept {
  if (x >= 0) return static_cast<std::uint64_t>(x) % q_;
  // -(x + 1) avoids overflow at INT64_MIN.
  const std::uint64_t r = static_cast<std::uint64_t>(-(x + 1)) % q_;
  return q_ - 1 - r;
}

UnitResidue::UnitResidue(std::int64_t value, const PrimePowerModulus& modulus)
    : value_(modulus.reduce(value)), modulus_(modulus) {
  if (!modulus_.is_unit(value_)) {
    throw InvalidArgument(std::to_string(value) + " is not a unit modulo " + std::to_string(modulus_.q()) +
                          " (divisible by p = " + std::to_string(modulus_.p()) + ")");
  }
}

std::uint64_t inv_mod(std::uint64_t x, std::uint64_t m) {
  if (m < 2) throw InvalidArgument("modulus must be >= 2");
  // Bezout coefficients tracked as signed 128-bit to cover the full 64-bit range.
  i128 old_r = static_cast<i128>(x % m), r = m;
  i128 old_s = 1, s = 0;
  while (r != 0) {
    const i128 quot = old_r / r;
    i128 tmp = old_r - quot * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quot * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw InvalidArgument(std::to_string(x) + " is not invertible modulo " + std::to_string(m));
  i128 inv = old_s % static_cast<i128>(m);
  if (inv < 0) inv += m;
  return static_cast<std::uint64_t>(inv);
}

UnitResidue inv_mod(const UnitResidue& x) {
  return UnitResidue(inv_mod(x.value(), x.modulus().q()), x.modulus(), UnitResidue::Unchecked{});
}

std::complex<double> e_q(std::int64_t x, const PrimePowerModulus& m) {
  const std::uint64_t q = m.q();
  const std::uint64_t r = m.reduce(x);
  if (r == 0) return {1.0, 0.0};
  // Signed representative in (-q/2, q/2] keeps the angle within [-pi, pi].
  const double num = r > q / 2 ? -static_cast<double>(q - r) : static_cast<double>(r);
  const double angle = 2.0 * std::numbers::pi * num / static_cast<double>(q);
  return {std::cos(angle), std::sin(angle)};
}

std::vector<std::uint64_t> inverse_table(const PrimePowerModulus& m) {
  const std::uint64_t q = m.q();
  const std::uint64_t p = m.p();
  std::vector<std::uint64_t> inv(q, 0);
  // Montgomery's trick: prefix products, one inversion, then unwind.
  std::vector<std::uint64_t> prefix;
  prefix.reserve(m.phi());
  std::uint64_t acc = 1;
  for (std::uint64_t x = 1; x < q; ++x) {
    if (x % p == 0) continue;
    acc = mul_mod(acc, x, q);
    prefix.push_back(acc);
  }
  std::uint64_t running = inv_mod(acc, q);
  std::size_t i = prefix.size();
  for (std::uint64_t x = q - 1; x >= 1; --x) {
    if (x % p == 0) continue;
    --i;
    const std::uint64_t before = i == 0 ? 1 : prefix[i - 1];
    inv[x] = mul_mod(running, before, q);
    running = mul_mod(running, x, q);
  }
  return inv;
}

RootTable::RootTable(const PrimePowerModulus& m) : roots_(m.q()) {
  for (std::uint64_t k = 0; k < m.q(); ++k) roots_[k] = e_q(static_cast<std::int64_t>(k), m);
}

}  // namespace klpath
