#pragma once

// Brute-force reference computations for the tests. Nothing here touches the
// library's kernels or tables: inverses come from exhaustive search, roots of
// unity from long double trigonometry, and sums are accumulated in long double.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<long double>;

inline std::uint64_t search_inverse(std::uint64_t x, std::uint64_t q) {
  for (std::uint64_t y = 1; y < q; ++y) {
    if ((x % q) * y % q == 1) return y;
  }
  return 0;
}

inline cplx root(std::uint64_t r, std::uint64_t q) {
  const long double angle = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(r % q) / q;
  return {std::cos(angle), std::sin(angle)};
}

inline std::uint64_t ipow(std::uint64_t p, unsigned n) {
  std::uint64_t q = 1;
  for (unsigned i = 0; i < n; ++i) q *= p;
  return q;
}

// Normalized prefix sums over units x <= j for every unit j, in J order.
inline std::vector<cplx> prefix_sums(std::uint64_t a, std::uint64_t b, std::uint64_t p, unsigned n) {
  const std::uint64_t q = ipow(p, n);
  const long double norm = std::pow(static_cast<long double>(p), n / 2.0L);
  std::vector<cplx> out;
  cplx acc{};
  for (std::uint64_t x = 1; x < q; ++x) {
    if (x % p == 0) continue;
    acc += root((a * x + b * search_inverse(x, q)) % q, q);
    out.push_back(acc / norm);
  }
  return out;
}

inline cplx full_sum(std::uint64_t a, std::uint64_t b, std::uint64_t p, unsigned n) {
  return prefix_sums(a, b, p, n).back();
}

// Path value at t = num/den straight from the parametrization, with the
// segment index found by scanning rather than by a ceiling formula.
inline cplx path_value(const std::vector<cplx>& z, std::uint64_t num, std::uint64_t den) {
  const std::uint64_t phi1 = z.size() - 1;
  if (num == 0) return z.front();
  std::uint64_t j = 1;
  while (j * den < phi1 * num) ++j;  // (j-1)/(phi-1) < t <= j/(phi-1)
  const long double t = static_cast<long double>(num) / den;
  const cplx slope = static_cast<long double>(phi1) * (z[j] - z[j - 1]);
  return slope * (t - static_cast<long double>(j - 1) / phi1) + z[j - 1];
}

// Last summation index floor(phi t + k - 1), k the block of t, by scanning.
inline std::uint64_t step_endpoint(std::uint64_t num, std::uint64_t den, std::uint64_t p, unsigned n) {
  const std::uint64_t q = ipow(p, n);
  const std::uint64_t blocks = q / p;
  const std::uint64_t phi = blocks * (p - 1);
  std::uint64_t k = 1;
  while (k * den < blocks * num) ++k;
  std::uint64_t x = 0;
  while ((x + 1) * den <= phi * num + (k - 1) * den) ++x;  // largest x <= phi t + k - 1
  return x;
}

// Legendre symbol by Euler's criterion with naive powering.
inline int legendre(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < (p - 1) / 2; ++i) r = r * a % p;
  return r == 1 ? 1 : -1;
}

}  // namespace oracle
