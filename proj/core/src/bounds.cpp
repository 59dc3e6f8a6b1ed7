#include "klpath/bounds.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "klpath/error.hpp"
#include "klpath/kloosterman.hpp"
#include "klpath/parallel.hpp"

namespace klpath {
namespace {

using Rational = boost::multiprecision::cpp_rational;

constexpr u128 kSaturated = ~static_cast<u128>(0);

u128 saturating_pow(std::uint64_t base, unsigned exp) noexcept {
  u128 result = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (result > kSaturated / base) return kSaturated;
    result *= base;
  }
  return result;
}

void require_factor4_hypothesis(unsigned n) {
  if (n < 31) {
    throw HypothesisViolation("the factor-4 short-sum bound requires n ≥ 31 (got n = " + std::to_string(n) + ")");
  }
}

}  // namespace

PrimePower::PrimePower(std::uint64_t p, unsigned n) : p_(p), n_(n) {
  if (p == 2 || !is_prime(p)) throw InvalidArgument("p = " + std::to_string(p) + " is not an odd prime");
  if (n == 0) throw InvalidArgument("exponent n must be >= 1");
}

long double PrimePower::log_q() const noexcept { return static_cast<long double>(n_) * std::log(static_cast<long double>(p_)); }

bool korolev_condition(std::uint64_t N, const PrimePower& pp) {
  if (N == 0) throw InvalidArgument("N must be >= 1");
  if (saturating_pow(pp.p(), 15) > N) return false;
  const long double threshold = KorolevConstants::gamma1 * std::pow(pp.log_q(), 2.0L / 3.0L);
  if (std::log(static_cast<long double>(N)) < threshold) return false;
  const u128 q = saturating_pow(pp.p(), pp.n());
  return static_cast<u128>(N) * N <= q;
}

double korolev_bound(std::uint64_t N, const PrimePower& pp, bool factor4) {
  if (N == 0) throw InvalidArgument("N must be >= 1");
  if (factor4) require_factor4_hypothesis(pp.n());
  const long double log_n = std::log(static_cast<long double>(N));
  const long double log_q = pp.log_q();
  const long double decay = std::exp(-KorolevConstants::gamma2() * log_n * log_n * log_n / (log_q * log_q));
  return static_cast<double>((factor4 ? 4.0L : 1.0L) * static_cast<long double>(N) * decay);
}

DeltaWindow delta_admissible(unsigned n) {
  if (n <= 30) {
    throw HypothesisViolation("the admissible delta window is empty: it needs n ≥ 31 (got n = " +
                              std::to_string(n) + ")");
  }
  const Rational korolev_side(static_cast<std::uint64_t>(n), 16 * KorolevConstants::gamma2_denominator);
  const Rational power_side(static_cast<std::uint64_t>(n) - 30, 2);
  const Rational exact = std::min(korolev_side, power_side);

  double value = exact.convert_to<double>();
  if (Rational(value) > exact) value = std::nextafter(value, 0.0);
  return {n, value, numerator(exact).convert_to<std::uint64_t>(), denominator(exact).convert_to<std::uint64_t>()};
}

bool exponent_chain_check(double delta, unsigned n) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidArgument("delta must be a positive finite number");
  if (n == 0) throw InvalidArgument("n must be >= 1");
  const Rational d(delta);
  const Rational nn(static_cast<std::uint64_t>(n));
  const Rational gamma2(1, KorolevConstants::gamma2_denominator);
  const Rational left = d / nn;
  const Rational middle = gamma2 / 8 - d / nn;
  const Rational base = (nn / 2 - d) / nn;
  const Rational right = gamma2 * base * base * base;
  return left <= middle && middle <= right;
}

ShortSumReport short_sum_scan(const UnitResidue& b, std::uint64_t N, std::span<const std::uint64_t> starts,
                              std::span<const std::uint64_t> a_values, unsigned threads) {
  if (N == 0) throw InvalidArgument("N must be >= 1");
  const PrimePowerModulus& m = b.modulus();
  const ModulusTables tables(m);
  const std::uint64_t q = m.q();

  std::vector<std::uint64_t> all_units;
  if (a_values.empty()) {
    all_units.reserve(m.phi());
    for (std::uint64_t x = 1; x < q; ++x) {
      if (m.is_unit(x)) all_units.push_back(x);
    }
    a_values = all_units;
  }
  for (std::uint64_t a : a_values) {
    if (a == 0 || a >= q || !m.is_unit(a)) throw InvalidArgument("a = " + std::to_string(a) + " is not a unit");
  }

  struct Partial {
    double max = 0.0;
    double sum = 0.0;
  };
  constexpr std::size_t kRowsPerChunk = 16;
  std::vector<Partial> partials(chunk_count(a_values.size(), kRowsPerChunk));
  parallel_chunks(partials.size(), threads, [&](std::size_t chunk) {
    Partial& out = partials[chunk];
    const std::size_t first = chunk * kRowsPerChunk;
    const std::size_t last = std::min(first + kRowsPerChunk, a_values.size());
    for (std::size_t row = first; row < last; ++row) {
      const std::uint64_t a = a_values[row];
      for (std::uint64_t c : starts) {
        std::complex<double> s{};
        for (std::uint64_t i = 1; i <= N; ++i) {
          const std::uint64_t x = static_cast<std::uint64_t>((static_cast<u128>(c) + i) % q);
          if (!m.is_unit(x)) continue;
          const std::uint64_t phase = (mul_mod(a, x, q) + mul_mod(b.value(), tables.inverse[x], q)) % q;
          s += tables.roots[phase];
        }
        const double v = std::abs(s);
        out.max = std::max(out.max, v);
        out.sum += v;
      }
    }
  });

  ShortSumReport report{};
  report.N = N;
  report.sums = a_values.size() * starts.size();
  double total = 0.0;
  for (const Partial& p : partials) {
    report.max_abs = std::max(report.max_abs, p.max);
    total += p.sum;
  }
  report.mean_abs = report.sums == 0 ? 0.0 : total / static_cast<double>(report.sums);
  report.ratio_trivial = report.max_abs / static_cast<double>(N);
  report.ratio_sqrt = report.max_abs / std::sqrt(static_cast<double>(N));
  report.korolev = korolev_bound(N, PrimePower(m), false);
  report.ratio_korolev = report.max_abs / report.korolev;
  return report;
}

}  // namespace klpath
