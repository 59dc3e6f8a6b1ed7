#include "klpath/path.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "klpath/error.hpp"

namespace klpath {
namespace {

std::uint64_t ceil_div(u128 num, std::uint64_t den) noexcept {
  return static_cast<std::uint64_t>((num + den - 1) / den);
}

std::uint64_t floor_div(u128 num, std::uint64_t den) noexcept { return static_cast<std::uint64_t>(num / den); }

// Angle pi * r / q for a residue r modulo 2q, mapped into (-pi, pi].
double half_turn_angle(std::uint64_t r, std::uint64_t q) noexcept {
  const double signed_r = r > q ? -static_cast<double>(2 * q - r) : static_cast<double>(r);
  return std::numbers::pi * signed_r / static_cast<double>(q);
}

// h mod 2q, for any signed h.
std::uint64_t reduce_twice(std::int64_t h, std::uint64_t q) noexcept {
  const u128 two_q = static_cast<u128>(q) * 2;
  if (h >= 0) return static_cast<std::uint64_t>(static_cast<u128>(h) % two_q);
  const u128 r = static_cast<u128>(-(h + 1)) % two_q;
  return static_cast<std::uint64_t>(two_q - 1 - r);
}

// sum_{x=1}^{count} e_q(h x), unnormalized, via
// e((h (count+1))/(2q)) sin(pi h count / q) / sin(pi h / q).
std::complex<double> geometric_sum(std::int64_t h, std::uint64_t count, std::uint64_t q) {
  if (count == 0) return {};
  const std::uint64_t h2 = reduce_twice(h, q);  // h mod 2q
  if (h2 % q == 0) {
    // e_q(h x) = 1 for every x.
    return {static_cast<double>(count), 0.0};
  }
  const u128 two_q = static_cast<u128>(q) * 2;
  const auto phase_r = static_cast<std::uint64_t>(static_cast<u128>(h2) * (count + 1) % two_q);
  const auto numer_r = static_cast<std::uint64_t>(static_cast<u128>(h2) * count % two_q);
  const double ratio = std::sin(half_turn_angle(numer_r, q)) / std::sin(half_turn_angle(h2, q));
  const double phase = half_turn_angle(phase_r, q);
  return {ratio * std::cos(phase), ratio * std::sin(phase)};
}

}  // namespace

RationalTime::RationalTime(std::uint64_t numerator, std::uint64_t denominator) : num_(numerator), den_(denominator) {
  if (den_ == 0) throw InvalidArgument("time denominator must be >= 1");
  if (num_ > den_) {
    throw InvalidArgument("time " + std::to_string(num_) + "/" + std::to_string(den_) + " lies outside [0, 1]");
  }
}

RationalTime RationalTime::from_double(double t, std::uint64_t denominator) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("time " + std::to_string(t) + " lies outside [0, 1]");
  if (denominator == 0) throw InvalidArgument("time denominator must be >= 1");
  const long double scaled = static_cast<long double>(t) * static_cast<long double>(denominator);
  auto num = static_cast<std::uint64_t>(std::llround(scaled));
  if (num > denominator) num = denominator;
  return RationalTime(num, denominator);
}

std::uint64_t segment_index(const RationalTime& t, const PrimePowerModulus& m) {
  return ceil_div(static_cast<u128>(m.phi() - 1) * t.numerator(), t.denominator());
}

std::uint64_t block_index(const RationalTime& t, const PrimePowerModulus& m) {
  return ceil_div(static_cast<u128>(m.block_count()) * t.numerator(), t.denominator());
}

std::uint64_t step_endpoint(const RationalTime& t, const PrimePowerModulus& m) {
  if (t.is_zero()) return 0;
  // k is an integer, so floor(phi t + k - 1) = floor(phi t) + k - 1.
  return floor_div(static_cast<u128>(m.phi()) * t.numerator(), t.denominator()) + block_index(t, m) - 1;
}

std::uint64_t index_map(std::uint64_t j, const PrimePowerModulus& m) {
  if (j == 0 || j > m.phi()) {
    throw InvalidArgument("index " + std::to_string(j) + " outside [1, phi] = [1, " + std::to_string(m.phi()) + "]");
  }
  return j + (j - 1) / (m.p() - 1);
}

PathFunction::PathFunction(const PartialSumSeries& series) : PathFunction(series.modulus(), series.values) {}

PathFunction::PathFunction(const PrimePowerModulus& m, std::vector<std::complex<double>> knots)
    : modulus_(m), knots_(std::move(knots)) {
  if (knots_.size() != m.phi()) throw InvalidArgument("a path needs exactly phi(q) knots");
  const double scale = static_cast<double>(m.phi() - 1);
  slopes_.resize(knots_.size() - 1);
  for (std::size_t j = 0; j + 1 < knots_.size(); ++j) slopes_[j] = scale * (knots_[j + 1] - knots_[j]);
}

const std::complex<double>& PathFunction::knot(std::uint64_t j) const {
  if (j == 0 || j > knots_.size()) throw InvalidArgument("knot index " + std::to_string(j) + " out of range");
  return knots_[j - 1];
}

std::complex<double> PathFunction::operator()(const RationalTime& t) const {
  if (t.is_zero()) return knots_.front();
  const std::uint64_t j = segment_index(t, modulus_);
  const std::uint64_t phi1 = modulus_.phi() - 1;
  // (phi-1) t - (j-1), in (0, 1].
  const u128 offset = static_cast<u128>(phi1) * t.numerator() - static_cast<u128>(j - 1) * t.denominator();
  if (offset == t.denominator()) return knots_[j];
  const double since_knot =
      static_cast<double>(offset) / (static_cast<double>(t.denominator()) * static_cast<double>(phi1));
  return slopes_[j - 1] * since_knot + knots_[j - 1];
}

std::complex<double> path_eval(const RationalTime& t, const PathFunction& path) { return path(t); }

std::complex<double> path_value(std::span<const std::complex<double>> knots, const RationalTime& t,
                                const PrimePowerModulus& m) {
  if (t.is_zero()) return knots.front();
  const std::uint64_t j = segment_index(t, m);
  const u128 offset = static_cast<u128>(m.phi() - 1) * t.numerator() - static_cast<u128>(j - 1) * t.denominator();
  if (offset == t.denominator()) return knots[j];
  const double f = static_cast<double>(offset) / static_cast<double>(t.denominator());
  return knots[j - 1] + (knots[j] - knots[j - 1]) * f;
}

namespace {

void check_zero(const RationalTime& t, ZeroTime zero) {
  if (t.is_zero() && zero == ZeroTime::reject) {
    throw InvalidArgument("the step approximation is defined on (0, 1] only; t = 0 needs an explicit opt-in");
  }
}

}  // namespace

std::complex<double> step_approx(const RationalTime& t, const UnitResidue& a, const UnitResidue& b, ZeroTime zero) {
  check_zero(t, zero);
  const PrimePowerModulus& m = a.modulus();
  if (!(m == b.modulus())) throw InvalidArgument("a and b belong to different moduli");
  const std::uint64_t last = step_endpoint(t, m);
  std::complex<double> sum{};
  for (std::uint64_t x = 1; x <= last; ++x) {
    if (!m.is_unit(x)) continue;
    const std::uint64_t phase = (mul_mod(a.value(), x, m.q()) + mul_mod(b.value(), inv_mod(x, m.q()), m.q())) % m.q();
    sum += e_q(static_cast<std::int64_t>(phase), m);
  }
  return sum / m.sqrt_q();
}

std::complex<double> step_value(std::span<const std::complex<double>> knots, const RationalTime& t,
                                const PrimePowerModulus& m) {
  const std::uint64_t count = unit_rank(step_endpoint(t, m), m.p());
  return count == 0 ? std::complex<double>{} : knots[count - 1];
}

std::complex<double> step_approx(const RationalTime& t, const PartialSumSeries& series, ZeroTime zero) {
  check_zero(t, zero);
  return step_value(series.values, t, series.modulus());
}

std::complex<double> fourier_coeff(std::int64_t h, const RationalTime& t, const PrimePowerModulus& m,
                                   FourierConvention convention, ZeroTime zero) {
  check_zero(t, zero);
  const std::uint64_t last = step_endpoint(t, m);
  std::complex<double> sum = geometric_sum(h, last, m.q());
  if (convention == FourierConvention::coprime_x) {
    // Remove x = p y, y <= last / p: sum_y e_q(h p y).
    const std::uint64_t hp_mod = mul_mod(m.reduce(h), m.p(), m.q());
    sum -= geometric_sum(static_cast<std::int64_t>(hp_mod), last / m.p(), m.q());
  }
  return sum / m.sqrt_q();
}

IntegerInterval interval_between(const RationalTime& s, const RationalTime& t, const PrimePowerModulus& m) {
  if (!(s < t)) throw InvalidArgument("interval_between needs s < t");
  auto endpoint = [&m](const RationalTime& x) -> ExactRational {
    if (x.is_zero()) return {0, 1};
    const u128 k = block_index(x, m);
    return {static_cast<u128>(m.phi()) * x.numerator() + (k - 1) * x.denominator(), x.denominator()};
  };
  IntegerInterval interval{endpoint(s), endpoint(t), 0};
  const std::uint64_t lo = interval.lower.floor();
  const std::uint64_t hi = interval.upper.floor();
  interval.cardinality = hi > lo ? hi - lo : 0;
  return interval;
}

void write_path_csv(std::ostream& out, const PathFunction& path) {
  const auto knots = path.knots();
  const double phi1 = static_cast<double>(path.modulus().phi() - 1);
  out << "j,t,re,im\n";
  char line[160];
  for (std::size_t j = 1; j <= knots.size(); ++j) {
    const double t = static_cast<double>(j - 1) / phi1;
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g\n", j, t, knots[j - 1].real(), knots[j - 1].imag());
    out << line;
  }
}

}  // namespace klpath
