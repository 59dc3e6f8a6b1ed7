#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "klpath/counter_rng.hpp"
#include "klpath/error.hpp"
#include "klpath/limitlaw.hpp"
#include "klpath/stats.hpp"

using namespace klpath;

namespace {

// Moments of mu by the midpoint rule in theta: (1/2) 0^k + (1/(2 pi)) int_0^pi (2 cos theta)^k d theta.
double mu_moment(int k) {
  const int steps = 20000;
  double acc = 0;
  for (int i = 0; i < steps; ++i) {
    const double theta = std::numbers::pi * (i + 0.5) / steps;
    acc += std::pow(2 * std::cos(theta), k);
  }
  const double continuous = acc * (std::numbers::pi / steps) / (2 * std::numbers::pi);
  return (k == 0 ? 0.5 : 0.0) + continuous;
}

struct Moments {
  double mean = 0, m2 = 0, m4 = 0, m8 = 0;
};

}  // namespace

TEST_CASE("Philox known-answer vectors") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32(Philox4x32::Key{0, 0})(C{0, 0, 0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32(Philox4x32::Key{0xffffffff, 0xffffffff})(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32(Philox4x32::Key{0xa4093822, 0x299f31d0})(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("quadrature oracle for mu") {
  CHECK(mu_moment(0) == doctest::Approx(1.0));
  CHECK(std::abs(mu_moment(1)) < 1e-12);
  CHECK(mu_moment(2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mu_moment(4) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("mu sampler moments and shape") {
  const std::size_t draws = 1'000'000;
  const MuSampler sampler(2024);
  Moments m;
  std::size_t zeros = 0;
  std::vector<double> nonzero;
  nonzero.reserve(draws);
  for (std::size_t h = 0; h < draws; ++h) {
    const double u = sample_mu(sampler, static_cast<std::int64_t>(h));
    REQUIRE(u > -2.0);
    REQUIRE(u < 2.0);
    const double u2 = u * u;
    m.mean += u;
    m.m2 += u2;
    m.m4 += u2 * u2;
    m.m8 += u2 * u2 * u2 * u2;
    if (u == 0.0) {
      ++zeros;
    } else {
      nonzero.push_back(u);
    }
  }
  const double nd = static_cast<double>(draws);
  m.mean /= nd;
  m.m2 /= nd;
  m.m4 /= nd;
  m.m8 /= nd;

  const double se1 = std::sqrt(mu_moment(2) / nd);
  const double se2 = std::sqrt((mu_moment(4) - 1) / nd);
  const double se4 = std::sqrt((mu_moment(8) - 9) / nd);
  CHECK(std::abs(m.mean - mu_moment(1)) <= 3 * se1);
  CHECK(std::abs(m.m2 - mu_moment(2)) <= 3 * se2);
  CHECK(std::abs(m.m4 - mu_moment(4)) <= 3 * se4);
  CHECK(std::abs(m.mean) <= 0.005);
  CHECK(std::abs(m.m2 - 1) <= 0.01);

  CHECK(std::abs(static_cast<double>(zeros) / nd - 0.5) <= 3 * std::sqrt(0.25 / nd));

  // The continuous part follows the arcsine law F(x) = 1/2 + asin(x/2)/pi.
  std::sort(nonzero.begin(), nonzero.end());
  double ks = 0;
  const double n0 = static_cast<double>(nonzero.size());
  for (std::size_t i = 0; i < nonzero.size(); ++i) {
    const double f = 0.5 + std::asin(nonzero[i] / 2) / std::numbers::pi;
    ks = std::max({ks, std::abs(f - i / n0), std::abs(f - (i + 1) / n0)});
  }
  CHECK(ks * std::sqrt(n0) < 1.95);  // 0.1% critical value of the Kolmogorov distribution
}

TEST_CASE("draws are pure functions of seed and index") {
  const MuSampler a(7), b(7), c(8);
  std::size_t differ = 0;
  for (std::int64_t h = -500; h <= 500; ++h) {
    CHECK(a(h) == b(h));
    differ += a(h) != c(h);
  }
  CHECK(differ > 400);

  const LimitSeriesSample small(a, 500), large(a, 2000);
  for (std::int64_t h = -500; h <= 500; ++h) CHECK(small.draw(h) == large.draw(h));
  CHECK_THROWS_AS(LimitSeriesSample(3, std::vector<double>(6)), InvalidArgument);
}

TEST_CASE("limit series special values") {
  const LimitSeriesSample sample(MuSampler(99), 300);
  CHECK(limit_series_eval(0.0, sample) == std::complex<double>{});
  const auto at_one = limit_series_eval(1.0, sample);
  CHECK(std::abs(at_one - std::complex<double>(sample.draw(0), 0)) < 1e-13);
  const LimitSeriesSample zero(300, std::vector<double>(601, 0.0));
  CHECK(limit_series_eval(0.37, zero) == std::complex<double>{});

  // One nonzero U_h: the value is the single coefficient.
  std::vector<double> single(601, 0.0);
  single[300 + 5] = 1.0;
  const auto value = limit_series_eval(0.3, LimitSeriesSample(300, single));
  const double angle = 2 * std::numbers::pi * 5 * 0.3;
  const std::complex<double> expected = (std::complex<double>(std::cos(angle), std::sin(angle)) - 1.0) /
                                        std::complex<double>(0, 2 * std::numbers::pi * 5);
  CHECK(std::abs(value - expected) < 1e-14);
}

TEST_CASE("limit series is centered and stable under truncation") {
  const double t = 0.3;
  const LimitSeriesCoefficients coeffs(t, 500);
  std::complex<double> sum{};
  double sum_norm = 0;
  const std::size_t seeds = 10000;
  for (std::size_t s = 0; s < seeds; ++s) {
    const auto v = coeffs.evaluate(LimitSeriesSample(MuSampler(derive_seed(1, s)), 500));
    sum += v;
    sum_norm += std::norm(v);
  }
  const auto mean = sum / static_cast<double>(seeds);
  const double se = std::sqrt(sum_norm / seeds / seeds);
  CHECK(std::abs(mean.real()) <= 3 * se);
  CHECK(std::abs(mean.imag()) <= 3 * se);

  std::vector<LimitSeriesCoefficients> short_c, long_c;
  for (int i = 0; i < 100; ++i) {
    short_c.emplace_back((i + 0.5) / 100, 500);
    long_c.emplace_back((i + 0.5) / 100, 2000);
  }
  std::vector<double> gaps;
  for (std::size_t s = 0; s < 200; ++s) {
    const LimitSeriesSample sample(MuSampler(derive_seed(2, s)), 2000);
    for (int i = 0; i < 100; ++i) gaps.push_back(std::abs(long_c[i].evaluate(sample) - short_c[i].evaluate(sample)));
  }
  std::sort(gaps.begin(), gaps.end());
  CHECK(gaps[gaps.size() * 99 / 100] < 0.05);
}

TEST_CASE("limit series is bit-reproducible") {
  for (double t : {0.1, 0.5, 0.77}) {
    const auto x = limit_series_eval(t, LimitSeriesSample(MuSampler(5), 1000));
    const auto y = limit_series_eval(t, LimitSeriesSample(MuSampler(5), 1000));
    CHECK(x == y);
  }
}

TEST_CASE("truncated surrogate") {
  const PrimePowerModulus m(7, 2);
  const std::uint64_t H = 24;
  const LimitSeriesSample sample(MuSampler(3), H);
  const RationalTime s(10, 48), t(30, 48);
  CHECK(truncated_surrogate(t, t, m, sample) == std::complex<double>{});
  CHECK(truncated_surrogate(t, s, m, LimitSeriesSample(H, std::vector<double>(2 * H + 1, 0.0))) == std::complex<double>{});
  CHECK_THROWS_AS(truncated_surrogate(t, s, m, LimitSeriesSample(MuSampler(3), 10)), InvalidArgument);

  // E|X|^2 = (1/q) sum_h |alpha(h;t) - alpha(h;s)|^2 E U^2, with E U^2 = 1.
  double expected = 0;
  for (std::int64_t h = -24; h <= 24; ++h) expected += std::norm(fourier_coeff(h, t, m) - fourier_coeff(h, s, m));
  expected /= 49;
  double second = 0;
  const std::size_t seeds = 10000;
  for (std::size_t i = 0; i < seeds; ++i) {
    second += std::norm(truncated_surrogate(t, s, m, LimitSeriesSample(MuSampler(derive_seed(4, i)), H)));
  }
  second /= seeds;
  CHECK(std::abs(second / expected - 1) <= 0.05);
}

TEST_CASE("subgaussian parameter") {
  const PrimePowerModulus m(7, 2);
  CHECK(sigma_subgaussian(RationalTime(1, 3), RationalTime(1, 3), m) == 0.0);
  const RationalTime s(1, 10), t(1, 2);
  const auto sq = sigma_squared(s, t, m);
  const auto card = interval_between(s, t, m).cardinality;
  CHECK(sq.plancherel == doctest::Approx(4.0 * card / 49));
  CHECK(std::abs(sq.coefficient_sum - sq.plancherel) <= 1e-8 * 49);
  CHECK(sigma_subgaussian(s, t, m) == doctest::Approx(std::sqrt(4.0 * card / 49)));

  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::uint64_t> td(0, 3072);
  for (int i = 0; i < 300; ++i) {
    std::uint64_t a = td(rng), b = td(rng);
    if (a > b) std::swap(a, b);
    const auto v = sigma_squared(RationalTime(a, 3072), RationalTime(b, 3072), m);
    CHECK(std::abs(v.coefficient_sum - v.plancherel) <= 1e-8 * 49);
  }
}
