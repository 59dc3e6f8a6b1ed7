#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "klpath/error.hpp"
#include "klpath/kloosterman.hpp"
#include "klpath/path.hpp"
#include "oracle.hpp"

using namespace klpath;

namespace {

UnitResidue unit(std::int64_t x, const PrimePowerModulus& m) { return UnitResidue(x, m); }

oracle::cplx wide(const std::complex<double>& z) { return {z.real(), z.imag()}; }

}  // namespace

TEST_CASE("index map") {
  CHECK(index_map(1, PrimePowerModulus(3, 2)) == 1);
  CHECK(index_map(1, PrimePowerModulus(101, 2)) == 1);
  CHECK(index_map(3, PrimePowerModulus(3, 2)) == 4);
  CHECK(index_map(5, PrimePowerModulus(5, 2)) == 6);
  for (auto [p, n] : {std::pair{3ULL, 4U}, {7ULL, 3U}, {13ULL, 2U}}) {
    const PrimePowerModulus m(p, n);
    std::uint64_t j = 0;
    for (const auto& u : units(m)) CHECK(index_map(++j, m) == u.value());
    CHECK_THROWS_AS(index_map(0, m), InvalidArgument);
    CHECK_THROWS_AS(index_map(m.phi() + 1, m), InvalidArgument);
  }
}

TEST_CASE("rational times") {
  CHECK_THROWS_AS(RationalTime(1, 0), InvalidArgument);
  CHECK_THROWS_AS(RationalTime(3, 2), InvalidArgument);
  CHECK_THROWS_AS(RationalTime::from_double(-0.1, 10), InvalidArgument);
  CHECK_THROWS_AS(RationalTime::from_double(1.5, 10), InvalidArgument);
  CHECK_THROWS_AS(RationalTime::from_double(std::nan(""), 10), InvalidArgument);
  CHECK(RationalTime(1, 2) == RationalTime(3, 6));
  CHECK(RationalTime(1, 3) < RationalTime(1, 2));
  const auto t = RationalTime::from_double(0.25, 24 * 64);
  CHECK(t.numerator() == 384);
  CHECK(t.value() == 0.25);
  CHECK(RationalTime::from_double(1.0, 7).numerator() == 7);
}

TEST_CASE("segment and block indices are exact at boundaries") {
  const PrimePowerModulus m(5, 2);  // phi - 1 = 19, five blocks
  CHECK(segment_index(RationalTime(0, 1), m) == 0);
  CHECK(segment_index(RationalTime(3, 19), m) == 3);
  CHECK(segment_index(RationalTime(3 * 1000 + 1, 19 * 1000), m) == 4);
  CHECK(block_index(RationalTime(1, 5), m) == 1);
  CHECK(block_index(RationalTime(1001, 5000), m) == 2);
  CHECK(step_endpoint(RationalTime(1, 1), m) == 24);
  CHECK(step_endpoint(RationalTime(0, 1), m) == 0);
  for (std::uint64_t num = 0; num <= 700; ++num) {
    CHECK(step_endpoint(RationalTime(num, 700), m) == (num == 0 ? 0 : oracle::step_endpoint(num, 700, 5, 2)));
  }
}

TEST_CASE("slopes all have modulus (phi - 1) p^(-n/2)") {
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    for (unsigned n = 1; n <= 3; ++n) {
      const PrimePowerModulus m(p, n);
      if (m.phi() < 2) continue;
      auto tables = std::make_shared<const ModulusTables>(m);
      const KloostermanKernel kernel(unit(1, m), tables);
      std::vector<std::complex<double>> knots(m.phi());
      const double expected = static_cast<double>(m.phi() - 1);
      double worst = 0;
      for (std::uint64_t a = 1; a < m.q(); ++a) {
        if (a % p == 0) continue;
        kernel.prefix_sums(a, knots);
        const PathFunction path(m, knots);
        for (const auto& slope : path.slopes()) worst = std::max(worst, std::abs(std::abs(slope) * m.sqrt_q() - expected));
      }
      CHECK_MESSAGE(worst <= 1e-9 * expected, "p = ", p, ", n = ", n);
    }
  }
}

TEST_CASE("path values") {
  const PrimePowerModulus m(7, 2);
  const auto series = partial_sums(unit(3, m), unit(1, m));
  const PathFunction path(series);
  const auto& z = series.values;
  const std::uint64_t phi1 = m.phi() - 1;

  CHECK(path_eval(RationalTime(1, 1), path) == z.back());
  CHECK(path_eval(RationalTime(0, 1), path) == z.front());
  for (std::uint64_t j = 1; j <= phi1; ++j) {
    CHECK(std::abs(path_eval(RationalTime(j, phi1), path) - z[j]) <= 1e-12);
    CHECK(std::abs(path_eval(RationalTime(2 * j - 1, 2 * phi1), path) - (z[j - 1] + z[j]) / 2.0) <= 1e-12);
  }
  CHECK(path.knot(1) == z.front());
  CHECK_THROWS_AS(path.knot(0), InvalidArgument);

  const auto expected_knots = oracle::prefix_sums(3, 1, 7, 2);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint64_t> num(0, 100'000);
  for (int i = 0; i < 2000; ++i) {
    const RationalTime t(num(rng), 100'000);
    const auto value = path_eval(t, path);
    CHECK(std::abs(wide(value) - oracle::path_value(expected_knots, t.numerator(), t.denominator())) <= 1e-12);
    CHECK(std::abs(value - path_value(z, t, m)) < 1e-14);
  }
}

TEST_CASE("step approximation") {
  const PrimePowerModulus m(5, 2);
  const auto a = unit(2, m), b = unit(1, m);
  const auto series = partial_sums(a, b);
  CHECK(std::abs(step_approx(RationalTime(1, 1), a, b) - series.values.back()) < 1e-14);
  CHECK(std::abs(step_approx(RationalTime(1, 1), series).real() - full_sum(a, b)) < 1e-14);

  const RationalTime tiny(1, 1000);  // floor(x_k) = floor(20/1000) + 1 - 1 = 0
  CHECK(step_endpoint(tiny, m) == 0);
  CHECK(step_approx(tiny, a, b) == std::complex<double>{});
  CHECK(step_approx(tiny, series) == std::complex<double>{});

  CHECK_THROWS_AS(step_approx(RationalTime(0, 1), a, b), InvalidArgument);
  CHECK_THROWS_AS(step_approx(RationalTime(0, 1), series), InvalidArgument);
  CHECK(step_approx(RationalTime(0, 1), a, b, ZeroTime::allow) == std::complex<double>{});

  const auto knots = oracle::prefix_sums(2, 1, 5, 2);
  for (std::uint64_t num = 1; num <= 500; ++num) {
    const RationalTime t(num, 500);
    const std::uint64_t last = oracle::step_endpoint(num, 500, 5, 2);
    oracle::cplx expected{};
    if (last > 0) expected = knots[unit_rank(last, 5) - 1];
    CHECK(std::abs(wide(step_approx(t, a, b)) - expected) < 1e-12);
    CHECK(std::abs(step_approx(t, series) - step_approx(t, a, b)) < 1e-12);
  }
}

TEST_CASE("path and step approximation differ by at most 6 p^(-n/2)") {
  for (std::uint64_t p : {5ULL, 7ULL}) {
    const PrimePowerModulus m(p, 2);
    const std::uint64_t grid = 2000;
    auto tables = std::make_shared<const ModulusTables>(m);
    const KloostermanKernel kernel(unit(1, m), tables);
    std::vector<std::complex<double>> knots(m.phi());
    double worst = 0;
    for (std::uint64_t a = 1; a < m.q(); ++a) {
      if (a % p == 0) continue;
      kernel.prefix_sums(a, knots);
      for (std::uint64_t i = 1; i <= grid; ++i) {
        const RationalTime t(i, grid);
        worst = std::max(worst, std::abs(path_value(knots, t, m) - step_value(knots, t, m)));
      }
    }
    CHECK(worst <= 6 / m.sqrt_q());
  }
}

TEST_CASE("Fourier coefficients") {
  const PrimePowerModulus m(7, 2);
  const RationalTime t(3, 10);
  CHECK(fourier_coeff(0, t, m) == std::complex<double>(step_endpoint(t, m) / 7.0, 0));
  CHECK_THROWS_AS(fourier_coeff(1, RationalTime(0, 1), m), InvalidArgument);
  CHECK(fourier_coeff(1, RationalTime(0, 1), m, FourierConvention::all_x, ZeroTime::allow) == std::complex<double>{});

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> hd(-200, 200);
  std::uniform_int_distribution<std::uint64_t> td(1, 4800);
  for (int i = 0; i < 1000; ++i) {
    const std::int64_t h = hd(rng);
    const RationalTime s(td(rng), 4800);
    CHECK(std::abs(fourier_coeff(-h, s, m) - std::conj(fourier_coeff(h, s, m))) < 1e-12);
    CHECK(std::abs(fourier_coeff(h + 49, s, m) - fourier_coeff(h, s, m)) < 1e-12);

    const std::uint64_t last = oracle::step_endpoint(s.numerator(), 4800, 7, 2);
    oracle::cplx all{}, coprime{};
    const std::uint64_t hr = static_cast<std::uint64_t>((h % 49 + 49) % 49);
    for (std::uint64_t x = 1; x <= last; ++x) {
      const auto r = oracle::root(hr * x % 49, 49);
      all += r;
      if (x % 7) coprime += r;
    }
    CHECK(std::abs(wide(fourier_coeff(h, s, m)) - all / 7.0L) < 1e-12);
    CHECK(std::abs(wide(fourier_coeff(h, s, m, FourierConvention::coprime_x)) - coprime / 7.0L) < 1e-12);
  }
}

TEST_CASE("interval between two times") {
  const PrimePowerModulus m(5, 2);
  CHECK_THROWS_AS(interval_between(RationalTime(1, 2), RationalTime(1, 2), m), InvalidArgument);
  CHECK_THROWS_AS(interval_between(RationalTime(1, 2), RationalTime(1, 3), m), InvalidArgument);

  // Both in block 2 with the same floor of x_k: empty.
  const auto empty = interval_between(RationalTime(2100, 10000), RationalTime(2101, 10000), m);
  CHECK(empty.cardinality == 0);

  // s just above 0 in block 1 and t = 1: x_1(s) = 20 s, x_5(1) = 24.
  const auto full = interval_between(RationalTime(1, 1000), RationalTime(1, 1), m);
  CHECK(full.lower.numerator == 20);
  CHECK(full.lower.denominator == 1000);
  CHECK(full.upper.value() == 24.0);
  CHECK(full.cardinality == 24);
  CHECK(interval_between(RationalTime(0, 1), RationalTime(1, 1), m).cardinality == 24);

  // The cardinality counts step endpoints crossed; once (phi - 1)(t - s) >= 1 it is at most 8 (phi - 1)(t - s).
  std::mt19937_64 rng(3);
  for (auto [p, n] : {std::pair{5ULL, 2U}, {7ULL, 2U}, {3ULL, 4U}, {11ULL, 2U}}) {
    const PrimePowerModulus mm(p, n);
    std::uniform_int_distribution<std::uint64_t> td(0, 9999);
    for (int i = 0; i < 10000; ++i) {
      std::uint64_t s = td(rng), t = td(rng);
      if (s == t) continue;
      if (s > t) std::swap(s, t);
      const RationalTime rs(s, 9999), rt(t, 9999);
      const auto interval = interval_between(rs, rt, mm);
      CHECK(interval.cardinality == step_endpoint(rt, mm) - step_endpoint(rs, mm));
      if ((mm.phi() - 1) * (t - s) >= 9999) {
        const double span = 8.0 * static_cast<double>(mm.phi() - 1) * (rt.value() - rs.value());
        CHECK(static_cast<double>(interval.cardinality) <= span);
      }
    }
  }
}

TEST_CASE("Plancherel identity for coefficient increments") {
  const PrimePowerModulus m(7, 2);
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::uint64_t> td(0, 48 * 64);
  for (int i = 0; i < 1000; ++i) {
    std::uint64_t s = td(rng), t = td(rng);
    if (s == t) continue;
    if (s > t) std::swap(s, t);
    const RationalTime rs(s, 48 * 64), rt(t, 48 * 64);
    double energy = 0;
    for (std::int64_t h = 0; h < 49; ++h) {
      energy += std::norm(fourier_coeff(h, rt, m) - fourier_coeff(h, rs, m, FourierConvention::all_x, ZeroTime::allow));
    }
    CHECK(std::abs(energy - static_cast<double>(interval_between(rs, rt, m).cardinality)) <= 1e-8 * 49);
  }
}

TEST_CASE("CSV export") {
  const PrimePowerModulus m(5, 2);
  const PathFunction path(partial_sums(unit(1, m), unit(1, m)));
  std::ostringstream out;
  write_path_csv(out, path);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "j,t,re,im");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream fields(line);
    std::string j, t, re, im;
    std::getline(fields, j, ',');
    std::getline(fields, t, ',');
    std::getline(fields, re, ',');
    std::getline(fields, im, ',');
    CHECK(std::stoul(j) == rows);
    CHECK(std::stod(t) == static_cast<double>(rows - 1) / 19.0);
    CHECK(std::stod(re) == path.knot(rows).real());
    CHECK(std::stod(im) == path.knot(rows).imag());
  }
  CHECK(rows == 20);
}
