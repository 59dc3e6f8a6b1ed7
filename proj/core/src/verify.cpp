#include "klpath/verify.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "klpath/bounds.hpp"
#include "klpath/counter_rng.hpp"
#include "klpath/error.hpp"
#include "klpath/kloosterman.hpp"
#include "klpath/limitlaw.hpp"
#include "klpath/parallel.hpp"
#include "klpath/stats.hpp"

namespace klpath {
namespace {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

constexpr std::size_t kUnitsPerChunk = 32;

void require_exact_average_size(const PrimePowerModulus& m) {
  if (m.q() > kMaxExactAverageModulus) {
    throw InvalidArgument("q = " + std::to_string(m.q()) + " exceeds " + std::to_string(kMaxExactAverageModulus) +
                          "; averages over all units are not computed at this size");
  }
}

void require_even_alpha(unsigned alpha) {
  if (alpha < 2 || alpha % 2 != 0) throw InvalidArgument("alpha must be an even integer >= 2");
}

std::vector<std::uint64_t> unit_list(const PrimePowerModulus& m) {
  std::vector<std::uint64_t> out;
  out.reserve(m.phi());
  for (std::uint64_t x = 1; x < m.q(); ++x) {
    if (m.is_unit(x)) out.push_back(x);
  }
  return out;
}

// Calls visit(chunk, row, knots) for every unit a (row = index of a in J),
// with the normalized prefix sums of (a, b0) as knots. Chunks are fixed-size
// and independent of the thread count.
template <class Visit>
void sweep_units(const UnitResidue& b0, unsigned threads, Visit&& visit) {
  const PrimePowerModulus& m = b0.modulus();
  const KloostermanKernel kernel(b0);
  const std::vector<std::uint64_t> units = unit_list(m);
  parallel_chunks(chunk_count(units.size(), kUnitsPerChunk), threads, [&](std::size_t chunk) {
    std::vector<std::complex<double>> knots(m.phi());
    const std::size_t first = chunk * kUnitsPerChunk;
    const std::size_t last = std::min(first + kUnitsPerChunk, units.size());
    for (std::size_t row = first; row < last; ++row) {
      kernel.prefix_sums(units[row], knots);
      visit(chunk, row, std::span<const std::complex<double>>(knots));
    }
  });
}

double even_power(double squared_modulus, unsigned alpha) noexcept {
  double r = 1.0;
  for (unsigned k = 0; k < alpha / 2; ++k) r *= squared_modulus;
  return r;
}

Rational exact(double v) { return Rational(v); }

}  // namespace

std::vector<double> moments(std::span<const TimePair> pairs, unsigned alpha, const UnitResidue& b0, unsigned threads) {
  require_even_alpha(alpha);
  const PrimePowerModulus& m = b0.modulus();
  require_exact_average_size(m);

  const std::size_t chunks = chunk_count(m.phi(), kUnitsPerChunk);
  std::vector<std::vector<double>> partial(chunks, std::vector<double>(pairs.size(), 0.0));
  sweep_units(b0, threads, [&](std::size_t chunk, std::size_t, std::span<const std::complex<double>> knots) {
    std::vector<double>& acc = partial[chunk];
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const std::complex<double> d = path_value(knots, pairs[i].t, m) - path_value(knots, pairs[i].s, m);
      acc[i] += even_power(std::norm(d), alpha);
    }
  });

  std::vector<double> result(pairs.size(), 0.0);
  for (const auto& acc : partial) {
    for (std::size_t i = 0; i < pairs.size(); ++i) result[i] += acc[i];
  }
  for (double& v : result) v /= static_cast<double>(m.phi());
  return result;
}

double moment(const RationalTime& s, const RationalTime& t, unsigned alpha, const UnitResidue& b0, unsigned threads) {
  const TimePair pair{s, t};
  return moments(std::span(&pair, 1), alpha, b0, threads).front();
}

std::uint64_t smallest_admissible_alpha(unsigned n, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidArgument("delta must be a positive finite number");
  const Rational d = exact(delta);
  const Rational nn(static_cast<std::uint64_t>(n));
  const Rational by_n = nn / d;
  const Rational by_half = (nn / 2 + d) / d;
  const Rational bound = std::max(by_n, by_half);
  // Smallest even integer strictly above bound: 2 floor(bound / 2) + 2.
  const Rational half = bound / 2;
  const BigInt alpha = 2 * (numerator(half) / denominator(half)) + 2;
  if (alpha > BigInt(std::numeric_limits<std::uint64_t>::max())) {
    throw InvalidArgument("admissible alpha does not fit in 64 bits");
  }
  return alpha.convert_to<std::uint64_t>();
}

double beta_parameter(unsigned n, double delta, std::uint64_t alpha) {
  const DeltaWindow window = delta_admissible(n);
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw HypothesisViolation("hypotheses of the tightness proof unmet: delta must be positive");
  }
  const Rational d = exact(delta);
  if (d > Rational(window.numerator, window.denominator)) {
    throw HypothesisViolation("hypotheses of the tightness proof unmet: delta exceeds min(gamma2 n/16, n/2 - 15)");
  }
  if (alpha % 2 != 0) throw HypothesisViolation("hypotheses of the tightness proof unmet: alpha must be even");
  const Rational a(alpha);
  const Rational nn(static_cast<std::uint64_t>(n));
  if (!(a > nn / d && a > (nn / 2 + d) / d)) {
    throw HypothesisViolation("hypotheses of the tightness proof unmet: alpha must exceed max(n/delta, (n/2+delta)/delta)");
  }
  const Rational candidates[] = {a / 2, a * d / nn, Rational(2), d * a / (nn / 2 + d), 1 + d / (nn / 2 - d)};
  const Rational beta = *std::min_element(std::begin(candidates), std::end(candidates)) - 1;
  if (beta <= 0) throw std::logic_error("beta is not positive under the admissible hypotheses");
  return beta.convert_to<double>();
}

MomentReport tightness_scan(const UnitResidue& b0, unsigned alpha, const TightnessParams& params) {
  require_even_alpha(alpha);
  const PrimePowerModulus& m = b0.modulus();
  require_exact_average_size(m);
  if (params.grid_factor == 0) throw InvalidArgument("grid factor must be >= 1");
  if (params.samples_per_gap == 0) throw InvalidArgument("samples per gap must be >= 1");
  const std::uint64_t den = (m.phi() - 1) * params.grid_factor;

  std::vector<std::uint64_t> gap_numerators;
  std::vector<TimePair> pairs;
  for (std::size_t g = 0; g < params.gaps.size(); ++g) {
    const double gap = params.gaps[g];
    if (!(gap > 0.0 && gap <= 1.0)) throw InvalidArgument("gap " + std::to_string(gap) + " lies outside (0, 1]");
    const std::uint64_t gnum = std::clamp<std::uint64_t>(RationalTime::from_double(gap, den).numerator(), 1, den);
    gap_numerators.push_back(gnum);
    CounterStream rng(params.seed, g);
    for (std::size_t i = 0; i < params.samples_per_gap; ++i) {
      const std::uint64_t s = bounded(rng.next(), den - gnum + 1);
      pairs.push_back({RationalTime(s, den), RationalTime(s + gnum, den)});
    }
  }
  const std::vector<double> values = moments(pairs, alpha, b0, params.threads);

  MomentReport report{};
  report.p = m.p();
  report.n = m.n();
  report.b0 = b0.value();
  report.alpha = alpha;
  report.seed = params.seed;
  report.time_denominator = den;

  std::vector<double> log_gap;
  std::vector<double> log_moment;
  const double two_alpha = std::ldexp(1.0, static_cast<int>(alpha));
  for (std::size_t g = 0; g < gap_numerators.size(); ++g) {
    const double gap = static_cast<double>(gap_numerators[g]) / static_cast<double>(den);
    const bool small_gap = static_cast<u128>(m.phi() - 1) * gap_numerators[g] <= den;
    const double bound = two_alpha * std::pow(gap, alpha / 2.0);
    GapSummary summary{gap, 0.0, 0};
    for (std::size_t i = 0; i < params.samples_per_gap; ++i) {
      const std::size_t k = g * params.samples_per_gap + i;
      const MomentSample sample{pairs[k].s.value(), pairs[k].t.value(), values[k]};
      report.samples.push_back(sample);
      summary.mean_moment += values[k];
      if (values[k] == 0.0) ++summary.zero_moments;
      if (small_gap && values[k] > bound) report.violations.push_back({sample.s, sample.t, values[k], bound});
    }
    summary.mean_moment /= static_cast<double>(params.samples_per_gap);
    if (summary.mean_moment > 0.0) {
      log_gap.push_back(std::log(gap));
      log_moment.push_back(std::log(summary.mean_moment));
    } else {
      ++report.excluded_from_fit;
    }
    report.gaps.push_back(summary);
  }
  if (const auto fit = least_squares(log_gap, log_moment)) {
    report.fitted_slope = fit->slope;
    report.fitted_intercept = fit->intercept;
  }
  try {
    report.beta_prediction = beta_parameter(m.n(), delta_admissible(m.n()).delta_max, alpha);
  } catch (const HypothesisViolation&) {
    report.beta_prediction.reset();
  }
  return report;
}

LawComparisonReport compare_laws(const UnitResidue& b0, const LawParams& params) {
  const PrimePowerModulus& m = b0.modulus();
  require_exact_average_size(m);
  if (params.t_points.empty()) throw InvalidArgument("no t points requested");
  if (params.mc_samples == 0) throw InvalidArgument("at least one Monte Carlo sample is needed");
  if (params.grid_factor == 0) throw InvalidArgument("grid factor must be >= 1");
  const std::uint64_t H = params.truncation == 0 ? m.q() : params.truncation;
  const std::uint64_t den = (m.phi() - 1) * params.grid_factor;

  std::vector<RationalTime> times;
  std::vector<LimitSeriesCoefficients> coefficients;
  for (double t : params.t_points) {
    times.push_back(RationalTime::from_double(t, den));
    coefficients.emplace_back(times.back().value(), H);
  }
  const std::size_t nt = times.size();
  const std::size_t phi = m.phi();

  std::vector<double> path_re(nt * phi);
  std::vector<double> path_im(nt * phi);
  std::vector<std::size_t> zeros(chunk_count(phi, kUnitsPerChunk), 0);
  sweep_units(b0, params.threads, [&](std::size_t chunk, std::size_t row, std::span<const std::complex<double>> knots) {
    for (std::size_t k = 0; k < nt; ++k) {
      const std::complex<double> v = path_value(knots, times[k], m);
      path_re[k * phi + row] = v.real();
      path_im[k * phi + row] = v.imag();
    }
    if (std::abs(knots.back()) < 1e-9) ++zeros[chunk];
  });

  const std::size_t ns = params.mc_samples;
  std::vector<double> limit_re(nt * ns);
  std::vector<double> limit_im(nt * ns);
  constexpr std::size_t kSamplesPerChunk = 64;
  parallel_chunks(chunk_count(ns, kSamplesPerChunk), params.threads, [&](std::size_t chunk) {
    const std::size_t first = chunk * kSamplesPerChunk;
    const std::size_t last = std::min(first + kSamplesPerChunk, ns);
    for (std::size_t i = first; i < last; ++i) {
      const LimitSeriesSample sample(MuSampler(derive_seed(params.seed, i)), H);
      for (std::size_t k = 0; k < nt; ++k) {
        const std::complex<double> v = coefficients[k].evaluate(sample);
        limit_re[k * ns + i] = v.real();
        limit_im[k * ns + i] = v.imag();
      }
    }
  });

  LawComparisonReport report{m.p(), m.n(), b0.value(), H, ns, params.seed, {}, 0.0};
  std::size_t zero_count = 0;
  for (std::size_t z : zeros) zero_count += z;
  report.zero_mass_fraction = static_cast<double>(zero_count) / static_cast<double>(phi);
  for (std::size_t k = 0; k < nt; ++k) {
    const std::span<const double> pr(path_re.data() + k * phi, phi);
    const std::span<const double> pi(path_im.data() + k * phi, phi);
    const std::span<const double> lr(limit_re.data() + k * ns, ns);
    const std::span<const double> li(limit_im.data() + k * ns, ns);
    const std::size_t nq = params.quantile_count;
    report.times.push_back({times[k].value(), ks_distance(pr, lr), ks_distance(pi, li),
                            quantiles({pr.begin(), pr.end()}, nq), quantiles({pi.begin(), pi.end()}, nq),
                            quantiles({lr.begin(), lr.end()}, nq), quantiles({li.begin(), li.end()}, nq)});
  }
  return report;
}

SupReport sup_statistics(const UnitResidue& b0, std::span<const RationalTime> t_grid, unsigned threads) {
  if (t_grid.empty()) throw InvalidArgument("sup statistics need a nonempty t grid");
  const PrimePowerModulus& m = b0.modulus();
  require_exact_average_size(m);
  struct Best {
    double value = -1.0;
    std::uint64_t a = 0;
    double t = 0.0;
  };
  const std::vector<std::uint64_t> units = unit_list(m);
  std::vector<Best> best(chunk_count(units.size(), kUnitsPerChunk));
  sweep_units(b0, threads, [&](std::size_t chunk, std::size_t row, std::span<const std::complex<double>> knots) {
    Best& b = best[chunk];
    for (const RationalTime& t : t_grid) {
      const double v = std::abs(step_value(knots, t, m));
      if (v > b.value) b = {v, units[row], t.value()};
    }
  });
  Best overall;
  for (const Best& b : best) {
    if (b.value > overall.value) overall = b;
  }
  const double log_q = std::log(static_cast<double>(m.q()));
  return {overall.value, log_q, overall.value / log_q, overall.a, overall.t};
}

}  // namespace klpath
