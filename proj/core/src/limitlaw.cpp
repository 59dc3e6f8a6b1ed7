#include "klpath/limitlaw.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "klpath/error.hpp"

namespace klpath {

double MuSampler::operator()(std::int64_t h) const noexcept {
  const auto block = gen_(static_cast<std::uint64_t>(h), 0);
  if ((block[0] & 1U) == 0) return 0.0;
  const std::uint64_t bits = static_cast<std::uint64_t>(block[2]) | static_cast<std::uint64_t>(block[3]) << 32;
  return 2.0 * std::cos(std::numbers::pi * open_unit(bits));
}

double sample_mu(const MuSampler& sampler, std::int64_t h) noexcept { return sampler(h); }

LimitSeriesSample::LimitSeriesSample(const MuSampler& sampler, std::uint64_t truncation)
    : truncation_(truncation), draws_(2 * truncation + 1) {
  const auto H = static_cast<std::int64_t>(truncation);
  for (std::int64_t h = -H; h <= H; ++h) draws_[static_cast<std::size_t>(h + H)] = sampler(h);
}

LimitSeriesSample::LimitSeriesSample(std::uint64_t truncation, std::vector<double> draws)
    : truncation_(truncation), draws_(std::move(draws)) {
  if (draws_.size() != 2 * truncation + 1) throw InvalidArgument("a truncation-H sample needs 2H + 1 draws");
}

LimitSeriesCoefficients::LimitSeriesCoefficients(double t, std::uint64_t truncation)
    : t_(t), re_(truncation), im_(truncation) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("time " + std::to_string(t) + " lies outside [0, 1]");
  if (truncation == 0) throw InvalidArgument("truncation H must be >= 1");
  for (std::uint64_t h = 1; h <= truncation; ++h) {
    // Fractional part of h t in [-1/2, 1/2].
    long double turns = static_cast<long double>(h) * t;
    turns -= std::nearbyint(turns);
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(turns);
    const double denom = 2.0 * std::numbers::pi * static_cast<double>(h);
    re_[h - 1] = std::sin(angle) / denom;
    im_[h - 1] = (1.0 - std::cos(angle)) / denom;
  }
}

std::complex<double> LimitSeriesCoefficients::evaluate(const LimitSeriesSample& sample) const {
  const std::uint64_t H = std::min<std::uint64_t>(truncation(), sample.truncation());
  const double* u = sample.draws().data() + sample.truncation();  // u[h] = U_h
  double re = t_ * u[0];
  double im = 0.0;
  for (std::uint64_t h = 1; h <= H; ++h) {
    const auto sh = static_cast<std::ptrdiff_t>(h);
    // c_h U_h + conj(c_h) U_{-h}
    re += re_[h - 1] * (u[sh] + u[-sh]);
    im += im_[h - 1] * (u[sh] - u[-sh]);
  }
  return {re, im};
}

std::complex<double> limit_series_eval(double t, const LimitSeriesSample& sample) {
  if (sample.truncation() == 0) throw InvalidArgument("truncation H must be >= 1");
  return LimitSeriesCoefficients(t, sample.truncation()).evaluate(sample);
}

std::complex<double> truncated_surrogate(const RationalTime& t, const RationalTime& s, const PrimePowerModulus& m,
                                         const LimitSeriesSample& sample) {
  const std::uint64_t half = (m.q() - 1) / 2;
  if (sample.truncation() != half) {
    throw InvalidArgument("the surrogate needs H = (q-1)/2 = " + std::to_string(half) + ", got H = " +
                          std::to_string(sample.truncation()));
  }
  if (s == t) return {};
  std::complex<double> sum{};
  const auto H = static_cast<std::int64_t>(half);
  for (std::int64_t h = -H; h <= H; ++h) {
    const double u = sample.draw(h);
    if (u == 0.0) continue;
    const std::complex<double> delta = fourier_coeff(h, t, m, FourierConvention::all_x, ZeroTime::allow) -
                                       fourier_coeff(h, s, m, FourierConvention::all_x, ZeroTime::allow);
    sum += delta * u;
  }
  return sum / m.sqrt_q();
}

SigmaSquared sigma_squared(const RationalTime& s, const RationalTime& t, const PrimePowerModulus& m) {
  if (s == t) return {0.0, 0.0};
  const IntegerInterval interval = interval_between(s, t, m);
  const auto H = static_cast<std::int64_t>((m.q() - 1) / 2);
  double coefficient_sum = 0.0;
  for (std::int64_t h = -H; h <= H; ++h) {
    coefficient_sum += std::norm(fourier_coeff(h, t, m, FourierConvention::all_x, ZeroTime::allow) -
                                 fourier_coeff(h, s, m, FourierConvention::all_x, ZeroTime::allow));
  }
  const double q = static_cast<double>(m.q());
  return {4.0 * coefficient_sum / q, 4.0 * static_cast<double>(interval.cardinality) / q};
}

double sigma_subgaussian(const RationalTime& s, const RationalTime& t, const PrimePowerModulus& m) {
  const SigmaSquared both = sigma_squared(s, t, m);
  if (std::abs(both.coefficient_sum - both.plancherel) > 1e-8 * static_cast<double>(m.q())) {
    throw std::logic_error("Plancherel identity violated: coefficient sum " + std::to_string(both.coefficient_sum) +
                           " vs " + std::to_string(both.plancherel));
  }
  return std::sqrt(both.plancherel);
}

}  // namespace klpath
