#include "klpath/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "klpath/bounds.hpp"
#include "klpath/counter_rng.hpp"
#include "klpath/error.hpp"
#include "klpath/kloosterman.hpp"
#include "klpath/limitlaw.hpp"
#include "klpath/output.hpp"
#include "klpath/parallel.hpp"
#include "klpath/path.hpp"
#include "klpath/plot.hpp"
#include "klpath/report_json.hpp"
#include "klpath/verify.hpp"

namespace klpath::cli {
namespace {

std::uint64_t time_denominator(const PrimePowerModulus& m, std::uint64_t grid_factor) {
  if (grid_factor == 0) throw InvalidArgument("grid factor must be >= 1");
  return std::max<std::uint64_t>(m.phi() - 1, 1) * grid_factor;
}

std::ofstream open_output(const std::string& file, RunContext& ctx) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + file + " for writing");
  ctx.outputs.emplace_back(file);
  return out;
}

void write_report(const std::string& file, const nlohmann::json& doc, RunContext& ctx) {
  if (file.empty()) return;
  write_json(file, doc);
  ctx.outputs.emplace_back(file);
}

}  // namespace

void run_sum(const Options& o, RunContext& ctx) {
  const PrimePowerModulus m(o.p, o.n);
  const UnitResidue a(o.a, m), b(o.b, m);
  if (o.prefix != 0) {
    if (o.prefix >= m.q() || !m.is_unit(o.prefix)) {
      throw InvalidArgument("prefix " + std::to_string(o.prefix) + " is not an element of J");
    }
    const auto series = partial_sums(a, b);
    ctx.out << sig12(series.values[unit_rank(o.prefix, m.p()) - 1]) << '\n';
  } else if (o.complex) {
    ctx.out << sig12(full_sum_complex(a, b)) << '\n';
  } else {
    ctx.out << sig12(full_sum(a, b)) << '\n';
  }
}

void run_path(const Options& o, RunContext& ctx) {
  const PrimePowerModulus m(o.p, o.n);
  if (m.phi() < 2) throw InvalidArgument("the path needs phi(q) >= 2");
  const PathFunction path(partial_sums(UnitResidue(o.a, m), UnitResidue(o.b, m)));
  if (!o.export_path.empty()) {
    auto out = open_output(o.export_path, ctx);
    write_path_csv(out, path);
  }
  ctx.out << "knots " << path.knots().size() << '\n';
  ctx.out << "end " << sig12(path.knots().back()) << '\n';
  const std::uint64_t den = time_denominator(m, o.grid_factor);
  for (double t : o.times) {
    const RationalTime rt = RationalTime::from_double(t, den);
    ctx.out << sig12(rt.value()) << ' ' << sig12(path_eval(rt, path)) << '\n';
  }
}

void run_moments(const Options& o, RunContext& ctx) {
  const PrimePowerModulus m(o.p, o.n);
  const UnitResidue b0(o.b, m);
  if (o.s_times.size() != o.times.size()) throw InvalidArgument("--s and --t need the same number of values");
  const std::uint64_t den = time_denominator(m, o.grid_factor);
  std::vector<TimePair> pairs;
  for (std::size_t i = 0; i < o.times.size(); ++i) {
    pairs.push_back({RationalTime::from_double(o.s_times[i], den), RationalTime::from_double(o.times[i], den)});
  }
  const auto values = moments(pairs, o.alpha, b0, o.threads);

  MomentReport report{};
  report.p = m.p();
  report.n = m.n();
  report.b0 = b0.value();
  report.alpha = o.alpha;
  report.seed = o.seed;
  report.time_denominator = den;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    report.samples.push_back({pairs[i].s.value(), pairs[i].t.value(), values[i]});
    ctx.out << sig12(pairs[i].s.value()) << ' ' << sig12(pairs[i].t.value()) << ' ' << sig12(values[i]) << '\n';
  }
  write_report(o.out, to_json(report), ctx);
}

void run_scan_tightness(const Options& o, RunContext& ctx) {
  const PrimePowerModulus m(o.p, o.n);
  TightnessParams params;
  params.gaps = o.gaps;
  if (params.gaps.empty()) {
    const double lo = o.gap_min > 0 ? o.gap_min : 10.0 / static_cast<double>(m.phi());
    const double hi = o.gap_max;
    if (!(lo > 0 && hi >= lo && hi <= 1)) throw InvalidArgument("need 0 < gap-min <= gap-max <= 1");
    if (o.gap_count == 0) throw InvalidArgument("gap-count must be >= 1");
    for (std::size_t i = 0; i < o.gap_count; ++i) {
      const double f = o.gap_count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(o.gap_count - 1);
      params.gaps.push_back(lo * std::pow(hi / lo, f));
    }
  }
  params.samples_per_gap = o.samples_per_gap;
  params.seed = o.seed;
  params.grid_factor = o.grid_factor;
  params.threads = o.threads;
  const MomentReport report = tightness_scan(UnitResidue(o.b, m), o.alpha, params);

  ctx.out << "gap mean_moment zero_moments\n";
  for (const GapSummary& g : report.gaps) {
    ctx.out << sig12(g.gap) << ' ' << sig12(g.mean_moment) << ' ' << g.zero_moments << '\n';
  }
  ctx.out << "fitted_slope " << (report.fitted_slope ? sig12(*report.fitted_slope) : "absent") << '\n';
  ctx.out << "excluded_from_fit " << report.excluded_from_fit << '\n';
  ctx.out << "violations " << report.violations.size() << '\n';
  ctx.out << "beta_prediction "
          << (report.beta_prediction ? sig12(*report.beta_prediction) : "unavailable (needs n >= 31)") << '\n';
  write_report(o.out, to_json(report), ctx);
}

void run_compare_law(const Options& o, RunContext& ctx) {
  const PrimePowerModulus m(o.p, o.n);
  LawParams params;
  params.t_points = o.times;
  params.truncation = o.truncation;
  params.mc_samples = o.mc_samples;
  params.seed = o.seed;
  params.grid_factor = o.grid_factor;
  params.quantile_count = o.quantiles;
  params.threads = o.threads;
  const LawComparisonReport report = compare_laws(UnitResidue(o.b, m), params);

  ctx.out << "t ks_re ks_im\n";
  for (const LawAtTime& t : report.times) {
    ctx.out << sig12(t.t) << ' ' << sig12(t.ks_re) << ' ' << sig12(t.ks_im) << '\n';
  }
  ctx.out << "zero_mass_fraction " << sig12(report.zero_mass_fraction) << '\n';
  write_report(o.out, to_json(report), ctx);
}

void run_bounds(const Options& o, RunContext& ctx) {
  const PrimePower pp(o.p, o.n);
  if (o.delta_window) {
    const DeltaWindow w = delta_admissible(o.n);
    ctx.out << "delta_max " << sig12(w.delta_max) << " (exact " << w.numerator << "/" << w.denominator << ")\n";
  }
  if (o.chain_delta) {
    ctx.out << "exponent_chain " << sig12(*o.chain_delta) << ' '
            << (exponent_chain_check(*o.chain_delta, o.n) ? "holds" : "fails") << '\n';
  }

  std::vector<std::uint64_t> lengths = o.N_values;
  if (lengths.empty()) {
    const long double log_upper = std::min<long double>(o.n * std::log(static_cast<long double>(o.p)) / 2,
                                                        63 * std::numbers::ln2_v<long double>);
    const std::size_t count = std::max<std::size_t>(o.N_count, 2);
    for (std::size_t i = 0; i < count; ++i) {
      const long double x = log_upper * static_cast<long double>(i) / static_cast<long double>(count - 1);
      const auto N = static_cast<std::uint64_t>(std::min<long double>(std::floor(std::exp(x) + 0.5L), 9223372036854775807.0L));
      if (lengths.empty() || N > lengths.back()) lengths.push_back(std::max<std::uint64_t>(N, 1));
    }
  }

  std::ostringstream csv;
  csv << "N,condition,bound,bound_over_N,trivial,sqrt_N\n";
  if (o.format == "csv") {
    ctx.out << "N,condition,bound,bound_over_N,trivial,sqrt_N\n";
  } else {
    ctx.out << "N condition bound bound/N trivial sqrt(N)\n";
  }
  for (std::uint64_t N : lengths) {
    const bool condition = korolev_condition(N, pp);
    const double bound = korolev_bound(N, pp, o.factor4);
    const double dN = static_cast<double>(N);
    csv << N << ',' << (condition ? 1 : 0) << ',' << exact_decimal(bound) << ',' << exact_decimal(bound / dN) << ','
        << N << ',' << exact_decimal(std::sqrt(dN)) << '\n';
    if (o.format == "csv") {
      ctx.out << N << ',' << (condition ? 1 : 0) << ',' << sig12(bound) << ',' << sig12(bound / dN) << ',' << N << ','
              << sig12(std::sqrt(dN)) << '\n';
    } else {
      ctx.out << N << ' ' << (condition ? "true" : "false") << ' ' << sig12(bound) << ' ' << sig12(bound / dN) << ' '
              << N << ' ' << sig12(std::sqrt(dN)) << '\n';
    }
  }
  if (!o.export_path.empty()) {
    auto out = open_output(o.export_path, ctx);
    out << csv.str();
  }

  if (o.scan) {
    const PrimePowerModulus m(o.p, o.n);
    if (m.q() > kMaxExactAverageModulus) throw InvalidArgument("--scan needs q <= 1e6");
    const UnitResidue b(o.b, m);
    std::vector<std::uint64_t> starts;
    for (std::size_t i = 0; i < std::max<std::size_t>(o.starts, 1); ++i) starts.push_back(i * m.q() / std::max<std::size_t>(o.starts, 1));
    ctx.out << "scan N max_abs mean_abs max/N max/sqrt(N) max/bound\n";
    for (std::uint64_t N : lengths) {
      if (N > m.q()) continue;
      const ShortSumReport r = short_sum_scan(b, N, starts, {}, o.threads);
      ctx.out << "scan " << N << ' ' << sig12(r.max_abs) << ' ' << sig12(r.mean_abs) << ' ' << sig12(r.ratio_trivial) << ' '
              << sig12(r.ratio_sqrt) << ' ' << sig12(r.ratio_korolev) << '\n';
    }
  }
}

void run_sample_limit(const Options& o, RunContext& ctx) {
  if (o.truncation == 0) throw InvalidArgument("truncation H must be >= 1");
  if (o.samples == 0) throw InvalidArgument("at least one sample is needed");
  if (o.times.empty()) throw InvalidArgument("no t values given");
  std::vector<LimitSeriesCoefficients> coefficients;
  for (double t : o.times) coefficients.emplace_back(t, o.truncation);

  const std::size_t T = o.times.size();
  std::vector<std::complex<double>> values(o.samples * T);
  constexpr std::size_t kChunk = 64;
  parallel_chunks(chunk_count(o.samples, kChunk), o.threads, [&](std::size_t chunk) {
    const std::size_t last = std::min(o.samples, (chunk + 1) * kChunk);
    for (std::size_t k = chunk * kChunk; k < last; ++k) {
      const LimitSeriesSample sample(MuSampler(derive_seed(o.seed, k)), o.truncation);
      for (std::size_t i = 0; i < T; ++i) values[k * T + i] = coefficients[i].evaluate(sample);
    }
  });

  if (!o.export_path.empty()) {
    auto out = open_output(o.export_path, ctx);
    out << "seed,t,re,im\n";
    for (std::size_t k = 0; k < o.samples; ++k) {
      const std::uint64_t seed = derive_seed(o.seed, k);
      for (std::size_t i = 0; i < T; ++i) {
        out << seed << ',' << exact_decimal(o.times[i]) << ',' << exact_decimal(values[k * T + i].real()) << ','
            << exact_decimal(values[k * T + i].imag()) << '\n';
      }
    }
  }
  ctx.out << "t mean_re mean_im mean_abs2\n";
  for (std::size_t i = 0; i < T; ++i) {
    std::complex<double> mean{};
    double second = 0;
    for (std::size_t k = 0; k < o.samples; ++k) {
      mean += values[k * T + i];
      second += std::norm(values[k * T + i]);
    }
    const double count = static_cast<double>(o.samples);
    ctx.out << sig12(o.times[i]) << ' ' << sig12(mean / count) << ' ' << sig12(second / count) << '\n';
  }
}

void run_plot(const Options& o, RunContext& ctx) {
  const std::filesystem::path input(o.input);
  std::filesystem::path output = o.output.empty() ? std::filesystem::path(input).replace_extension(".svg") : std::filesystem::path(o.output);
  if (std::filesystem::exists(output) && std::filesystem::exists(input) && std::filesystem::equivalent(output, input)) {
    throw InvalidArgument("the SVG would overwrite its input");
  }
  const std::string svg = render_plot(input);
  write_file(output, svg);
  ctx.outputs.push_back(output);
  ctx.out << "wrote " << output.string() << '\n';
}

}  // namespace klpath::cli
