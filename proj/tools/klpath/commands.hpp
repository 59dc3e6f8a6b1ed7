#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace klpath::cli {

/// Every setting any subcommand understands; each subcommand registers the
/// subset it uses.
struct Options {
  std::uint64_t p = 0;
  unsigned n = 1;
  std::int64_t a = 1;
  std::int64_t b = 1;
  std::uint64_t prefix = 0;
  bool complex = false;

  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string manifest;
  std::string config;
  std::string export_path;
  std::string out;

  std::vector<double> times;
  std::vector<double> s_times;
  unsigned alpha = 0;
  std::uint64_t grid_factor = 64;

  std::vector<double> gaps;
  double gap_min = 0;
  double gap_max = 0.1;
  std::size_t gap_count = 12;
  std::size_t samples_per_gap = 32;

  std::uint64_t truncation = 0;
  std::size_t mc_samples = 10000;
  std::size_t quantiles = 101;
  std::size_t samples = 1000;

  std::vector<std::uint64_t> N_values;
  std::size_t N_count = 16;
  bool factor4 = false;
  bool delta_window = false;
  std::optional<double> chain_delta;
  std::string format = "text";
  bool scan = false;
  std::size_t starts = 8;

  std::string input;
  std::string output;
};

/// Captured standard output and the files a run produced.
struct RunContext {
  std::ostringstream out;
  std::vector<std::filesystem::path> outputs;
};

void run_sum(const Options& o, RunContext& ctx);
void run_path(const Options& o, RunContext& ctx);
void run_moments(const Options& o, RunContext& ctx);
void run_scan_tightness(const Options& o, RunContext& ctx);
void run_compare_law(const Options& o, RunContext& ctx);
void run_bounds(const Options& o, RunContext& ctx);
void run_sample_limit(const Options& o, RunContext& ctx);
void run_plot(const Options& o, RunContext& ctx);

}  // namespace klpath::cli
