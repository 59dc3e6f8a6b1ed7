#include "klpath/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <optional>

#include "klpath/commands.hpp"
#include "klpath/error.hpp"
#include "klpath/output.hpp"
#include "klpath/parallel.hpp"
#include "klpath/report_json.hpp"

namespace klpath::cli {
namespace {

using Runner = void (*)(const Options&, RunContext&);

struct Command {
  const char* name;
  const char* description;
  Runner run;
  std::function<void(CLI::App&, Options&)> add_options;
};

void add_modulus(CLI::App& sub, Options& o) {
  sub.add_option("--p", o.p, "Odd prime p")->required();
  sub.add_option("--n", o.n, "Exponent n, q = p^n")->capture_default_str();
}

void add_b0(CLI::App& sub, Options& o) {
  sub.add_option("--b", o.b, "Fixed unit b0")->capture_default_str();
}

void add_run(CLI::App& sub, Options& o) {
  sub.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  sub.add_option("--threads", o.threads, "Worker threads (default from KLPATH_THREADS)")->capture_default_str();
  sub.add_option("--manifest", o.manifest, "Manifest JSON path");
  sub.add_option("--config", o.config, "key=value file; flags take precedence");
}

void add_grid(CLI::App& sub, Options& o) {
  sub.add_option("--grid-factor", o.grid_factor, "Times are rounded to multiples of 1/((phi-1) grid-factor)")
      ->capture_default_str();
}

const std::vector<Command>& commands() {
  static const std::vector<Command> list = {
      {"sum", "Normalized Kloosterman sum Kl_q(a, b)", run_sum,
       [](CLI::App& s, Options& o) {
         add_modulus(s, o);
         s.add_option("--a", o.a, "Unit a")->capture_default_str();
         add_b0(s, o);
         s.add_option("--prefix", o.prefix, "Partial sum up to this element of J instead of the full sum");
         s.add_flag("--complex", o.complex, "Print real and imaginary parts");
       }},
      {"path", "Kloosterman path knots and values", run_path,
       [](CLI::App& s, Options& o) {
         add_modulus(s, o);
         s.add_option("--a", o.a, "Unit a")->capture_default_str();
         add_b0(s, o);
         s.add_option("--t", o.times, "Times at which to evaluate the path")->delimiter(',');
         add_grid(s, o);
         s.add_option("--export", o.export_path, "Write the knots as CSV (j,t,re,im)");
       }},
      {"moments", "Moment functional M_alpha(s, t) averaged over all units a", run_moments,
       [](CLI::App& s, Options& o) {
         add_modulus(s, o);
         add_b0(s, o);
         s.add_option("--alpha", o.alpha, "Even exponent alpha")->required();
         s.add_option("--s", o.s_times, "Start times")->delimiter(',')->required();
         s.add_option("--t", o.times, "End times, one per start time")->delimiter(',')->required();
         add_grid(s, o);
         s.add_option("--out", o.out, "Write a JSON report");
       }},
      {"scan-tightness", "Log-log scaling of M_alpha against the gap t - s", run_scan_tightness,
       [](CLI::App& s, Options& o) {
         o.alpha = 4;
         add_modulus(s, o);
         add_b0(s, o);
         s.add_option("--alpha", o.alpha, "Even exponent alpha")->capture_default_str();
         s.add_option("--gaps", o.gaps, "Explicit gaps in (0, 1]")->delimiter(',');
         s.add_option("--gap-min", o.gap_min, "Smallest gap of the log grid (default 10/phi)");
         s.add_option("--gap-max", o.gap_max, "Largest gap of the log grid")->capture_default_str();
         s.add_option("--gap-count", o.gap_count, "Number of log-spaced gaps")->capture_default_str();
         s.add_option("--samples-per-gap", o.samples_per_gap, "Random placements per gap")->capture_default_str();
         add_grid(s, o);
         s.add_option("--out", o.out, "Write a JSON report");
       }},
      {"compare-law", "KS distances between path marginals and the limit series", run_compare_law,
       [](CLI::App& s, Options& o) {
         o.times = {0.5};
         add_modulus(s, o);
         add_b0(s, o);
         s.add_option("--t", o.times, "Times in [0, 1]")->delimiter(',')->capture_default_str();
         s.add_option("--truncation", o.truncation, "Series truncation H (0 selects H = q)")->capture_default_str();
         s.add_option("--mc-samples", o.mc_samples, "Monte Carlo samples of the series")->capture_default_str();
         s.add_option("--quantiles", o.quantiles, "Quantiles stored per marginal")->capture_default_str();
         add_grid(s, o);
         s.add_option("--out", o.out, "Write a JSON report");
       }},
      {"bounds", "Short-sum bound calculator", run_bounds,
       [](CLI::App& s, Options& o) {
         s.add_option("--p", o.p, "Odd prime p")->required();
         s.add_option("--n", o.n, "Exponent n")->capture_default_str();
         s.add_option("--N", o.N_values, "Interval lengths (default: log grid up to min(p^(n/2), 2^63))")->delimiter(',');
         s.add_option("--N-count", o.N_count, "Points of the default log grid")->capture_default_str();
         s.add_flag("--factor4", o.factor4, "Use the factor-4 form (needs n >= 31)");
         s.add_flag("--delta-window", o.delta_window, "Print the admissible delta window (needs n >= 31)");
         s.add_option("--chain-delta", o.chain_delta, "Check the exponent chain at this delta");
         s.add_option("--format", o.format, "text or csv")->check(CLI::IsMember({"text", "csv"}))->capture_default_str();
         s.add_flag("--scan", o.scan, "Also scan short sums directly (q <= 1e6)");
         s.add_option("--b", o.b, "Unit b for --scan")->capture_default_str();
         s.add_option("--starts", o.starts, "Start points per a for --scan")->capture_default_str();
         s.add_option("--export", o.export_path, "Write the table as CSV");
       }},
      {"sample-limit", "Monte Carlo samples of the limit series", run_sample_limit,
       [](CLI::App& s, Options& o) {
         o.times = {0.5};
         o.truncation = 1000;
         s.add_option("--t", o.times, "Times in [0, 1]")->delimiter(',')->capture_default_str();
         s.add_option("--truncation", o.truncation, "Series truncation H")->capture_default_str();
         s.add_option("--samples", o.samples, "Number of samples")->capture_default_str();
         s.add_option("--export", o.export_path, "Write samples as CSV (seed,t,re,im)");
       }},
      {"plot", "SVG figure from a path CSV, sample CSV or JSON report", run_plot,
       [](CLI::App& s, Options& o) {
         s.add_option("input,--input", o.input, "Input file")->required();
         s.add_option("--output", o.output, "SVG file (default: input with .svg)");
       }},
  };
  return list;
}

struct Parsed {
  std::unique_ptr<CLI::App> app;
  std::vector<std::unique_ptr<Options>> per_command;  // one per subcommand, so defaults stay separate
  const Command* command = nullptr;
  CLI::App* sub = nullptr;
  Options* options = nullptr;
};

Parsed build() {
  Parsed parsed;
  parsed.app = std::make_unique<CLI::App>("Kloosterman paths: sums, moments, limit laws and bounds", "klpath");
  parsed.app->set_version_flag("--version", version());
  parsed.app->require_subcommand(1);
  for (const Command& c : commands()) {
    auto& options = parsed.per_command.emplace_back(std::make_unique<Options>());
    options->threads = default_thread_count();
    CLI::App* sub = parsed.app->add_subcommand(c.name, c.description);
    c.add_options(*sub, *options);
    add_run(*sub, *options);
  }
  return parsed;
}

void parse_into(Parsed& parsed, std::vector<std::string> args) {
  std::reverse(args.begin(), args.end());
  parsed.app->parse(args);
  for (std::size_t i = 0; i < commands().size(); ++i) {
    CLI::App* sub = parsed.app->get_subcommand(commands()[i].name);
    if (sub->parsed()) {
      parsed.command = &commands()[i];
      parsed.sub = sub;
      parsed.options = parsed.per_command[i].get();
    }
  }
}

std::optional<std::string> config_argument(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& name) {
  const std::string flag = "--" + name;
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

// Command-line tokens for the config file entries not already given as flags.
std::vector<std::string> config_tokens(const std::vector<std::string>& args, const std::string& file) {
  const std::string command = args.empty() ? "" : args.front();
  const Parsed blank = build();
  CLI::App* sub = blank.app->get_subcommand_no_throw(command);
  if (sub == nullptr) throw InvalidArgument("--config must follow a subcommand");
  std::ifstream in(file);
  if (!in) throw InvalidArgument("cannot read config file " + file);
  std::vector<std::string> tokens;
  for (const CLI::ConfigItem& item : CLI::ConfigINI().from_config(in)) {
    if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == "default")) {
      throw InvalidArgument("config sections are not supported: " + item.fullname());
    }
    if (item.name == "config") throw InvalidArgument("a config file cannot include another");
    const CLI::Option* opt = sub->get_option_no_throw("--" + item.name);
    if (opt == nullptr || item.name == "help") {
      throw InvalidArgument("unknown config key '" + item.name + "' for " + command);
    }
    if (given_on_command_line(args, item.name)) continue;  // the flag wins
    if (opt->get_expected_min() == 0) {
      const std::string v = item.inputs.empty() ? "true" : item.inputs.front();
      if (v == "true" || v == "1" || v == "yes" || v == "on") tokens.push_back("--" + item.name);
      continue;
    }
    tokens.push_back("--" + item.name);
    for (const std::string& v : item.inputs) tokens.push_back(v);
  }
  return tokens;
}

nlohmann::json config_echo(const CLI::App& sub) {
  nlohmann::json echo = nlohmann::json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string key = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
    if (key == "help" || key == "manifest" || key == "config") continue;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (opt->get_expected_min() == 0) {
        echo[key] = true;
      } else if (results.size() == 1) {
        echo[key] = results.front();
      } else {
        echo[key] = results;
      }
    } else if (opt->get_expected_min() == 0) {
      echo[key] = false;
    } else {
      const std::string def = opt->get_default_str();
      echo[key] = def.empty() ? nlohmann::json(nullptr) : nlohmann::json(def);
    }
  }
  return echo;
}

std::filesystem::path manifest_path(const Options& o, const RunContext& ctx, const char* command) {
  if (!o.manifest.empty()) return o.manifest;
  if (!ctx.outputs.empty()) return ctx.outputs.front().string() + ".manifest.json";
  return std::string("klpath-") + command + ".manifest.json";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Parsed parsed = build();
  try {
    std::vector<std::string> merged = args;
    if (const auto file = config_argument(args)) {
      const auto extra = config_tokens(args, *file);
      merged.insert(merged.end(), extra.begin(), extra.end());
    }
    parse_into(parsed, merged);
  } catch (const CLI::ParseError& e) {
    return parsed.app->exit(e, out, err) == 0 ? kSuccess : kInvalidConfig;
  } catch (const InvalidArgument& e) {
    err << "klpath: " << e.what() << '\n';
    return kInvalidConfig;
  }

  RunContext ctx;
  int code = kSuccess;
  try {
    parsed.command->run(*parsed.options, ctx);
  } catch (const InvalidArgument& e) {
    err << "klpath " << parsed.command->name << ": invalid configuration: " << e.what() << '\n';
    code = kInvalidConfig;
  } catch (const HypothesisViolation& e) {
    err << "klpath " << parsed.command->name << ": hypothesis violated: " << e.what() << '\n';
    code = kHypothesisViolation;
  } catch (const std::exception& e) {
    err << "klpath " << parsed.command->name << ": " << e.what() << '\n';
    code = kFailure;
  }
  const std::string text = ctx.out.str();
  out << text;
  if (code != kSuccess) return code;

  nlohmann::json manifest;
  manifest["command"] = parsed.command->name;
  manifest["version"] = version();
  manifest["config"] = config_echo(*parsed.sub);
  manifest["outputs"] = nlohmann::json::array();
  for (const auto& file : ctx.outputs) {
    manifest["outputs"].push_back({{"path", file.string()}, {"sha256", sha256_file(file)}});
  }
  manifest["stdout_sha256"] = sha256_hex(text);
  manifest["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    write_json(manifest_path(*parsed.options, ctx, parsed.command->name), manifest);
  } catch (const std::exception& e) {
    err << "klpath: " << e.what() << '\n';
    return kFailure;
  }
  return kSuccess;
}

}  // namespace klpath::cli
