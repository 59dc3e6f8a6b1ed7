#include "klpath/report_json.hpp"

#include <fstream>
#include <stdexcept>

namespace klpath {
namespace {

using nlohmann::json;

json skeleton(std::uint64_t p, unsigned n, std::uint64_t b0, std::uint64_t seed) {
  return json{{"modulus", {{"p", p}, {"n", n}}},
              {"b0", b0},
              {"alpha", nullptr},
              {"gaps", json::array()},
              {"moments", json::array()},
              {"fitted_slope", nullptr},
              {"violations", json::array()},
              {"ks", json::array()},
              {"zero_mass_fraction", nullptr},
              {"seed", seed},
              {"version", version()}};
}

template <class T>
json optional_value(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

const char* version() noexcept { return KLPATH_VERSION; }

json to_json(const MomentReport& r) {
  json doc = skeleton(r.p, r.n, r.b0, r.seed);
  doc["kind"] = "moments";
  doc["alpha"] = r.alpha;
  doc["time_denominator"] = r.time_denominator;
  for (const GapSummary& g : r.gaps) {
    doc["gaps"].push_back(g.gap);
    doc["moments"].push_back(g.mean_moment);
  }
  doc["zero_moments"] = json::array();
  for (const GapSummary& g : r.gaps) doc["zero_moments"].push_back(g.zero_moments);
  doc["fitted_slope"] = optional_value(r.fitted_slope);
  doc["fitted_intercept"] = optional_value(r.fitted_intercept);
  doc["excluded_from_fit"] = r.excluded_from_fit;
  doc["beta_prediction"] = optional_value(r.beta_prediction);
  for (const BoundViolation& v : r.violations) {
    doc["violations"].push_back({{"s", v.s}, {"t", v.t}, {"moment", v.moment}, {"bound", v.bound}});
  }
  json samples = json::array();
  for (const MomentSample& s : r.samples) samples.push_back({s.s, s.t, s.moment});
  doc["samples"] = std::move(samples);
  return doc;
}

json to_json(const LawComparisonReport& r) {
  json doc = skeleton(r.p, r.n, r.b0, r.seed);
  doc["kind"] = "law";
  doc["truncation"] = r.truncation;
  doc["mc_samples"] = r.mc_samples;
  doc["zero_mass_fraction"] = r.zero_mass_fraction;
  for (const LawAtTime& t : r.times) {
    doc["ks"].push_back({{"t", t.t},
                         {"re", t.ks_re},
                         {"im", t.ks_im},
                         {"path_re_quantiles", t.path_re_quantiles},
                         {"path_im_quantiles", t.path_im_quantiles},
                         {"limit_re_quantiles", t.limit_re_quantiles},
                         {"limit_im_quantiles", t.limit_im_quantiles}});
  }
  return doc;
}

void write_json(const std::filesystem::path& file, const json& doc) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + file.string());
}

}  // namespace klpath
