#include "klpath/plot.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <vector>

#include "klpath/error.hpp"
#include "klpath/output.hpp"

namespace klpath::cli {
namespace {

using Points = std::vector<std::pair<double, double>>;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

// One rectangular plotting panel with linear axes.
class Panel {
 public:
  Panel(double x0, double y0, double w, double h, const Points& all) : x0_(x0), y0_(y0), w_(w), h_(h) {
    lo_x_ = hi_x_ = all.front().first;
    lo_y_ = hi_y_ = all.front().second;
    for (const auto& [x, y] : all) {
      lo_x_ = std::min(lo_x_, x);
      hi_x_ = std::max(hi_x_, x);
      lo_y_ = std::min(lo_y_, y);
      hi_y_ = std::max(hi_y_, y);
    }
    pad(lo_x_, hi_x_);
    pad(lo_y_, hi_y_);
  }

  double px(double x) const { return x0_ + (x - lo_x_) / (hi_x_ - lo_x_) * w_; }
  double py(double y) const { return y0_ + h_ - (y - lo_y_) / (hi_y_ - lo_y_) * h_; }

  void frame(std::ostringstream& svg, const std::string& xlabel, const std::string& ylabel, const std::string& title) const {
    svg << "<rect x=\"" << num(x0_) << "\" y=\"" << num(y0_) << "\" width=\"" << num(w_) << "\" height=\"" << num(h_)
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    auto text = [&](double x, double y, const std::string& s, const char* anchor) {
      svg << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"11\" text-anchor=\"" << anchor << "\">"
          << escape(s) << "</text>\n";
    };
    text(x0_, y0_ + h_ + 14, label(lo_x_), "start");
    text(x0_ + w_, y0_ + h_ + 14, label(hi_x_), "end");
    text(x0_ - 4, y0_ + h_, label(lo_y_), "end");
    text(x0_ - 4, y0_ + 10, label(hi_y_), "end");
    text(x0_ + w_ / 2, y0_ + h_ + 28, xlabel, "middle");
    text(x0_ - 40, y0_ + h_ / 2, ylabel, "middle");
    text(x0_ + w_ / 2, y0_ - 8, title, "middle");
  }

  void polyline(std::ostringstream& svg, const Points& pts, const char* color) const {
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) svg << (i ? " " : "") << num(px(pts[i].first)) << ',' << num(py(pts[i].second));
    svg << "\"/>\n";
  }

  void dots(std::ostringstream& svg, const Points& pts, const char* color) const {
    for (const auto& [x, y] : pts) {
      svg << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y)) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
  }

 private:
  static void pad(double& lo, double& hi) {
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(lo))) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double m = 0.04 * (hi - lo);
    lo -= m;
    hi += m;
  }

  double x0_, y0_, w_, h_;
  double lo_x_, hi_x_, lo_y_, hi_y_;
};

constexpr double kWidth = 640, kHeight = 480;

std::ostringstream open_svg(double width = kWidth, double height = kHeight) {
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return svg;
}

std::string close_svg(std::ostringstream& svg) {
  svg << "</svg>\n";
  return svg.str();
}

std::string plot_path(const CsvTable& table) {
  Points pts;
  for (const auto& row : table.rows) pts.emplace_back(row[2], row[3]);
  auto svg = open_svg();
  const Panel panel(70, 40, kWidth - 100, kHeight - 100, pts);
  panel.frame(svg, "Re", "Im", "Kloosterman path (" + std::to_string(pts.size()) + " knots)");
  panel.polyline(svg, pts, kColors[0]);
  return close_svg(svg);
}

std::string plot_samples(const CsvTable& table) {
  std::map<double, Points> by_t;
  Points all;
  for (const auto& row : table.rows) {
    by_t[row[1]].emplace_back(row[2], row[3]);
    all.emplace_back(row[2], row[3]);
  }
  auto svg = open_svg();
  const Panel panel(70, 40, kWidth - 180, kHeight - 100, all);
  panel.frame(svg, "Re", "Im", "Limit series samples");
  std::size_t k = 0;
  for (const auto& [t, pts] : by_t) {
    const char* color = kColors[k % std::size(kColors)];
    panel.dots(svg, pts, color);
    svg << "<text x=\"" << num(kWidth - 100) << "\" y=\"" << num(60 + 16.0 * k) << "\" font-size=\"11\" fill=\"" << color
        << "\">t = " << label(t) << "</text>\n";
    ++k;
  }
  return close_svg(svg);
}

std::string plot_moments(const nlohmann::json& doc) {
  const auto& gaps = doc.at("gaps");
  const auto& moments = doc.at("moments");
  if (gaps.size() != moments.size()) throw InvalidArgument("gaps and moments differ in length");
  Points pts;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double g = gaps[i].get<double>(), m = moments[i].get<double>();
    if (g > 0 && m > 0) pts.emplace_back(std::log10(g), std::log10(m));
  }
  if (pts.empty()) throw InvalidArgument("moment report has no positive moments to plot");
  const double slope = doc.at("fitted_slope").get<double>();
  // Fitted line in natural logs: log M = slope log g + c; the slope is the same in log10.
  double intercept10 = 0;
  if (doc.contains("fitted_intercept") && doc["fitted_intercept"].is_number()) {
    intercept10 = doc["fitted_intercept"].get<double>() / std::log(10.0);
  } else {
    double sx = 0, sy = 0;
    for (const auto& [x, y] : pts) {
      sx += x;
      sy += y;
    }
    intercept10 = (sy - slope * sx) / static_cast<double>(pts.size());
  }
  const auto [lo, hi] = std::minmax_element(pts.begin(), pts.end());
  const Points line{{lo->first, slope * lo->first + intercept10}, {hi->first, slope * hi->first + intercept10}};
  Points all = pts;
  all.insert(all.end(), line.begin(), line.end());

  auto svg = open_svg();
  const Panel panel(70, 40, kWidth - 100, kHeight - 100, all);
  std::string title = "Moment scaling";
  if (doc.contains("alpha") && doc["alpha"].is_number()) title += " (alpha = " + std::to_string(doc["alpha"].get<int>()) + ")";
  panel.frame(svg, "log10 gap", "log10 M", title);
  panel.dots(svg, pts, kColors[0]);
  svg << "<line class=\"fit\" x1=\"" << num(panel.px(line[0].first)) << "\" y1=\"" << num(panel.py(line[0].second))
      << "\" x2=\"" << num(panel.px(line[1].first)) << "\" y2=\"" << num(panel.py(line[1].second)) << "\" stroke=\""
      << kColors[1] << "\" stroke-width=\"1.5\"/>\n";
  svg << "<text class=\"slope\" x=\"" << num(90) << "\" y=\"" << num(60) << "\" font-size=\"13\" fill=\"" << kColors[1]
      << "\">slope = " << sig12(slope) << "</text>\n";
  return close_svg(svg);
}

std::string plot_law(const nlohmann::json& doc) {
  const auto& ks = doc.at("ks");
  const double panel_h = 200;
  const double height = 60 + ks.size() * (panel_h + 70);
  auto svg = open_svg(kWidth, height);
  double y = 40;
  for (const auto& entry : ks) {
    const double t = entry.at("t").get<double>();
    for (int part = 0; part < 2; ++part) {
      const char* name = part == 0 ? "re" : "im";
      const auto path_q = entry.at(std::string("path_") + name + "_quantiles").get<std::vector<double>>();
      const auto limit_q = entry.at(std::string("limit_") + name + "_quantiles").get<std::vector<double>>();
      if (path_q.size() < 2 || limit_q.size() < 2) throw InvalidArgument("law report has too few quantiles");
      auto cdf = [](const std::vector<double>& q) {
        Points pts;
        for (std::size_t i = 0; i < q.size(); ++i) pts.emplace_back(q[i], static_cast<double>(i) / (q.size() - 1));
        return pts;
      };
      const Points a = cdf(path_q), b = cdf(limit_q);
      Points all = a;
      all.insert(all.end(), b.begin(), b.end());
      const double x0 = 60 + part * (kWidth / 2);
      const Panel panel(x0, y, kWidth / 2 - 90, panel_h, all);
      panel.frame(svg, std::string(name) + " part", "CDF",
                  "t = " + label(t) + ", KS = " + label(entry.at(name).get<double>()));
      panel.polyline(svg, a, kColors[0]);
      panel.polyline(svg, b, kColors[1]);
    }
    y += panel_h + 70;
  }
  svg << "<text x=\"60\" y=\"" << num(height - 12) << "\" font-size=\"11\" fill=\"" << kColors[0]
      << "\">path over all units a</text>\n";
  svg << "<text x=\"260\" y=\"" << num(height - 12) << "\" font-size=\"11\" fill=\"" << kColors[1]
      << "\">limit series (Monte Carlo)</text>\n";
  return close_svg(svg);
}

}  // namespace

std::string render_plot(const std::filesystem::path& input) {
  if (input.extension() == ".json") {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_file(input));
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument(input.string() + " is not valid JSON: " + e.what());
    }
    try {
      if (doc.contains("gaps") && doc["gaps"].is_array() && !doc["gaps"].empty() && doc.contains("fitted_slope") &&
          doc["fitted_slope"].is_number()) {
        return plot_moments(doc);
      }
      if (doc.contains("ks") && doc["ks"].is_array() && !doc["ks"].empty()) return plot_law(doc);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument(input.string() + " is not a well-formed report: " + e.what());
    }
    throw InvalidArgument(input.string() + " holds neither a fitted moment scan nor a law comparison");
  }
  const CsvTable table = read_csv(input);
  if (table.header == std::vector<std::string>{"j", "t", "re", "im"}) return plot_path(table);
  if (table.header == std::vector<std::string>{"seed", "t", "re", "im"}) return plot_samples(table);
  throw InvalidArgument(input.string() + ": unrecognized CSV header");
}

}  // namespace klpath::cli
