#include "hetsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace hetsim::svg {

namespace {

struct SeriesKey {
  Method method;
  std::string band;
  double mean;
  bool operator<(const SeriesKey& other) const {
    if (method != other.method) return method < other.method;
    if (band != other.band) return band < other.band;
    return mean < other.mean;
  }
};

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string mean_label(double bps) {
  std::ostringstream out;
  if (bps >= 1e6) {
    out << bps / 1e6 << " Mbps";
  } else {
    out << bps / 1e3 << " kbps";
  }
  return out.str();
}

}  // namespace

std::string gain_chart(const std::vector<sim::SweepRow>& rows) {
  constexpr double width = 760.0;
  constexpr double height = 520.0;
  constexpr double ml = 70.0, mr = 250.0, mt = 40.0, mb = 60.0;
  const double plot_w = width - ml - mr;
  const double plot_h = height - mt - mb;

  std::map<SeriesKey, std::vector<std::pair<int, double>>> series;
  int x_max = 1;
  double y_max = 1.0;
  for (const auto& row : rows) {
    if (row.failed || !(row.gain_mean > 0.0)) continue;
    series[{row.method, row.band_label, row.traffic_mean_bps}].push_back(
        {row.n_smallcells, row.gain_mean});
    x_max = std::max(x_max, row.n_smallcells);
    y_max = std::max(y_max, row.gain_mean);
  }
  const double log_max = std::ceil(std::log10(std::max(y_max, 10.0)));

  auto x_of = [&](int n) { return ml + plot_w * n / static_cast<double>(x_max); };
  auto y_of = [&](double gain) {
    return mt + plot_h * (1.0 - std::log10(std::max(gain, 1e-3)) / log_max);
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << ml << "\" y=\"24\" font-size=\"15\">System rate gain vs. "
         "number of small cells</text>\n";

  // Gridlines: decades on y, quarter marks on x.
  for (int d = 0; d <= static_cast<int>(log_max); ++d) {
    const double y = y_of(std::pow(10.0, d));
    out << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << ml + plot_w
        << "\" y2=\"" << y << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const int n = x_max * i / 4;
    const double x = x_of(n);
    out << "<line x1=\"" << x << "\" y1=\"" << mt << "\" x2=\"" << x << "\" y2=\""
        << mt + plot_h << "\" stroke=\"#eee\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << mt + plot_h + 18
        << "\" text-anchor=\"middle\">" << n << "</text>\n";
  }
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
  out << "<text x=\"" << ml + plot_w / 2 << "\" y=\"" << height - 16
      << "\" text-anchor=\"middle\">small cells per macro cell</text>\n";

  int color_index = 0;
  double legend_y = mt + 10.0;
  for (auto& [key, points] : series) {
    std::sort(points.begin(), points.end());
    const char* color = kColors[color_index % 8];
    const char* dash = key.method == Method::max_sinr ? "6,4" : "";
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"";
    if (*dash) out << " stroke-dasharray=\"" << dash << "\"";
    out << " points=\"";
    for (const auto& [n, gain] : points) out << x_of(n) << ',' << y_of(gain) << ' ';
    out << "\"/>\n";
    for (const auto& [n, gain] : points) {
      out << "<circle cx=\"" << x_of(n) << "\" cy=\"" << y_of(gain)
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    out << "<line x1=\"" << ml + plot_w + 12 << "\" y1=\"" << legend_y << "\" x2=\""
        << ml + plot_w + 40 << "\" y2=\"" << legend_y << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"";
    if (*dash) out << " stroke-dasharray=\"" << dash << "\"";
    out << "/>\n";
    out << "<text x=\"" << ml + plot_w + 46 << "\" y=\"" << legend_y + 4 << "\">"
        << to_string(key.method) << " " << key.band << " @ " << mean_label(key.mean)
        << "</text>\n";
    legend_y += 18.0;
    ++color_index;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace hetsim::svg
