#include "blmac/svg_plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace blmac {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 520.0;
constexpr double kMarginLeft = 76.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 48.0;
constexpr double kMarginBottom = 64.0;

constexpr const char* kPalette[10] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

// Pixel coordinates rounded to 1/100 keep the document small and make the
// rendering a pure function of the data.
std::string coord(double v) {
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string tick_text(double v) {
  if (v == 0.0) return "0";
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

std::string cell_to_string(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
  return std::get<std::string>(cell);
}

bool cell_number(const Cell& cell, double& out) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) {
    out = static_cast<double>(*i);
    return true;
  }
  if (const auto* d = std::get_if<double>(&cell)) {
    out = *d;
    return std::isfinite(*d);
  }
  return false;
}

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Largest "round" step not exceeding ~range/4, so axes carry about five ticks.
double nice_step(double range) {
  if (range <= 0.0) return 1.0;
  const double raw = range / 4.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double nice;
  if (frac < 1.5)
    nice = 1.0;
  else if (frac < 3.0)
    nice = 2.0;
  else if (frac < 7.0)
    nice = 5.0;
  else
    nice = 10.0;
  return nice * mag;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> ticks;
};

Axis build_axis(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = (lo == 0.0) ? 0.5 : std::abs(lo) * 0.05;
    lo -= pad;
    hi += pad;
  }
  Axis axis;
  const double step = nice_step(hi - lo);
  axis.lo = std::floor(lo / step) * step;
  axis.hi = std::ceil(hi / step) * step;
  if (axis.hi <= axis.lo) axis.hi = axis.lo + step;
  for (double t = axis.lo; t <= axis.hi + step * 0.5; t += step) {
    // snap values that should be exact multiples of the step
    double snapped = std::round(t / step) * step;
    if (std::abs(snapped) < step * 1e-9) snapped = 0.0;
    axis.ticks.push_back(snapped);
  }
  return axis;
}

}  // namespace

std::string to_svg(const ResultTable& table, const PlotSpec& spec) {
  if (spec.y_columns.empty())
    throw std::invalid_argument("to_svg: plot needs at least one y column");
  const std::size_t x_col = table.column_index(spec.x_column);
  std::vector<std::size_t> y_cols;
  for (const auto& name : spec.y_columns) y_cols.push_back(table.column_index(name));
  std::size_t group_col = 0;
  if (spec.group_by) group_col = table.column_index(*spec.group_by);
  std::size_t filter_col = 0;
  if (spec.filter) filter_col = table.column_index(spec.filter->first);

  // Series keyed by (group value, y column), in first-appearance order for
  // groups so the legend follows the table.
  std::vector<std::string> group_values;
  if (spec.group_by) {
    for (const auto& row : table.rows()) {
      const std::string value = cell_to_string(row[group_col]);
      if (std::find(group_values.begin(), group_values.end(), value) ==
          group_values.end())
        group_values.push_back(value);
    }
  } else {
    group_values.emplace_back();
  }

  std::vector<Series> series;
  for (const auto& group : group_values) {
    for (std::size_t yi = 0; yi < y_cols.size(); ++yi) {
      Series s;
      if (spec.group_by && y_cols.size() > 1)
        s.label = spec.y_columns[yi] + ", " + *spec.group_by + "=" + group;
      else if (spec.group_by)
        s.label = *spec.group_by + "=" + group;
      else
        s.label = spec.y_columns[yi];
      for (const auto& row : table.rows()) {
        if (spec.filter &&
            cell_to_string(row[filter_col]) != spec.filter->second)
          continue;
        if (spec.group_by && cell_to_string(row[group_col]) != group) continue;
        double x, y;
        if (!cell_number(row[x_col], x) || !cell_number(row[y_cols[yi]], y))
          continue;
        s.points.emplace_back(x, y);
      }
      if (!s.points.empty()) series.push_back(std::move(s));
    }
  }

  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo, y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  if (series.empty()) {
    x_lo = 0.0;
    x_hi = 1.0;
    y_lo = 0.0;
    y_hi = 1.0;
  }
  const Axis xa = build_axis(x_lo, x_hi);
  const Axis ya = build_axis(y_lo, y_hi);

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto px = [&](double x) {
    return kMarginLeft + (x - xa.lo) / (xa.hi - xa.lo) * plot_w;
  };
  const auto py = [&](double y) {
    return kMarginTop + plot_h - (y - ya.lo) / (ya.hi - ya.lo) * plot_h;
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth
      << ' ' << kHeight << "\" font-family=\"sans-serif\">\n"
      << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";

  // grid and tick labels
  for (double t : xa.ticks) {
    const std::string x = coord(px(t));
    svg << "<line x1=\"" << x << "\" y1=\"" << coord(kMarginTop) << "\" x2=\""
        << x << "\" y2=\"" << coord(kMarginTop + plot_h)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << x << "\" y=\"" << coord(kMarginTop + plot_h + 20)
        << "\" font-size=\"12\" text-anchor=\"middle\">"
        << xml_escape(tick_text(t)) << "</text>\n";
  }
  for (double t : ya.ticks) {
    const std::string y = coord(py(t));
    svg << "<line x1=\"" << coord(kMarginLeft) << "\" y1=\"" << y << "\" x2=\""
        << coord(kMarginLeft + plot_w) << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << coord(kMarginLeft - 8) << "\" y=\"" << coord(py(t) + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">"
        << xml_escape(tick_text(t)) << "</text>\n";
  }

  // axes frame
  svg << "<rect x=\"" << coord(kMarginLeft) << "\" y=\"" << coord(kMarginTop)
      << "\" width=\"" << coord(plot_w) << "\" height=\"" << coord(plot_h)
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";

  // series polylines with point markers
  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % 10];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t pi = 0; pi < series[si].points.size(); ++pi) {
      if (pi) svg << ' ';
      svg << coord(px(series[si].points[pi].first)) << ','
          << coord(py(series[si].points[pi].second));
    }
    svg << "\"/>\n";
    for (const auto& [x, y] : series[si].points)
      svg << "<circle cx=\"" << coord(px(x)) << "\" cy=\"" << coord(py(y))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
  }

  // legend, top-left corner of the plot area
  for (std::size_t si = 0; si < series.size(); ++si) {
    const double ly = kMarginTop + 16 + 18.0 * static_cast<double>(si);
    svg << "<rect x=\"" << coord(kMarginLeft + 10) << "\" y=\"" << coord(ly - 9)
        << "\" width=\"18\" height=\"10\" fill=\"" << kPalette[si % 10]
        << "\"/>\n";
    svg << "<text x=\"" << coord(kMarginLeft + 34) << "\" y=\"" << coord(ly)
        << "\" font-size=\"12\">" << xml_escape(series[si].label)
        << "</text>\n";
  }

  if (!spec.title.empty())
    svg << "<text x=\"" << coord(kWidth / 2) << "\" y=\"" << coord(28)
        << "\" font-size=\"16\" text-anchor=\"middle\">"
        << xml_escape(spec.title) << "</text>\n";
  if (!spec.x_label.empty())
    svg << "<text x=\"" << coord(kMarginLeft + plot_w / 2) << "\" y=\""
        << coord(kHeight - 16) << "\" font-size=\"13\" text-anchor=\"middle\">"
        << xml_escape(spec.x_label) << "</text>\n";
  if (!spec.y_label.empty())
    svg << "<text x=\"18\" y=\"" << coord(kMarginTop + plot_h / 2)
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << coord(kMarginTop + plot_h / 2) << ")\">" << xml_escape(spec.y_label)
        << "</text>\n";

  svg << "</svg>\n";
  return svg.str();
}

void write_svg(const ResultTable& table, const PlotSpec& spec,
               const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file)
    throw std::runtime_error("write_svg: cannot open '" + path.string() + "' for writing");
  file << to_svg(table, spec);
  if (!file)
    throw std::runtime_error("write_svg: write to '" + path.string() + "' failed");
}

}  // namespace blmac
