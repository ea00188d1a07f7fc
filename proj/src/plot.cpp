#include "pbdr/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "pbdr/error.hpp"
#include "pbdr/format.hpp"

namespace pbdr {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr double kMargin = 60.0;

std::string f2(double v) { return format_fixed(v, 2); }

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Bounds {
  std::vector<double> lo, hi;

  double span(std::size_t k) const { return hi[k] - lo[k]; }
};

Bounds data_bounds(std::span<const PlotPoint> points, std::size_t dim) {
  Bounds b{std::vector<double>(dim, std::numeric_limits<double>::infinity()),
           std::vector<double>(dim, -std::numeric_limits<double>::infinity())};
  for (const auto& p : points) {
    if (p.coords.size() != dim) throw InvalidInput("plot points have mixed dimensions");
    for (std::size_t k = 0; k < dim; ++k) {
      b.lo[k] = std::min(b.lo[k], p.coords[k]);
      b.hi[k] = std::max(b.hi[k], p.coords[k]);
    }
  }
  for (std::size_t k = 0; k < dim; ++k) {
    double pad = 0.05 * (b.hi[k] - b.lo[k]);
    if (pad == 0.0) pad = std::max(1.0, std::abs(b.lo[k]) * 0.05);
    b.lo[k] -= pad;
    b.hi[k] += pad;
  }
  return b;
}

std::vector<std::string> sorted_labels(std::span<const PlotPoint> points) {
  std::set<std::string> labels;
  for (const auto& p : points) labels.insert(p.label);
  return {labels.begin(), labels.end()};
}

const char* colour_of(const std::vector<std::string>& labels, const std::string& label) {
  const auto k = static_cast<std::size_t>(std::find(labels.begin(), labels.end(), label) - labels.begin());
  return kPalette[k % kPalette.size()];
}

void open_svg(std::ostringstream& svg, const PlotOptions& o) {
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.width << "\" height=\"" << o.height
      << "\" viewBox=\"0 0 " << o.width << ' ' << o.height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!o.title.empty()) {
    svg << "<text x=\"" << o.width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"16\">" << xml_escape(o.title) << "</text>\n";
  }
}

void legend(std::ostringstream& svg, const PlotOptions& o, const std::vector<std::string>& labels) {
  double y = kMargin;
  for (const auto& l : labels) {
    svg << "<circle cx=\"" << f2(o.width - 150.0) << "\" cy=\"" << f2(y) << "\" r=\"5\" fill=\"" << colour_of(labels, l)
        << "\"/>\n<text x=\"" << f2(o.width - 140.0) << "\" y=\"" << f2(y + 4) << "\" font-family=\"sans-serif\" "
        << "font-size=\"12\">" << xml_escape(l) << "</text>\n";
    y += 18.0;
  }
}

std::string axis_name(const PlotOptions& o, std::size_t k) {
  static const char* fallback[] = {"x", "y", "z"};
  return k < o.axis_names.size() ? o.axis_names[k] : fallback[k];
}

}  // namespace

std::string scatter_svg_2d(std::span<const PlotPoint> points, std::span<const Hyperplane> lines,
                           const PlotOptions& options) {
  if (points.empty()) throw InvalidInput("nothing to plot");
  const auto b = data_bounds(points, 2);
  const auto labels = sorted_labels(points);
  const double w = options.width - 2 * kMargin - 120.0;  // room for the legend
  const double h = options.height - 2 * kMargin;
  auto sx = [&](double x) { return kMargin + (x - b.lo[0]) / b.span(0) * w; };
  auto sy = [&](double y) { return options.height - kMargin - (y - b.lo[1]) / b.span(1) * h; };

  std::ostringstream svg;
  open_svg(svg, options);
  svg << "<rect x=\"" << f2(kMargin) << "\" y=\"" << f2(kMargin) << "\" width=\"" << f2(w) << "\" height=\"" << f2(h)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = b.lo[0] + b.span(0) * t / 4.0;
    const double fy = b.lo[1] + b.span(1) * t / 4.0;
    svg << "<text x=\"" << f2(sx(fx)) << "\" y=\"" << f2(options.height - kMargin + 16)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << f2(fx) << "</text>\n";
    svg << "<text x=\"" << f2(kMargin - 6) << "\" y=\"" << f2(sy(fy) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << f2(fy) << "</text>\n";
  }
  svg << "<text x=\"" << f2(kMargin + w / 2) << "\" y=\"" << f2(options.height - 16.0)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(axis_name(options, 0))
      << "</text>\n";
  svg << "<text x=\"16\" y=\"" << f2(kMargin + h / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"13\" transform=\"rotate(-90 16 " << f2(kMargin + h / 2) << ")\">"
      << xml_escape(axis_name(options, 1)) << "</text>\n";

  svg << "<g class=\"points\">\n";
  for (const auto& p : points) {
    svg << "<circle cx=\"" << f2(sx(p.coords[0])) << "\" cy=\"" << f2(sy(p.coords[1])) << "\" r=\"3\" fill=\""
        << colour_of(labels, p.label) << "\" fill-opacity=\"0.75\"/>\n";
  }
  svg << "</g>\n<g class=\"separators\">\n";
  for (const auto& line : lines) {
    if (line.dimension() != 2) throw InvalidInput("2-D plot needs 2-D lines");
    const double a = line.normal()[0], c = line.normal()[1], d = line.offset();
    // Intersections with the four edges of the bounding box.
    std::vector<std::pair<double, double>> hits;
    auto add = [&](double x, double y) {
      const double tol = 1e-12 * (b.span(0) + b.span(1));
      if (x < b.lo[0] - tol || x > b.hi[0] + tol || y < b.lo[1] - tol || y > b.hi[1] + tol) return;
      for (const auto& [hx, hy] : hits) {
        if (std::abs(hx - x) <= tol && std::abs(hy - y) <= tol) return;
      }
      hits.emplace_back(x, y);
    };
    if (c != 0.0) {
      add(b.lo[0], -(a * b.lo[0] + d) / c);
      add(b.hi[0], -(a * b.hi[0] + d) / c);
    }
    if (a != 0.0) {
      add(-(c * b.lo[1] + d) / a, b.lo[1]);
      add(-(c * b.hi[1] + d) / a, b.hi[1]);
    }
    if (hits.size() < 2) continue;  // line misses the plotted region
    svg << "<line x1=\"" << f2(sx(hits[0].first)) << "\" y1=\"" << f2(sy(hits[0].second)) << "\" x2=\""
        << f2(sx(hits[1].first)) << "\" y2=\"" << f2(sy(hits[1].second))
        << "\" stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6 3\"/>\n";
  }
  svg << "</g>\n";
  legend(svg, options, labels);
  svg << "</svg>\n";
  return svg.str();
}

std::string scatter_svg_3d(std::span<const PlotPoint> points, std::span<const Hyperplane> planes,
                           const PlotOptions& options) {
  if (points.empty()) throw InvalidInput("nothing to plot");
  const auto b = data_bounds(points, 3);
  const auto labels = sorted_labels(points);
  const double cos30 = std::cos(std::numbers::pi / 6.0);
  const double sin30 = 0.5;

  // Projected unit cube spans u in [-cos30, cos30], v in [-1, 1].
  const double w = options.width - 2 * kMargin - 120.0;
  const double h = options.height - 2 * kMargin;
  const double scale = std::min(w / (2 * cos30), h / 2.0);
  const double cx = kMargin + w / 2.0;
  const double cy = kMargin + h / 2.0;
  auto unit = [&](std::size_t k, double v) { return (v - b.lo[k]) / b.span(k); };
  auto screen = [&](double x, double y, double z) {
    const double u = (x - y) * cos30;
    const double v = z - (x + y) * sin30;
    return std::pair{cx + u * scale, cy - (v + 0.5) * scale};
  };

  std::ostringstream svg;
  open_svg(svg, options);
  svg << "<g class=\"axes\">\n";
  const std::array<std::array<double, 3>, 3> ends = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  const auto origin = screen(0, 0, 0);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto e = screen(ends[k][0], ends[k][1], ends[k][2]);
    svg << "<line x1=\"" << f2(origin.first) << "\" y1=\"" << f2(origin.second) << "\" x2=\"" << f2(e.first)
        << "\" y2=\"" << f2(e.second) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << f2(e.first) << "\" y=\"" << f2(e.second + (k == 2 ? -6 : 16))
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(axis_name(options, k))
        << " [" << f2(b.lo[k]) << ", " << f2(b.hi[k]) << "]</text>\n";
  }
  svg << "</g>\n<g class=\"points\">\n";
  for (const auto& p : points) {
    const auto s = screen(unit(0, p.coords[0]), unit(1, p.coords[1]), unit(2, p.coords[2]));
    svg << "<circle cx=\"" << f2(s.first) << "\" cy=\"" << f2(s.second) << "\" r=\"2.5\" fill=\""
        << colour_of(labels, p.label) << "\" fill-opacity=\"0.7\"/>\n";
  }
  svg << "</g>\n<g class=\"separators\">\n";
  for (const auto& plane : planes) {
    if (plane.dimension() != 3) throw InvalidInput("3-D plot needs 3-D planes");
    // Plane in unit-cube coordinates.
    std::array<double, 3> n{};
    double d = plane.offset();
    for (std::size_t k = 0; k < 3; ++k) {
      n[k] = plane.normal()[k] * b.span(k);
      d += plane.normal()[k] * b.lo[k];
    }
    std::size_t solve = 0;
    for (std::size_t k = 1; k < 3; ++k) {
      if (std::abs(n[k]) > std::abs(n[solve])) solve = k;
    }
    const std::size_t p = (solve + 1) % 3, q = (solve + 2) % 3;
    constexpr int samples = 40;
    for (int family = 0; family < 2; ++family) {
      for (int g = 0; g <= 4; ++g) {
        std::string path;
        bool pen_down = false;
        for (int s = 0; s <= samples; ++s) {
          std::array<double, 3> u{};
          u[family == 0 ? p : q] = g / 4.0;
          u[family == 0 ? q : p] = static_cast<double>(s) / samples;
          u[solve] = -(d + n[p] * u[p] + n[q] * u[q]) / n[solve];
          if (u[solve] < 0.0 || u[solve] > 1.0) {
            pen_down = false;
            continue;
          }
          const auto pt = screen(u[0], u[1], u[2]);
          path += (pen_down ? " L" : " M") + f2(pt.first) + " " + f2(pt.second);
          pen_down = true;
        }
        if (!path.empty()) {
          svg << "<path d=\"" << path.substr(1) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.8\" "
              << "stroke-opacity=\"0.6\"/>\n";
        }
      }
    }
  }
  svg << "</g>\n";
  legend(svg, options, labels);
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace pbdr
