#include "v2xsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace v2xsim {

namespace {

std::string escape(const std::string& s) {
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

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Tick step of the form {1,2,5}x10^k giving roughly the requested count.
double nice_step(double span, int target_ticks) {
  if (span <= 0) return 1.0;
  double raw = span / target_ticks;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double norm = raw / mag;
  double step = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
  return step * mag;
}

}  // namespace

std::string SvgChart::render(int width, int height) const {
  const double margin_left = 70, margin_right = 20, margin_top = 40, margin_bottom = 55;
  const double plot_w = width - margin_left - margin_right;
  const double plot_h = height - margin_top - margin_bottom;

  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -std::numeric_limits<double>::infinity();
  double y_min = std::numeric_limits<double>::infinity();
  double y_max = -std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  bool empty = !(x_min <= x_max);
  if (empty) {
    x_min = 0;
    x_max = 1;
    y_min = 0;
    y_max = 1;
  }
  if (x_max == x_min) x_max = x_min + 1;
  if (y_max == y_min) {
    y_max = y_min + (y_min == 0 ? 1 : std::abs(y_min) * 0.1);
  }
  double y_pad = (y_max - y_min) * 0.05;
  y_min -= y_pad;
  y_max += y_pad;

  auto sx = [&](double x) { return margin_left + (x - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double y) {
    return margin_top + plot_h - (y - y_min) / (y_max - y_min) * plot_h;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << escape(title) << "</text>\n";

  double x_step = nice_step(x_max - x_min, 6);
  double y_step = nice_step(y_max - y_min, 6);
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (double x = std::ceil(x_min / x_step) * x_step; x <= x_max + 1e-9 * x_step;
       x += x_step) {
    out << "<line x1=\"" << num(sx(x)) << "\" y1=\"" << num(margin_top) << "\" x2=\""
        << num(sx(x)) << "\" y2=\"" << num(margin_top + plot_h)
        << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << num(sx(x)) << "\" y=\"" << num(margin_top + plot_h + 16)
        << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
  }
  for (double y = std::ceil(y_min / y_step) * y_step; y <= y_max + 1e-9 * y_step;
       y += y_step) {
    out << "<line x1=\"" << num(margin_left) << "\" y1=\"" << num(sy(y)) << "\" x2=\""
        << num(margin_left + plot_w) << "\" y2=\"" << num(sy(y))
        << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << num(margin_left - 6) << "\" y=\"" << num(sy(y) + 4)
        << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
  }
  out << "</g>\n";

  out << "<rect x=\"" << num(margin_left) << "\" y=\"" << num(margin_top) << "\" width=\""
      << num(plot_w) << "\" height=\"" << num(plot_h)
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape(x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << margin_top + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << margin_top + plot_h / 2 << ")\">"
      << escape(y_label) << "</text>\n";

  for (const auto& s : series) {
    if (s.points.empty()) continue;
    if (s.scatter) {
      out << "<g fill=\"" << s.color << "\">\n";
      for (const auto& [x, y] : s.points) {
        out << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y))
            << "\" r=\"2\"/>\n";
      }
      out << "</g>\n";
    } else {
      auto sorted = s.points;
      std::sort(sorted.begin(), sorted.end());
      out << "<polyline fill=\"none\" stroke=\"" << s.color
          << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : sorted) {
        out << num(sx(x)) << "," << num(sy(y)) << " ";
      }
      out << "\"/>\n";
    }
  }

  double ly = margin_top + 10;
  for (const auto& s : series) {
    out << "<rect x=\"" << num(margin_left + 10) << "\" y=\"" << num(ly - 8)
        << "\" width=\"12\" height=\"12\" fill=\"" << s.color << "\"/>\n";
    out << "<text x=\"" << num(margin_left + 28) << "\" y=\"" << num(ly + 2)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.label)
        << "</text>\n";
    ly += 18;
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace v2xsim
