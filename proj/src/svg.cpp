#include "rtrap/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>


namespace rtrap {

namespace {

constexpr double kW = 800, kH = 600;
constexpr double kLeft = 80, kRight = 30, kTop = 50, kBottom = 70;

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// Roughly five ticks at 1, 2 or 5 times a power of ten.
std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0)) return {lo};
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) {
    t.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  }
  return t;
}

}  // namespace

std::string render_plot(const PlotSpec& spec, const std::vector<Series>& series) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto ty = [&](double y) { return spec.logY ? std::log10(y) : y; };
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      const double yy = ty(s.y[i]);
      if (!std::isfinite(s.x[i]) || !std::isfinite(yy)) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, yy);
      y1 = std::max(y1, yy);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.04 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (ty(y) - y0) / (y1 - y0)) * ph; };
  auto pyRaw = [&](double v) { return kTop + (1.0 - (v - y0) / (y1 - y0)) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
  o << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  o << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">"
    << esc(spec.title) << "</text>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (double t : ticks(x0, x1)) {
    o << "<line x1=\"" << num(px(t)) << "\" y1=\"" << kTop + ph << "\" x2=\"" << num(px(t)) << "\" y2=\""
      << kTop + ph + 5 << "\" stroke=\"black\"/>";
    o << "<text x=\"" << num(px(t)) << "\" y=\"" << kTop + ph + 20 << "\" text-anchor=\"middle\">" << num(t)
      << "</text>\n";
  }
  for (double t : ticks(y0, y1)) {
    o << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(pyRaw(t)) << "\" x2=\"" << kLeft << "\" y2=\""
      << num(pyRaw(t)) << "\" stroke=\"black\"/>";
    o << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(pyRaw(t) + 4) << "\" text-anchor=\"end\">"
      << (spec.logY ? "1e" + num(t) : num(t)) << "</text>\n";
  }
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 20 << "\" text-anchor=\"middle\" font-size=\"14\">"
    << esc(spec.xLabel) << "</text>\n";
  o << "<text x=\"20\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 "
    << kTop + ph / 2 << ")\">" << esc(spec.yLabel) << "</text>\n";
  o << "</g>\n";

  for (const auto& s : series) {
    if (s.points) {
      o << "<g fill=\"" << s.color << "\">";
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(ty(s.y[i]))) continue;
        o << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i])) << "\" r=\"1.5\"/>";
      }
      o << "</g>\n";
    } else {
      o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"" << s.width << "\" points=\"";
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(ty(s.y[i]))) continue;
        o << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
      }
      o << "\"/>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace rtrap
