#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace obproj {

namespace {

constexpr int kWidth = 960;
constexpr int kHeight = 540;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

std::string fmt(double v, const char* format = "%.6g") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

// Round tick step to 1/2/5 * 10^m covering the span with ~6 ticks.
double tick_step(double span) {
  if (span <= 0) return 1.0;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  if (frac <= 1.0) return mag;
  if (frac <= 2.0) return 2.0 * mag;
  if (frac <= 5.0) return 5.0 * mag;
  return 10.0 * mag;
}

}  // namespace

std::string render_svg_plot(const std::string& title, const RealVec& x,
                            const std::vector<PlotSeries>& series) {
  double xmin = x.size() ? x.minCoeff() : 0.0;
  double xmax = x.size() ? x.maxCoeff() : 1.0;
  double ymin = 0.0, ymax = 1.0;
  bool have_y = false;
  for (const PlotSeries& s : series) {
    if (!s.y || s.y->size() == 0) continue;
    const double lo = s.y->minCoeff(), hi = s.y->maxCoeff();
    if (!have_y) {
      ymin = lo;
      ymax = hi;
      have_y = true;
    } else {
      ymin = std::min(ymin, lo);
      ymax = std::max(ymax, hi);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const double px0 = kMarginLeft, px1 = kWidth - kMarginRight;
  const double py0 = kHeight - kMarginBottom, py1 = kMarginTop;
  auto sx = [&](double v) {
    return px0 + (v - xmin) / (xmax - xmin) * (px1 - px0);
  };
  auto sy = [&](double v) {
    return py0 + (v - ymin) / (ymax - ymin) * (py1 - py0);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";

  // axes
  svg << "<line x1=\"" << px0 << "\" y1=\"" << py0 << "\" x2=\"" << px1
      << "\" y2=\"" << py0 << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << px0 << "\" y1=\"" << py0 << "\" x2=\"" << px0
      << "\" y2=\"" << py1 << "\" stroke=\"black\"/>\n";

  const double xstep = tick_step(xmax - xmin);
  for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-12 * xstep;
       t += xstep) {
    const double px = sx(t);
    svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << py0 << "\" x2=\""
        << fmt(px) << "\" y2=\"" << py0 + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt(px) << "\" y=\"" << py0 + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt(t, "%.4g") << "</text>\n";
  }
  const double ystep = tick_step(ymax - ymin);
  for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-12 * ystep;
       t += ystep) {
    const double py = sy(t);
    svg << "<line x1=\"" << px0 - 5 << "\" y1=\"" << fmt(py) << "\" x2=\""
        << px0 << "\" y2=\"" << fmt(py) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px0 - 9 << "\" y=\"" << fmt(py + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt(t, "%.4g") << "</text>\n";
  }

  for (const PlotSeries& s : series) {
    if (!s.y || s.y->size() != x.size() || x.size() == 0) continue;
    svg << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.2\" points=\"";
    for (int i = 0; i < x.size(); ++i) {
      if (i) svg << ' ';
      svg << fmt(sx(x[i])) << ',' << fmt(sy((*s.y)[i]));
    }
    svg << "\"/>\n";
  }

  // legend
  double ly = kMarginTop + 8;
  for (const PlotSeries& s : series) {
    svg << "<line x1=\"" << px1 - 150 << "\" y1=\"" << fmt(ly) << "\" x2=\""
        << px1 - 120 << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << px1 - 114 << "\" y=\"" << fmt(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label
        << "</text>\n";
    ly += 18;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace obproj
