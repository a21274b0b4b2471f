#ifndef OBPROJ_SVG_HPP
#define OBPROJ_SVG_HPP

#include <string>
#include <vector>

#include "space.hpp"

namespace obproj {

struct PlotSeries {
  std::string label;
  std::string color;
  const RealVec* y = nullptr;
};

/// Renders an overlay line plot (axes, ticks, legend) as a standalone SVG.
std::string render_svg_plot(const std::string& title, const RealVec& x,
                            const std::vector<PlotSeries>& series);

}  // namespace obproj

#endif  // OBPROJ_SVG_HPP
