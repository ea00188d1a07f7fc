#pragma once

#include <span>
#include <string>
#include <vector>

#include "pbdr/separators.hpp"

namespace pbdr {

struct PlotPoint {
  Point coords;
  std::string label;
};

struct PlotOptions {
  std::string title;
  std::vector<std::string> axis_names;  // one per dimension
  int width = 720;
  int height = 540;
};

/// Scatter plot coloured by label (colours assigned in sorted label order)
/// with each hyperplane drawn as a line clipped to the plot area.
std::string scatter_svg_2d(std::span<const PlotPoint> points, std::span<const Hyperplane> lines,
                           const PlotOptions& options);

/// Fixed isometric view of the data's bounding box, each axis scaled to the
/// unit interval: x runs to the lower right, y to the lower left, z up
/// (screen = ((x - y) cos 30deg, z - (x + y) sin 30deg)). Each plane is
/// traced as a 5 x 5 wireframe inside the box.
std::string scatter_svg_3d(std::span<const PlotPoint> points, std::span<const Hyperplane> planes,
                           const PlotOptions& options);

}  // namespace pbdr
