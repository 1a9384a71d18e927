// Self-contained SVG output: contour maps by marching squares and simple
// line plots on a fixed viewport.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "translab/grid.hpp"

namespace translab {

struct Segment {
  double x0, y0, x1, y1;
};

/// Marching squares over cells whose four corners are non-Exterior. Saddle
/// cells are resolved with the cell-center average. Output order follows
/// the cells row by row, so it is deterministic.
std::vector<Segment> contour_segments(const HeightField& f, double level);

/// `count` levels evenly spaced strictly between min and max of the field.
std::vector<double> contour_levels(const HeightField& f, int count);

struct Marker {
  double x = 0.0;
  double y = 0.0;
  std::string label;
};

void write_contour_svg(const std::filesystem::path& path, const HeightField& f, int levels,
                       const std::string& title, const std::vector<Marker>& markers = {});

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

void write_line_plot_svg(const std::filesystem::path& path, const std::string& title, const std::string& xlabel,
                         const std::string& ylabel, const std::vector<Series>& series);

}  // namespace translab
