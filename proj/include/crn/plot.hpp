#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crn {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal standalone SVG line chart. With log_x, non-positive x samples are skipped.
void write_svg_plot(std::ostream& out, const std::string& title, const std::vector<PlotSeries>& series,
                    bool log_x = true);

}  // namespace crn
