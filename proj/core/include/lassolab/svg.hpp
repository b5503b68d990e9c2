#pragma once

#include <string>
#include <vector>

#include "lassolab/types.hpp"

namespace lassolab {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CurveSeries {
    std::string label;
    RealVector xs;
    RealVector ys;
};

/// Standalone SVG 1.1 line chart: axes with ticks, a legend entry and one
/// polyline per series. Series must be nonempty and of equal lengths.
/// Numeric values are embedded with 6 significant digits.
void render_curves_svg(const std::vector<CurveSeries>& series, const std::string& path,
                       const std::string& title = "", const std::string& x_label = "t",
                       const std::string& y_label = "");

}  // namespace lassolab
