#pragma once

#include <string>
#include <vector>

#include "cama/simulation.hpp"

namespace cama {

// Renders performance curves as a static SVG: one chart per (metric,
// task) pair, one polyline per strategy, dashed horizontals at the
// pre/post anchors. Pure data-to-string; byte-deterministic for a given
// input.
std::string render_curves_svg(const std::vector<CurveRow>& rows);

}  // namespace cama
