#pragma once

#include <string>

#include "gibbsbd/datagen.hpp"
#include "gibbsbd/summary.hpp"

namespace gibbsbd {

// Self-contained SVG with four layer groups: the intensity-shaded pixel
// scatter, the credible band (shaded), the true boundary (solid, empty group
// when unknown), and the posterior mean (dashed). Output is byte-identical
// for identical inputs.
void emit_plot(const CurveGrid& grid, const CredibleBand& band, const RadialCurve* truth,
               const Dataset& data, const Frame& frame, const std::string& path);

}  // namespace gibbsbd
