#pragma once

#include <string>

#include "gibbsbd/sampler.hpp"

namespace gibbsbd {

// Chain files: a JSON header (config, seed, acceptance rates) next to a CSV
// with one row per draw: draw index, D, inner knots and coefficients (space-
// separated quoted lists, full precision), and the curve evaluated on the
// standard 200-point angle grid.
void write_chain(const Chain& chain, const std::string& csv_path, const std::string& json_path);

// Rebuilds draws from the knot/coefficient columns; the radius columns are
// for external consumers and are not read back.
Chain read_chain(const std::string& csv_path, const std::string& json_path);

}  // namespace gibbsbd
