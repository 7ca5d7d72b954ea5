#pragma once

#include <optional>
#include <string>

#include "dbrp/cost.hpp"

namespace dbrp {

/// SVG 1.1 drawing of the table, footprints coloured by category, one badge per stacking edge
/// and, with a plan, two polylines per action (class "pick-leg" from the manipulator to the
/// pick, class "place-leg" from pick to place) plus a cost label. Byte-identical for identical
/// inputs.
std::string render_svg(const SceneState& s, const std::optional<Plan>& plan, double pixels_per_unit = 400.0);

}  // namespace dbrp
