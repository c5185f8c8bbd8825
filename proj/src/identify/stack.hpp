#pragma once

#include <vector>

#include "core/record.hpp"
#include "geometry/boundary.hpp"
#include "geometry/speed_field.hpp"

namespace recho::identify {

// Backprojection with stacking: the boundary record continued onto an
// interior hypersurface Sigma. Output channel k carries
// S(t, z_k) = mean_i u(t + d(y_i, z_k), y_i).
TimeSeriesRecord backproject_stack(const CauchyRecord& data, const std::vector<Vec2>& sigma,
                                   const geometry::CircleBoundary& omega,
                                   const geometry::SpeedField& speed);

}  // namespace recho::identify
