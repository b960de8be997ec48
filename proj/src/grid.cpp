#include "cir/grid.hpp"

#include <cmath>
#include <string>

namespace cir {

GridSpec make_grid(double horizon, long steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw ConfigInvalid("grid horizon must be positive, got " + std::to_string(horizon));
    if (steps < 1)
        throw ConfigInvalid("grid needs at least one step, got " + std::to_string(steps));
    return GridSpec{horizon, steps};
}

long GridSpec::index_at(double t) const {
    if (!(t >= 0.0 && t <= horizon))
        throw OutOfDomain("time " + std::to_string(t) + " outside [0, " +
                          std::to_string(horizon) + "]");
    // The small nudge absorbs the rounding of t = k T / n computed in
    // floating point, so exact grid points always land on their own index.
    const double u = t * static_cast<double>(steps) / horizon;
    const long k = static_cast<long>(std::floor(u + 1e-9));
    return k > steps ? steps : k;
}

}  // namespace cir
