#pragma once

#include "cir/errors.hpp"

namespace cir {

// Uniform time grid t_k = k T / n on [0, T].
struct GridSpec {
    double horizon = 1.0;
    long steps = 1;

    double dt() const { return horizon / static_cast<double>(steps); }
    double time(long k) const {
        return horizon * static_cast<double>(k) / static_cast<double>(steps);
    }

    // Index of the step interval containing t, i.e. floor(n t / T), with
    // t = T mapping to n. Throws OutOfDomain outside [0, T].
    long index_at(double t) const;
};

GridSpec make_grid(double horizon, long steps);

}  // namespace cir
