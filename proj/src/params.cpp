#include "cir/params.hpp"

#include <algorithm>
#include <cmath>

namespace cir {

CirParams validate_params(double b, double sigma, double x0) {
    auto check = [](const char* name, double v) {
        if (!std::isfinite(v) || v <= 0.0) throw NonPositiveParameter(name, v);
    };
    check("b", b);
    check("sigma", sigma);
    check("x0", x0);
    return CirParams{b, sigma, x0, sigma * sigma <= 2.0 * b};
}

double mean_at(const CirParams& p, double t) {
    // b + (x0 - b) e^{-t}; grouped this way it is exact at t = 0 and stable
    // for large t, where the e^{-t} term just fades out.
    return p.b + (p.x0 - p.b) * std::exp(-t);
}

double second_moment_at(const CirParams& p, double t) {
    const double em = std::exp(-t);
    const double omem = -std::expm1(-t);  // 1 - e^{-t} without cancellation
    const double s2 = p.sigma * p.sigma;
    return p.x0 * (2.0 * p.b + s2) * em +
           (p.x0 * p.x0 - p.x0 * s2 - 2.0 * p.x0 * p.b) * em * em +
           (p.b * s2 / 2.0 + p.b * p.b) * omem * omem;
}

double variance_at(const CirParams& p, double t) {
    const double m = mean_at(p, t);
    return second_moment_at(p, t) - m * m;
}

NoncentralChiSqSpec marginal_law(const CirParams& p, double t) {
    if (!(t > 0.0)) throw DegenerateTime("marginal law requested at t <= 0");
    const double s2 = p.sigma * p.sigma;
    const double em = std::exp(-t);
    const double omem = -std::expm1(-t);
    NoncentralChiSqSpec spec;
    spec.df = 4.0 * p.b / s2;
    spec.noncentrality = 4.0 * p.x0 * em / (s2 * omem);
    spec.scale = s2 * omem / 4.0;
    return spec;
}

MomentBounds second_moment_sup(const CirParams& p, double horizon) {
    if (!(horizon > 0.0)) throw DegenerateTime("moment bound needs horizon > 0");

    // The second moment is smooth with a single interior extremum at most, so
    // a scan plus a golden-section polish around the best grid point is
    // enough. The grid alone is already accurate to O((T/grid)^2).
    const int grid = 1024;
    double best_t = 0.0, best = second_moment_at(p, 0.0);
    for (int i = 1; i <= grid; ++i) {
        const double t = horizon * static_cast<double>(i) / grid;
        const double v = second_moment_at(p, t);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    double lo = std::max(0.0, best_t - horizon / grid);
    double hi = std::min(horizon, best_t + horizon / grid);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - invphi * (hi - lo);
    double d = lo + invphi * (hi - lo);
    double fc = second_moment_at(p, c);
    double fd = second_moment_at(p, d);
    for (int it = 0; it < 80 && hi - lo > 1e-14 * horizon; ++it) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = second_moment_at(p, c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + invphi * (hi - lo);
            fd = second_moment_at(p, d);
        }
    }
    best = std::max({best, fc, fd});
    // Inflate so the bound strictly dominates despite rounding.
    return MomentBounds{horizon, best * (1.0 + 1e-9)};
}

}  // namespace cir
