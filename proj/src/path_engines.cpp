#include "cir/path_engines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cir {

double sample_noncentral_chisq(const NoncentralChiSqSpec& spec, Rng& rng) {
    if (!(spec.df > 0.0) || !(spec.scale > 0.0) || spec.noncentrality < 0.0)
        throw ConfigInvalid("noncentral chi-square needs df > 0, scale > 0, lambda >= 0");
    const double j = sample_poisson(rng, spec.noncentrality / 2.0);
    const double g = sample_gamma(rng, spec.df / 2.0 + j);
    return spec.scale * 2.0 * g;
}

double sample_marginal(const CirParams& p, double t, Rng& rng) {
    return sample_noncentral_chisq(marginal_law(p, t), rng);
}

ContinuousPath exact_cir_path(const CirParams& p, const GridSpec& grid, Rng& rng) {
    ContinuousPath path;
    path.times.reserve(static_cast<std::size_t>(grid.steps) + 1);
    path.values.reserve(static_cast<std::size_t>(grid.steps) + 1);
    path.times.push_back(0.0);
    path.values.push_back(p.x0);

    // The transition over one step is the t = dt marginal law restarted at
    // the current state, so all step laws share df and scale and only the
    // noncentrality moves with the state.
    const double dt = grid.dt();
    const double s2 = p.sigma * p.sigma;
    const double em = std::exp(-dt);
    const double omem = -std::expm1(-dt);
    NoncentralChiSqSpec step;
    step.df = 4.0 * p.b / s2;
    step.scale = s2 * omem / 4.0;
    const double lambda_per_x = 4.0 * em / (s2 * omem);

    double x = p.x0;
    for (long k = 1; k <= grid.steps; ++k) {
        step.noncentrality = lambda_per_x * x;
        x = sample_noncentral_chisq(step, rng);
        path.times.push_back(grid.time(k));
        path.values.push_back(x);
    }
    return path;
}

namespace {

EulerPath run_euler(const CirParams& p, const TruncationLevel& trunc,
                    const GridSpec& grid, Rng* rng, std::span<const double> gaussians) {
    if (rng == nullptr && static_cast<long>(gaussians.size()) != grid.steps)
        throw GridMismatch("need one normal draw per step, got " +
                           std::to_string(gaussians.size()) + " for " +
                           std::to_string(grid.steps));

    const double dt = grid.dt();
    const double sq_dt = std::sqrt(dt);
    EulerPath out;
    out.path.times.reserve(static_cast<std::size_t>(grid.steps) + 1);
    out.path.values.reserve(static_cast<std::size_t>(grid.steps) + 1);
    out.path.times.push_back(0.0);
    out.path.values.push_back(p.x0);

    double x = p.x0;
    for (long k = 1; k <= grid.steps; ++k) {
        const double z = rng ? sample_normal(*rng)
                             : gaussians[static_cast<std::size_t>(k - 1)];
        x += truncated_drift(p, trunc, x) * dt +
             truncated_diffusion(p, trunc, x) * sq_dt * z;
        if (x < 0.0) {
            x = 0.0;
            ++out.clamp_fires;
        }
        out.path.times.push_back(grid.time(k));
        out.path.values.push_back(x);
    }
    return out;
}

}  // namespace

EulerPath euler_truncated_path(const CirParams& p, const TruncationLevel& trunc,
                               const GridSpec& grid, Rng& rng) {
    return run_euler(p, trunc, grid, &rng, {});
}

EulerPath euler_truncated_path(const CirParams& p, const TruncationLevel& trunc,
                               const GridSpec& grid, std::span<const double> gaussians) {
    return run_euler(p, trunc, grid, nullptr, gaussians);
}

double time_integral(const ContinuousPath& path) {
    return time_integral_capped(path, std::numeric_limits<double>::infinity());
}

double time_integral_capped(const ContinuousPath& path, double cap) {
    if (path.times.size() != path.values.size())
        throw GridMismatch("path has " + std::to_string(path.times.size()) +
                           " times for " + std::to_string(path.values.size()) +
                           " values");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < path.times.size(); ++i)
        acc += std::min(path.values[i], cap) * (path.times[i + 1] - path.times[i]);
    return acc;
}

std::vector<double> prefix_time_integral(const ContinuousPath& path, double cap) {
    if (path.times.size() != path.values.size())
        throw GridMismatch("prefix integral needs matching times and values");
    std::vector<double> out(path.times.size(), 0.0);
    for (std::size_t i = 0; i + 1 < path.times.size(); ++i)
        out[i + 1] =
            out[i] + std::min(path.values[i], cap) * (path.times[i + 1] - path.times[i]);
    return out;
}

ExitResult euler_first_exit(const CirParams& p, const TruncationLevel& trunc,
                            double alpha, double beta, double dt, double max_time,
                            Rng& rng) {
    return first_exit(p.x0, alpha, beta, dt, max_time, [&](double x, double h) {
        const double z = sample_normal(rng);
        const double next = x + truncated_drift(p, trunc, x) * h +
                            truncated_diffusion(p, trunc, x) * std::sqrt(h) * z;
        return next < 0.0 ? 0.0 : next;
    });
}

}  // namespace cir
