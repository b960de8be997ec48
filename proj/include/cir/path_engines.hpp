#pragma once

#include <span>
#include <vector>

#include "cir/grid.hpp"
#include "cir/params.hpp"
#include "cir/rng.hpp"
#include "cir/truncated.hpp"

namespace cir {

// A path sampled on discrete times (uniform grids here, but nothing below
// assumes uniformity). values[i] belongs to times[i]; values are >= 0.
struct ContinuousPath {
    std::vector<double> times;
    std::vector<double> values;
};

// One draw of scale * chi'^2(df, lambda) through the Poisson mixture:
// J ~ Poisson(lambda/2), then scale * 2 * Gamma(df/2 + J). Works for any
// real df > 0 and lambda >= 0 (lambda = 0 is the central case and consumes
// no Poisson draw).
double sample_noncentral_chisq(const NoncentralChiSqSpec& spec, Rng& rng);

// One exact draw of X_t.
double sample_marginal(const CirParams& p, double t, Rng& rng);

// Exact simulation on the grid: each step draws from the transition law over
// dt, which is the marginal law restarted at the current state. No
// discretization error; the only approximation anywhere is floating point.
ContinuousPath exact_cir_path(const CirParams& p, const GridSpec& grid, Rng& rng);

// Gaussian Euler reference for the truncated dynamics. The drift uses
// min(x, C); the diffusion sqrt(clamp(x, 0, C)). A step that lands below
// zero is clamped back to zero, and clamp_fires counts such events (they
// become rare as the grid refines when 2b >= sigma^2).
struct EulerPath {
    ContinuousPath path;
    long clamp_fires = 0;
};

EulerPath euler_truncated_path(const CirParams& p, const TruncationLevel& trunc,
                               const GridSpec& grid, Rng& rng);

// Same scheme driven by caller-supplied standard normals (one per step),
// which makes coupled refinement studies possible.
EulerPath euler_truncated_path(const CirParams& p, const TruncationLevel& trunc,
                               const GridSpec& grid, std::span<const double> gaussians);

// Left-endpoint Riemann sum of the path over its whole time range:
//   sum_i values[i] * (times[i+1] - times[i]).
double time_integral(const ContinuousPath& path);

// Same with the integrand capped at `cap`.
double time_integral_capped(const ContinuousPath& path, double cap);

// Running left-endpoint integral: out[i] = integral up to times[i], with the
// integrand capped (pass +infinity for no cap). out[0] = 0.
std::vector<double> prefix_time_integral(const ContinuousPath& path, double cap);

// First exit from (alpha, beta), monitored at multiples of dt up to
// max_time. `step` advances the state by dt: x_next = step(x, dt).
struct ExitResult {
    enum class Side { low, high, none };
    Side side = Side::none;
    double time = 0.0;
    long steps = 0;
};

template <class StepFn>
ExitResult first_exit(double x0, double alpha, double beta, double dt,
                      double max_time, StepFn&& step) {
    if (!(0.0 < alpha && alpha < x0 && x0 < beta))
        throw OrderingViolation("first exit needs 0 < alpha < x0 < beta");
    if (!(dt > 0.0) || !(max_time > 0.0))
        throw ConfigInvalid("first exit needs dt > 0 and max_time > 0");

    double x = x0;
    long k = 0;
    for (;;) {
        const double t = static_cast<double>(k + 1) * dt;
        if (t > max_time) return ExitResult{ExitResult::Side::none, max_time, k};
        x = step(x, dt);
        ++k;
        if (x <= alpha) return ExitResult{ExitResult::Side::low, t, k};
        if (x >= beta) return ExitResult{ExitResult::Side::high, t, k};
    }
}

// first_exit driven by the Gaussian Euler step of the truncated dynamics.
ExitResult euler_first_exit(const CirParams& p, const TruncationLevel& trunc,
                            double alpha, double beta, double dt, double max_time,
                            Rng& rng);

}  // namespace cir
