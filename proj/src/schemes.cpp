#include "cir/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cir {

NoiseSequence rademacher_noise(const GridSpec& grid, Rng& rng) {
    const double step = std::sqrt(grid.dt());
    NoiseSequence noise{grid, {}};
    noise.q.resize(static_cast<std::size_t>(grid.steps));
    for (auto& q : noise.q) q = sample_sign(rng) * step;
    return noise;
}

NoiseSequence noise_from_signs(const GridSpec& grid, const std::vector<int>& signs) {
    if (static_cast<long>(signs.size()) != grid.steps)
        throw GridMismatch("got " + std::to_string(signs.size()) + " signs for " +
                           std::to_string(grid.steps) + " steps");
    const double step = std::sqrt(grid.dt());
    NoiseSequence noise{grid, {}};
    noise.q.reserve(signs.size());
    for (int s : signs) {
        if (s != 1 && s != -1) throw ConfigInvalid("signs must be +1 or -1");
        noise.q.push_back(s > 0 ? step : -step);
    }
    return noise;
}

PositivityReport positivity_precondition(const CirParams& p, const GridSpec& grid) {
    const double h = grid.dt();
    PositivityReport rep;
    rep.feller_ok = p.sigma * p.sigma <= 2.0 * p.b;
    rep.steps_ok = static_cast<double>(grid.steps) > 2.0 * grid.horizon;
    rep.discriminant = p.sigma * p.sigma * h - 4.0 * p.b * h * (1.0 - h);
    rep.guaranteed = rep.feller_ok && rep.steps_ok && rep.discriminant < 0.0;
    return rep;
}

namespace {

// Shared stepping loop. The plain scheme is the capped one with
// cap = +infinity and no lower clamp under the root, so both recursions are
// the same arithmetic whenever states are positive.
SchemePath run_scheme(const CirParams& p, const NoiseSequence& noise, double cap,
                      bool clamp_below, PositivityCheck check) {
    const GridSpec& grid = noise.grid;
    if (static_cast<long>(noise.q.size()) != grid.steps)
        throw GridMismatch("noise length " + std::to_string(noise.q.size()) +
                           " does not match grid with " + std::to_string(grid.steps) +
                           " steps");
    if (check == PositivityCheck::enforce) {
        const PositivityReport rep = positivity_precondition(p, grid);
        if (!rep.guaranteed)
            throw PositivityNotGuaranteed(
                "positivity requires sigma^2 <= 2b and n > 2T (discriminant " +
                std::to_string(rep.discriminant) + ")");
    }

    const double h = grid.dt();
    SchemePath path;
    path.grid = grid;
    path.cap = cap;
    path.values.reserve(static_cast<std::size_t>(grid.steps) + 1);
    path.increments.reserve(static_cast<std::size_t>(grid.steps));

    double x = p.x0;
    path.values.push_back(x);
    for (long k = 1; k <= grid.steps; ++k) {
        const double capped = std::min(x, cap);
        double root_arg = capped;
        if (root_arg < 0.0) {
            if (!clamp_below)
                throw NegativeStateEncountered(static_cast<std::size_t>(k - 1), x);
            root_arg = 0.0;
        }
        const double q = noise.q[static_cast<std::size_t>(k - 1)];
        const double inc = (p.b - capped) * h + p.sigma * q * std::sqrt(root_arg);
        x += inc;
        path.increments.push_back(inc);
        path.values.push_back(x);
    }
    return path;
}

}  // namespace

SchemePath additive_scheme(const CirParams& p, const NoiseSequence& noise,
                           PositivityCheck check) {
    return run_scheme(p, noise, std::numeric_limits<double>::infinity(),
                      /*clamp_below=*/false, check);
}

SchemePath truncated_scheme(const CirParams& p, const TruncationLevel& trunc,
                            const NoiseSequence& noise, PositivityCheck check) {
    return run_scheme(p, noise, trunc.C, /*clamp_below=*/true, check);
}

double step_eval(const SchemePath& path, double t) {
    const long k = path.grid.index_at(t);  // throws OutOfDomain outside [0, T]
    return path.values[static_cast<std::size_t>(k)];
}

TheoreticalBounds theoretical_bounds(const CirParams& p, const TruncationLevel& trunc,
                                     const GridSpec& grid) {
    const double T = grid.horizon;
    const double n = static_cast<double>(grid.steps);
    const double C = trunc.C;
    const double s2 = p.sigma * p.sigma;
    const double ab = std::fabs(p.b);

    TheoreticalBounds tb;
    tb.gamma = std::max(
        (s2 + 2.0 * p.b + std::sqrt(s2 * s2 + 4.0 * p.b * s2 + 8.0 * p.b * p.b)) / 1.5,
        p.x0);
    tb.c2 = (p.b + C * T) + p.sigma * std::sqrt(T * C);
    tb.increment_bound = (p.b + C * T) / n + p.sigma * std::sqrt(T * C / n);
    tb.disagreement_bound =
        (2.0 * (p.x0 + p.b * T) * (p.x0 + p.b * T) + 8.0 * s2 * tb.gamma * T) / (C * C);
    tb.drift_residual_bound = (ab + C) * T / n;
    tb.quad_residual_bound = (ab + C) * (ab + C) * T * T / n + s2 * C * T / n;
    return tb;
}

AgreementReport agreement_check(const SchemePath& plain, const SchemePath& capped) {
    if (plain.grid.steps != capped.grid.steps ||
        plain.grid.horizon != capped.grid.horizon)
        throw GridMismatch("agreement check needs a shared grid");
    if (plain.values.size() != capped.values.size())
        throw GridMismatch("agreement check needs equally long paths");

    AgreementReport rep;
    for (std::size_t k = 0; k < plain.values.size(); ++k) {
        if (plain.values[k] != capped.values[k]) {
            rep.agree = false;
            rep.first_divergence = k;
            break;
        }
    }
    return rep;
}

}  // namespace cir
