#pragma once

#include <span>

#include "cir/schemes.hpp"
#include "cir/stats.hpp"

namespace cir {

// The discrete scheme is an Ito-like decomposition in disguise: summing the
// conditional moments of its increments against the step-process integrals
// leaves only boundary terms. These evaluators compute the raw sums, so
// tests can hold them against the closed boundary forms
//   drift:          |(b - X_m ^ C) (t - m T/n)|,        m = floor(nt/T)
//   centered quad:  sigma^2 (X_m ^ C) (t - m T/n)
// and against the a-priori bounds.

// sum_{k<=m} E(Q_k | F_{k-1}) - int_0^t (b - X_s ^ C) ds on the step path.
double drift_residual_at(const SchemePath& path, const CirParams& p,
                         const TruncationLevel& trunc, double t);

// sum_{k<=m} Var(Q_k | F_{k-1}) - sigma^2 int_0^t (X_s ^ C) ds.
double quad_residual_centered_at(const SchemePath& path, const CirParams& p,
                                 const TruncationLevel& trunc, double t);

// sum_{k<=m} E(Q_k^2 | F_{k-1}) - sigma^2 int_0^t (X_s ^ C) ds; this one
// keeps the squared-drift sum, so it is not a pure boundary term.
double quad_residual_uncentered_at(const SchemePath& path, const CirParams& p,
                                   const TruncationLevel& trunc, double t);

// Closed boundary forms of the first two.
double drift_residual_closed(const SchemePath& path, const CirParams& p,
                             const TruncationLevel& trunc, double t);
double quad_residual_centered_closed(const SchemePath& path, const CirParams& p,
                                     const TruncationLevel& trunc, double t);

struct ConditionReport {
    double max_increment = 0.0;
    double drift_residual_sup = 0.0;
    double quad_residual_sup_centered = 0.0;
    double quad_residual_sup_uncentered = 0.0;
    TheoreticalBounds bounds;
    double centered_quad_bound = 0.0;  // sigma^2 C T / n
    bool within_bounds = false;
};

// Residual sups over the supplied evaluation times (raw-sum route).
ConditionReport condition_residuals(const SchemePath& path, const CirParams& p,
                                    const TruncationLevel& trunc,
                                    std::span<const double> t_grid);

// Exact sup over all of [0, T]. Between grid points every residual is linear
// in t, so the sup is attained at left limits of grid points and can be
// enumerated exactly instead of grid-searched.
ConditionReport condition_residual_sup(const SchemePath& path, const CirParams& p,
                                       const TruncationLevel& trunc);

// Grid points and midpoints of every step: a convenient default t_grid.
std::vector<double> residual_eval_times(const GridSpec& grid);

// Largest |Q_k| over a batch of paths against the deterministic increment
// bound.
StatReport increment_statistic(std::span<const SchemePath> batch,
                               const TheoreticalBounds& bounds);

// Whole-horizon sums of conditional moments with their deterministic
// ceilings: sum E(Q_k^2|F) <= c2^2 and sum |E(Q_k|F)| <= (|b| + C) T.
struct MomentSums {
    double sum_sq = 0.0;
    double sum_abs_mean = 0.0;
    double bound_sq = 0.0;
    double bound_abs = 0.0;
    bool within = false;
};

MomentSums conditional_moment_sums(const SchemePath& path, const CirParams& p,
                                   const TruncationLevel& trunc);

}  // namespace cir
