#pragma once

#include "cir/errors.hpp"

namespace cir {

// Parameters of dX_t = (b - X_t) dt + sigma sqrt(X_t) dW_t, X_0 = x0.
// The mean-reversion speed is normalized to 1, so b is both the drift level
// and the long-run mean. feller_ok records whether sigma^2 <= 2b, which is
// exactly the condition under which the process never reaches zero.
struct CirParams {
    double b = 1.0;
    double sigma = 1.0;
    double x0 = 1.0;
    bool feller_ok = true;
};

// Checked construction. Rejects non-finite or non-positive b, sigma, x0 and
// fills in the Feller flag. Degenerate diagnostics (for example sigma = 0)
// can still build the aggregate directly; everything downstream treats the
// fields as given.
CirParams validate_params(double b, double sigma, double x0);

// E X_t = x0 e^{-t} + b (1 - e^{-t}).
double mean_at(const CirParams& p, double t);

// E X_t^2, closed form. Exact for all t >= 0.
double second_moment_at(const CirParams& p, double t);

double variance_at(const CirParams& p, double t);

// X_t is scale * Y where Y is noncentral chi-square with df degrees of
// freedom (not an integer in general) and the given noncentrality.
struct NoncentralChiSqSpec {
    double df = 0.0;
    double noncentrality = 0.0;
    double scale = 0.0;
};

// Exact marginal law of X_t. Throws DegenerateTime for t <= 0: at t = 0 the
// law is a point mass and the chi-square representation degenerates.
NoncentralChiSqSpec marginal_law(const CirParams& p, double t);

// B = sup over [0, horizon] of the second moment, inflated by a hair so the
// reported value really dominates every grid evaluation.
struct MomentBounds {
    double horizon = 0.0;
    double second_moment_sup = 0.0;
};

MomentBounds second_moment_sup(const CirParams& p, double horizon);

}  // namespace cir
