#pragma once

#include "cir/params.hpp"

namespace cir {

// Truncation level C for the capped dynamics
//   dX_t = (b - X_t ^ C) dt + sigma sqrt((X_t v 0) ^ C) dW_t
// (^ = min, v = max). C must exceed max(b, 1); +infinity is a valid sentinel
// that recovers the plain dynamics.
struct TruncationLevel {
    double C = 0.0;
};

TruncationLevel validate_truncation(const CirParams& p, double C);

// b - min(x, C); defined for all real x.
double truncated_drift(const CirParams& p, const TruncationLevel& trunc, double x);

// sigma * sqrt(clamp(x, 0, C)); defined for all real x.
double truncated_diffusion(const CirParams& p, const TruncationLevel& trunc, double x);

// Integrand of the scale function,
//   rho(y) = exp{ -int_1^y 2 f(z) / g^2(z) dz }
// with f, g the truncated drift and diffusion. For y <= C this is
// y^{-2b/sigma^2} exp{2(y-1)/sigma^2}; beyond C the coefficients freeze and
// the integrand grows at a constant exponential rate. Continuous at the seam.
double scale_density(const CirParams& p, const TruncationLevel& trunc, double y);

// V(x) = int_1^x rho(y) dy. Evaluated by adaptive quadrature up to C and by
// the exact antiderivative of the frozen-coefficient branch beyond it.
// V(1) = 0, V is strictly increasing, V -> -infinity at the origin whenever
// sigma^2 <= 2b, and V -> +infinity at +infinity.
struct ScaleFunctionEval {
    enum class Method { quadrature, closed_form_tail };
    double x = 0.0;
    double value = 0.0;
    Method method = Method::quadrature;
};

ScaleFunctionEval scale_function(const CirParams& p, const TruncationLevel& trunc, double x);

// First-exit split for barriers 0 < alpha < x0 < beta:
//   P(tau_alpha < tau_beta) = (V(beta) - V(x0)) / (V(beta) - V(alpha)),
// and the complement for the upper barrier. Probabilities of the truncated
// process started at params.x0.
struct HittingProbability {
    double p_alpha_first = 0.0;
    double p_beta_first = 0.0;
};

HittingProbability hitting_probability(const CirParams& p, const TruncationLevel& trunc,
                                       double alpha, double beta);

}  // namespace cir
