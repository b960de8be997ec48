#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "cir/grid.hpp"
#include "cir/params.hpp"
#include "cir/rng.hpp"
#include "cir/truncated.hpp"

namespace cir {

// Symmetric Bernoulli driver: q_k = +-sqrt(T/n), each sign with probability
// one half. These play the role of the Brownian increments in the discrete
// schemes; their first two moments match those of sqrt(T/n) N(0,1) exactly.
struct NoiseSequence {
    GridSpec grid;
    std::vector<double> q;  // q[k-1] is q_k, k = 1..n
};

NoiseSequence rademacher_noise(const GridSpec& grid, Rng& rng);

// Deterministic construction from explicit signs (+1/-1), mostly for tests.
NoiseSequence noise_from_signs(const GridSpec& grid, const std::vector<int>& signs);

// Positivity certificate for the discrete recursions. Viewing one step as a
// quadratic in sqrt(X_{k-1}) with the worst sign of q_k, states stay strictly
// positive when the discriminant
//   D = sigma^2 T/n - 4 b (T/n)(1 - T/n)
// is negative, which holds whenever sigma^2 <= 2b and n > 2T.
struct PositivityReport {
    bool feller_ok = false;  // sigma^2 <= 2b
    bool steps_ok = false;   // n > 2T
    double discriminant = 0.0;
    bool guaranteed = false;
};

PositivityReport positivity_precondition(const CirParams& p, const GridSpec& grid);

enum class PositivityCheck { enforce, skip };

// One realized path of a discrete scheme. values[k] is X_k with
// values[0] = x0; increments[k-1] is Q_k; values[k] - values[k-1] equals
// increments[k-1] bitwise by construction. cap is the truncation level,
// +infinity for the plain additive scheme, so the truncated recursion with
// the sentinel cap reproduces the additive one bit for bit on shared noise.
struct SchemePath {
    GridSpec grid;
    double cap = std::numeric_limits<double>::infinity();
    std::vector<double> values;
    std::vector<double> increments;

    bool truncated() const { return cap != std::numeric_limits<double>::infinity(); }
};

// X_k = X_{k-1} + (b - X_{k-1}) T/n + sigma q_k sqrt(X_{k-1}).
// With PositivityCheck::enforce the positivity precondition must hold, and
// all states are then strictly positive. With skip the recursion runs as
// written; a negative state under the square root raises
// NegativeStateEncountered (a negative terminal state is representable).
SchemePath additive_scheme(const CirParams& p, const NoiseSequence& noise,
                           PositivityCheck check = PositivityCheck::enforce);

// Same recursion with X_{k-1} ^ C in the drift and under the root:
// X_k = X_{k-1} + (b - X_{k-1} ^ C) T/n + sigma q_k sqrt((X_{k-1} v 0) ^ C).
SchemePath truncated_scheme(const CirParams& p, const TruncationLevel& trunc,
                            const NoiseSequence& noise,
                            PositivityCheck check = PositivityCheck::enforce);

// Right-continuous step extension, X_t = X_{floor(n t / T)}.
double step_eval(const SchemePath& path, double t);

struct StepPath {
    const SchemePath& path;
    double at(double t) const { return step_eval(path, t); }
};

// A-priori constants attached to the truncated scheme:
//   gamma                 dominates E X_k uniformly in k and n,
//   c2                    |Q_k| <= c2 / sqrt(n) deterministically,
//   increment_bound       the same bound spelled per step,
//   disagreement_bound    P{plain and truncated paths ever differ},
//   drift_residual_bound  sup_t of the conditional-mean residual,
//   quad_residual_bound   sup_t of the uncentered second-moment residual.
struct TheoreticalBounds {
    double gamma = 0.0;
    double c2 = 0.0;
    double increment_bound = 0.0;
    double disagreement_bound = 0.0;
    double drift_residual_bound = 0.0;
    double quad_residual_bound = 0.0;
};

TheoreticalBounds theoretical_bounds(const CirParams& p, const TruncationLevel& trunc,
                                     const GridSpec& grid);

// Pathwise comparison of the plain and capped recursions driven by the same
// noise. first_divergence is the index of the first differing state.
struct AgreementReport {
    bool agree = true;
    std::optional<std::size_t> first_divergence;
};

AgreementReport agreement_check(const SchemePath& plain, const SchemePath& capped);

}  // namespace cir
