#pragma once

#include <cstddef>
#include <vector>

#include "cir/path_engines.hpp"
#include "cir/schemes.hpp"

namespace cir {

// Multiplicative price processes built on top of the discrete schemes and
// their continuous limits. Prices are kept as logs internally; products of
// many near-one factors stay accurate that way and values[0] = e^{x0} can
// be astronomically large without overflow until the caller exponentiates.
enum class PriceKind {
    product_plain,      // e^{x0} prod (1 + Q_k), plain scheme increments
    product_truncated,  // same with truncated increments
    product_corrected,  // per-factor correction exp{sigma^2 X_k / (2n)}
    limit_plain,        // exp{X_t - (sigma^2/2) int_0^t X ds}
    limit_truncated,    // exp{X_t - (sigma^2/2) int_0^t (X ^ C) ds}
    exponential         // exp{X_t}
};

struct PricePath {
    PriceKind kind = PriceKind::product_plain;
    std::vector<double> times;
    std::vector<double> log_values;

    double value(std::size_t i) const;
    // Step-process evaluation: the price at floor(n t / T) factors.
    double value_at(double t) const;
    double log_value_at(double t) const;
};

// S_m = e^{X_0} prod_{k<=m} (1 + Q_k). Throws NonPositiveFactor (with the
// step index) if a factor drops to zero or below; for n >= 4 c2^2 the
// deterministic increment bound |Q_k| <= c2/sqrt(n) <= 1/2 rules that out
// for the truncated scheme.
PricePath product_price(const SchemePath& scheme);

// The corrected product multiplies each factor by exp{sigma^2 X_k / (2n)}
// with X_k the post-step state. By default states and increments come from
// the same scheme path; the two-path overload wires increments from one
// scheme and states from another (useful to probe the variant where the
// correction reads the plain states while the product reads the truncated
// increments).
PricePath corrected_product_price(const SchemePath& scheme, const CirParams& p);
PricePath corrected_product_price(const SchemePath& increments_from,
                                  const SchemePath& states_from, const CirParams& p);

// Continuous-time limit prices on a sampled path, with the left-endpoint
// rule for the time integral.
PricePath limit_price(const ContinuousPath& path, const CirParams& p);
PricePath limit_price(const ContinuousPath& path, const CirParams& p,
                      const TruncationLevel& trunc);

// exp{X_t}, the limit of the corrected product.
PricePath exponential_price(const ContinuousPath& path);

}  // namespace cir
