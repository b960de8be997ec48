#include "cir/prices.hpp"

#include <cmath>
#include <limits>

namespace cir {

double PricePath::value(std::size_t i) const { return std::exp(log_values.at(i)); }

double PricePath::log_value_at(double t) const {
    if (times.empty()) throw OutOfDomain("empty price path");
    // times form the scheme grid; reuse its flooring convention.
    GridSpec grid{times.back(), static_cast<long>(times.size()) - 1};
    if (grid.steps == 0) return log_values[0];
    return log_values[static_cast<std::size_t>(grid.index_at(t))];
}

double PricePath::value_at(double t) const { return std::exp(log_value_at(t)); }

namespace {

std::vector<double> grid_times(const GridSpec& grid) {
    std::vector<double> ts(static_cast<std::size_t>(grid.steps) + 1);
    for (long k = 0; k <= grid.steps; ++k) ts[static_cast<std::size_t>(k)] = grid.time(k);
    return ts;
}

}  // namespace

PricePath product_price(const SchemePath& scheme) {
    PricePath price;
    price.kind = scheme.truncated() ? PriceKind::product_truncated
                                    : PriceKind::product_plain;
    price.times = grid_times(scheme.grid);
    price.log_values.reserve(scheme.values.size());

    double log_s = scheme.values[0];  // S_0 = e^{x0}
    price.log_values.push_back(log_s);
    for (std::size_t k = 0; k < scheme.increments.size(); ++k) {
        const double factor = 1.0 + scheme.increments[k];
        if (!(factor > 0.0)) throw NonPositiveFactor(k + 1, factor);
        log_s += std::log1p(scheme.increments[k]);
        price.log_values.push_back(log_s);
    }
    return price;
}

PricePath corrected_product_price(const SchemePath& scheme, const CirParams& p) {
    return corrected_product_price(scheme, scheme, p);
}

PricePath corrected_product_price(const SchemePath& increments_from,
                                  const SchemePath& states_from, const CirParams& p) {
    if (increments_from.grid.steps != states_from.grid.steps ||
        increments_from.grid.horizon != states_from.grid.horizon)
        throw GridMismatch("corrected product needs both paths on one grid");

    PricePath price;
    price.kind = PriceKind::product_corrected;
    price.times = grid_times(increments_from.grid);
    price.log_values.reserve(increments_from.values.size());

    const double correction_rate =
        p.sigma * p.sigma / (2.0 * static_cast<double>(increments_from.grid.steps));
    double log_s = increments_from.values[0];
    price.log_values.push_back(log_s);
    for (std::size_t k = 0; k < increments_from.increments.size(); ++k) {
        const double factor = 1.0 + increments_from.increments[k];
        if (!(factor > 0.0)) throw NonPositiveFactor(k + 1, factor);
        log_s += std::log1p(increments_from.increments[k]) +
                 correction_rate * states_from.values[k + 1];
        price.log_values.push_back(log_s);
    }
    return price;
}

PricePath limit_price(const ContinuousPath& path, const CirParams& p) {
    PricePath price;
    price.kind = PriceKind::limit_plain;
    price.times = path.times;
    const auto integral =
        prefix_time_integral(path, std::numeric_limits<double>::infinity());
    price.log_values.resize(path.values.size());
    const double half_s2 = p.sigma * p.sigma / 2.0;
    for (std::size_t i = 0; i < path.values.size(); ++i)
        price.log_values[i] = path.values[i] - half_s2 * integral[i];
    return price;
}

PricePath limit_price(const ContinuousPath& path, const CirParams& p,
                      const TruncationLevel& trunc) {
    PricePath price;
    price.kind = PriceKind::limit_truncated;
    price.times = path.times;
    const auto integral = prefix_time_integral(path, trunc.C);
    price.log_values.resize(path.values.size());
    const double half_s2 = p.sigma * p.sigma / 2.0;
    for (std::size_t i = 0; i < path.values.size(); ++i)
        price.log_values[i] = path.values[i] - half_s2 * integral[i];
    return price;
}

PricePath exponential_price(const ContinuousPath& path) {
    PricePath price;
    price.kind = PriceKind::exponential;
    price.times = path.times;
    price.log_values = path.values;
    return price;
}

}  // namespace cir
