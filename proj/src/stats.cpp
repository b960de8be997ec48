#include "cir/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

namespace cir {

double dkw_epsilon(std::size_t n, double confidence) {
    if (n == 0 || !(confidence > 0.0 && confidence < 1.0))
        throw ConfigInvalid("DKW band needs n >= 1 and confidence in (0,1)");
    const double delta = 1.0 - confidence;
    return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

double noncentral_chisq_cdf(const NoncentralChiSqSpec& spec, double x) {
    if (!(spec.df > 0.0) || !(spec.scale > 0.0) || spec.noncentrality < 0.0)
        throw ConfigInvalid("noncentral chi-square needs df > 0, scale > 0, lambda >= 0");
    if (std::isnan(x)) throw OutOfDomain("CDF evaluated at NaN");
    if (x <= 0.0) return 0.0;

    const double a0 = spec.df / 2.0;
    const double y = x / spec.scale / 2.0;  // gamma_p argument
    const double hl = spec.noncentrality / 2.0;
    if (hl == 0.0) return boost::math::gamma_p(a0, y);

    // Poisson(hl) weights w_j, taken from the mode outward so large
    // noncentralities neither underflow nor need millions of terms. The set
    // of retained j does not depend on x, which keeps the truncated CDF
    // monotone in x.
    const double log_hl = std::log(hl);
    auto log_weight = [&](double j) {
        return j * log_hl - hl - std::lgamma(j + 1.0);
    };

    double total = 0.0, weight_seen = 0.0;
    double j_lo = std::floor(hl);  // descending frontier, starts at the mode
    double j_hi = j_lo + 1.0;      // ascending frontier
    bool lo_active = true, hi_active = true;
    long terms = 0;
    const long budget = 1000000;
    while (lo_active || hi_active) {
        if (lo_active) {
            if (j_lo < -0.5) {
                lo_active = false;
            } else {
                const double w = std::exp(log_weight(j_lo));
                weight_seen += w;
                if (w > 0.0) total += w * boost::math::gamma_p(a0 + j_lo, y);
                if (w < 1e-20) lo_active = false;  // past any relevant mass
                j_lo -= 1.0;
            }
        }
        if (hi_active) {
            const double w = std::exp(log_weight(j_hi));
            weight_seen += w;
            if (w > 0.0) total += w * boost::math::gamma_p(a0 + j_hi, y);
            if (w < 1e-20) hi_active = false;
            j_hi += 1.0;
        }
        if (1.0 - weight_seen < 1e-14) break;
        terms += 2;
        if (terms > budget)
            throw SeriesNotConverged("noncentral chi-square CDF: Poisson tail still " +
                                     std::to_string(1.0 - weight_seen) +
                                     " after term budget");
    }
    return std::clamp(total, 0.0, 1.0);
}

StatReport ks_test(std::vector<double> sample,
                   const std::function<double(double)>& cdf, double confidence) {
    if (sample.empty()) throw ConfigInvalid("KS test needs a nonempty sample");
    for (double v : sample)
        if (std::isnan(v)) throw ConfigInvalid("KS sample contains NaN");
    std::sort(sample.begin(), sample.end());

    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        const double hi = static_cast<double>(i + 1) / n - f;  // after the jump
        const double lo = f - static_cast<double>(i) / n;      // before the jump
        d = std::max({d, hi, lo});
    }

    StatReport rep;
    rep.sample_size = sample.size();
    rep.statistic = d;
    rep.threshold = dkw_epsilon(sample.size(), confidence);
    rep.consistent = d <= rep.threshold;
    return rep;
}

StatReport ks_two_sample(std::vector<double> a, std::vector<double> b,
                         double confidence) {
    if (a.empty() || b.empty()) throw ConfigInvalid("KS test needs nonempty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na -
                                  static_cast<double>(j) / nb));
    }

    const double split = 1.0 - (1.0 - confidence) / 2.0;
    StatReport rep;
    rep.sample_size = a.size() + b.size();
    rep.statistic = d;
    rep.threshold = dkw_epsilon(a.size(), split) + dkw_epsilon(b.size(), split);
    rep.consistent = d <= rep.threshold;
    return rep;
}

double sample_mean(std::span<const double> xs) {
    if (xs.empty()) throw ConfigInvalid("mean of empty sample");
    double s = 0.0;
    for (double v : xs) s += v;
    return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) throw ConfigInvalid("variance needs at least two points");
    const double m = sample_mean(xs);
    double s = 0.0;
    for (double v : xs) s += (v - m) * (v - m);
    return s / static_cast<double>(xs.size() - 1);
}

StatReport mean_consistency(std::span<const double> xs, double target, double k_se,
                            double allowance) {
    StatReport rep;
    rep.sample_size = xs.size();
    rep.standard_error = std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
    rep.statistic = std::fabs(sample_mean(xs) - target);
    rep.threshold = k_se * rep.standard_error + allowance;
    rep.consistent = rep.statistic <= rep.threshold;
    return rep;
}

StatReport mean_difference_consistency(std::span<const double> a,
                                       std::span<const double> b, double k_se,
                                       double allowance) {
    StatReport rep;
    rep.sample_size = a.size() + b.size();
    const double sea = sample_variance(a) / static_cast<double>(a.size());
    const double seb = sample_variance(b) / static_cast<double>(b.size());
    rep.standard_error = std::sqrt(sea + seb);
    rep.statistic = std::fabs(sample_mean(a) - sample_mean(b));
    rep.threshold = k_se * rep.standard_error + allowance;
    rep.consistent = rep.statistic <= rep.threshold;
    return rep;
}

}  // namespace cir
