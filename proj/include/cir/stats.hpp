#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cir/params.hpp"

namespace cir {

// Outcome of a single statistical check: a statistic, the threshold it was
// held against, and the verdict. standard_error is filled in where one
// exists (moment tests) and left at zero for distribution-free tests.
struct StatReport {
    std::size_t sample_size = 0;
    double statistic = 0.0;
    double threshold = 0.0;
    double standard_error = 0.0;
    bool consistent = false;
};

// Dvoretzky-Kiefer-Wolfowitz band: with probability at least `confidence`
// the empirical CDF of n iid draws stays within eps of the truth,
//   eps = sqrt(log(2 / (1 - confidence)) / (2 n)).
double dkw_epsilon(std::size_t n, double confidence);

// CDF of scale * (noncentral chi-square). Poisson mixture of regularized
// incomplete gamma functions, accumulated from the modal Poisson term
// outward until the remaining Poisson mass drops below 1e-14. Throws
// SeriesNotConverged if the term budget is exhausted first.
double noncentral_chisq_cdf(const NoncentralChiSqSpec& spec, double x);

// One-sample Kolmogorov-Smirnov statistic against a continuous CDF, held
// against the DKW band at the given confidence. The sample is taken by
// value because it must be sorted anyway.
StatReport ks_test(std::vector<double> sample,
                   const std::function<double(double)>& cdf, double confidence);

// Two-sample KS. The threshold is the sum of two one-sample DKW bands at
// confidence 1 - (1-confidence)/2 each, a union bound on both empirical
// CDFs straying from the (shared) truth.
StatReport ks_two_sample(std::vector<double> a, std::vector<double> b,
                         double confidence);

double sample_mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);  // ddof = 1

// |mean - target| against k_se standard errors plus a deterministic
// allowance (for known discretization bias).
StatReport mean_consistency(std::span<const double> xs, double target, double k_se,
                            double allowance = 0.0);

// |mean(a) - mean(b)| against k_se combined standard errors plus allowance.
StatReport mean_difference_consistency(std::span<const double> a,
                                       std::span<const double> b, double k_se,
                                       double allowance = 0.0);

}  // namespace cir
