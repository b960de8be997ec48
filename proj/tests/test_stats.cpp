#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "cir/rng.hpp"
#include "cir/stats.hpp"

using Catch::Approx;

namespace {
const cir::CirParams kStd = cir::validate_params(1.0, 1.0, 1.0);
}

TEST_CASE("DKW band widths match the closed formula", "[stats]") {
    REQUIRE(cir::dkw_epsilon(100000, 0.999) ==
            Approx(0.0061647799877781861).epsilon(1e-14));
    REQUIRE(cir::dkw_epsilon(10000, 0.999) ==
            Approx(0.019494746035204052).epsilon(1e-14));
    REQUIRE_THROWS_AS(cir::dkw_epsilon(0, 0.999), cir::ConfigInvalid);
    REQUIRE_THROWS_AS(cir::dkw_epsilon(100, 1.0), cir::ConfigInvalid);
}

TEST_CASE("marginal CDF reproduces reference values", "[stats]") {
    const cir::NoncentralChiSqSpec law = cir::marginal_law(kStd, 1.0);
    const struct {
        double x, cdf;
    } table[] = {
        {0.25, 0.0774247454578983110}, {0.5, 0.2417200138626537558},
        {1.0, 0.5824506858395473316},  {1.5, 0.8054644630225684842},
        {2.5, 0.9682775970353957313},  {4.0, 0.9986013535961229302},
    };
    for (const auto& row : table)
        REQUIRE(cir::noncentral_chisq_cdf(law, row.x) ==
                Approx(row.cdf).margin(1e-10));
    REQUIRE(cir::noncentral_chisq_cdf(law, 0.0) == 0.0);
    REQUIRE(cir::noncentral_chisq_cdf(law, -3.0) == 0.0);
}

TEST_CASE("central case with two degrees of freedom is exponential", "[stats]") {
    const cir::NoncentralChiSqSpec expo{2.0, 0.0, 1.0};
    for (double x : {0.1, 0.5, 1.0, 3.0, 10.0})
        REQUIRE(cir::noncentral_chisq_cdf(expo, x) ==
                Approx(1.0 - std::exp(-x / 2.0)).margin(1e-12));
}

TEST_CASE("CDF agrees with an independent implementation", "[stats]") {
    // same distribution through boost, including a large noncentrality that
    // exercises the mode-outward accumulation
    const cir::NoncentralChiSqSpec specs[] = {
        {4.0, 2.3279068274773057, 0.15803013970713942},
        {3.5, 500.0, 0.7},
        {1.2, 0.05, 2.0},
    };
    for (const auto& spec : specs) {
        const boost::math::non_central_chi_squared dist(spec.df,
                                                        spec.noncentrality);
        const double mean = spec.scale * (spec.df + spec.noncentrality);
        for (double frac : {0.25, 0.5, 1.0, 1.5, 2.5}) {
            const double x = mean * frac;
            const double ours = cir::noncentral_chisq_cdf(spec, x);
            const double theirs = boost::math::cdf(dist, x / spec.scale);
            REQUIRE(ours == Approx(theirs).margin(1e-10));
        }
    }

    // central, non-integer df reduces to a regularized incomplete gamma
    const cir::NoncentralChiSqSpec central{3.7, 0.0, 0.9};
    for (double x : {0.5, 2.0, 6.0})
        REQUIRE(cir::noncentral_chisq_cdf(central, x) ==
                Approx(boost::math::gamma_p(3.7 / 2.0, x / 0.9 / 2.0))
                    .margin(1e-13));
}

TEST_CASE("CDF is monotone and saturates in the far tail", "[stats]") {
    const cir::NoncentralChiSqSpec law = cir::marginal_law(kStd, 1.0);
    double prev = 0.0;
    for (int i = 0; i <= 80; ++i) {
        const double cur = cir::noncentral_chisq_cdf(law, 0.1 * i);
        REQUIRE(cur >= prev);
        prev = cur;
    }
    const double mean = cir::mean_at(kStd, 1.0);
    const double sd = std::sqrt(cir::variance_at(kStd, 1.0));
    REQUIRE(cir::noncentral_chisq_cdf(law, mean + 20.0 * sd) >= 1.0 - 1e-8);
}

TEST_CASE("one-point KS statistic is exact", "[stats]") {
    const auto identity = [](double x) { return std::clamp(x, 0.0, 1.0); };
    const cir::StatReport rep = cir::ks_test({0.5}, identity, 0.999);
    REQUIRE(rep.statistic == 0.5);
    REQUIRE(rep.threshold == std::sqrt(std::log(2.0 / 0.001) / 2.0));
    REQUIRE(rep.consistent);

    REQUIRE_THROWS_AS(cir::ks_test({}, identity, 0.999), cir::ConfigInvalid);
    REQUIRE_THROWS_AS(
        cir::ks_test({0.3, std::nan("")}, identity, 0.999), cir::ConfigInvalid);
}

TEST_CASE("KS bands hold their confidence on uniform draws", "[stats]") {
    const auto identity = [](double x) { return std::clamp(x, 0.0, 1.0); };
    int consistent = 0;
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
        cir::Rng rng(131, rep);
        std::vector<double> u(2000);
        for (auto& v : u) v = rng.u01();
        if (cir::ks_test(u, identity, 0.999).consistent) ++consistent;
    }
    REQUIRE(consistent >= 98);
}

TEST_CASE("KS test detects a shifted location", "[stats]") {
    const auto std_normal_cdf = [](double x) {
        return 0.5 * std::erfc(-x / std::sqrt(2.0));
    };
    cir::Rng rng(133, 0);
    std::vector<double> shifted(2000);
    for (auto& v : shifted) v = cir::sample_normal(rng) + 0.3;
    const cir::StatReport rep = cir::ks_test(shifted, std_normal_cdf, 0.999);
    REQUIRE_FALSE(rep.consistent);
    REQUIRE(rep.statistic > rep.threshold);
}

TEST_CASE("two-sample KS accepts a shared law and flags a shift", "[stats]") {
    cir::Rng ra(135, 0), rb(135, 1);
    std::vector<double> a(3000), b(3000);
    for (auto& v : a) v = cir::sample_normal(ra);
    for (auto& v : b) v = cir::sample_normal(rb);
    const cir::StatReport same = cir::ks_two_sample(a, b, 0.999);
    REQUIRE(same.consistent);
    const double split = 1.0 - 0.001 / 2.0;
    REQUIRE(same.threshold ==
            Approx(cir::dkw_epsilon(3000, split) + cir::dkw_epsilon(3000, split))
                .epsilon(1e-14));

    for (auto& v : b) v += 0.3;
    REQUIRE_FALSE(cir::ks_two_sample(a, b, 0.999).consistent);
}

TEST_CASE("sample summaries on a tiny vector", "[stats]") {
    const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    REQUIRE(cir::sample_mean(xs) == 2.5);
    REQUIRE(cir::sample_variance(xs) == Approx(5.0 / 3.0).epsilon(1e-15));
    REQUIRE_THROWS_AS(cir::sample_mean(std::vector<double>{}),
                      cir::ConfigInvalid);
    REQUIRE_THROWS_AS(cir::sample_variance(std::vector<double>{1.0}),
                      cir::ConfigInvalid);
}

TEST_CASE("mean consistency is sharp on constant samples", "[stats]") {
    const std::vector<double> flat(16, 1.0);
    const cir::StatReport hit = cir::mean_consistency(flat, 1.0, 4.0);
    REQUIRE(hit.statistic == 0.0);
    REQUIRE(hit.threshold == 0.0);
    REQUIRE(hit.consistent);

    const cir::StatReport miss = cir::mean_consistency(flat, 1.5, 4.0);
    REQUIRE_FALSE(miss.consistent);
    REQUIRE(cir::mean_consistency(flat, 1.5, 4.0, 0.5).consistent);
}

TEST_CASE("mean difference weighs both standard errors", "[stats]") {
    cir::Rng ra(137, 0), rb(137, 1);
    std::vector<double> a(4000), b(4000);
    for (auto& v : a) v = cir::sample_normal(ra);
    for (auto& v : b) v = cir::sample_normal(rb);
    REQUIRE(cir::mean_difference_consistency(a, b, 4.0).consistent);
    for (auto& v : b) v += 1.0;
    REQUIRE_FALSE(cir::mean_difference_consistency(a, b, 4.0).consistent);
}
