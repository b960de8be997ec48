#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cir/schemes.hpp"
#include "cir/stats.hpp"

using Catch::Approx;

namespace {
const cir::CirParams kStd = cir::validate_params(1.0, 1.0, 1.0);
const cir::TruncationLevel kC5 = cir::validate_truncation(kStd, 5.0);
const double kInf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("driver noise takes values +-sqrt(T/n) only", "[schemes]") {
    const cir::GridSpec grid = cir::make_grid(2.0, 32);
    cir::Rng rng(3, 0);
    const cir::NoiseSequence noise = cir::rademacher_noise(grid, rng);
    REQUIRE(noise.q.size() == 32);
    const double step = std::sqrt(grid.dt());
    for (double q : noise.q) REQUIRE(std::fabs(q) == step);
}

TEST_CASE("noise from explicit signs validates its input", "[schemes]") {
    const cir::GridSpec grid = cir::make_grid(1.0, 4);
    const cir::NoiseSequence noise =
        cir::noise_from_signs(grid, {+1, -1, -1, +1});
    REQUIRE(noise.q[0] == 0.5);
    REQUIRE(noise.q[1] == -0.5);
    REQUIRE_THROWS_AS(cir::noise_from_signs(grid, {+1, -1}), cir::GridMismatch);
    REQUIRE_THROWS_AS(cir::noise_from_signs(grid, {+1, -1, 2, +1}),
                      cir::ConfigInvalid);
}

TEST_CASE("one additive step evaluates by hand", "[schemes]") {
    // x0 = b kills the drift, so X_1 = 1 + 1 * 0.5 * sqrt(1) = 1.5
    const cir::GridSpec grid = cir::make_grid(1.0, 4);
    const cir::SchemePath path = cir::additive_scheme(
        kStd, cir::noise_from_signs(grid, {+1, +1, -1, +1}));
    REQUIRE(path.values[0] == 1.0);
    REQUIRE(path.values[1] == 1.5);
    REQUIRE(path.increments[0] == 0.5);
    REQUIRE(path.values[2] ==
            Approx(1.5 + (1.0 - 1.5) * 0.25 + 0.5 * std::sqrt(1.5))
                .epsilon(1e-15));
}

TEST_CASE("one truncated step caps both drift and root", "[schemes]") {
    const cir::CirParams p = cir::validate_params(1.0, 1.0, 6.0);
    const cir::TruncationLevel c3 = cir::validate_truncation(p, 3.0);
    const cir::GridSpec grid = cir::make_grid(1.0, 4);
    const cir::NoiseSequence noise = cir::noise_from_signs(grid, {+1, +1, +1, +1});

    const cir::SchemePath capped = cir::truncated_scheme(p, c3, noise);
    REQUIRE(capped.values[1] ==
            Approx(6.0 + (1.0 - 3.0) * 0.25 + 0.5 * std::sqrt(3.0))
                .epsilon(1e-15));

    const cir::SchemePath plain = cir::additive_scheme(p, noise);
    const cir::AgreementReport rep = cir::agreement_check(plain, capped);
    REQUIRE_FALSE(rep.agree);
    REQUIRE(rep.first_divergence == 1);
}

TEST_CASE("positivity precondition evaluates the discriminant", "[schemes]") {
    // one representable step below sqrt(2), so sigma^2 <= 2b holds in doubles
    const cir::CirParams feller =
        cir::validate_params(1.0, std::nextafter(std::sqrt(2.0), 0.0), 1.0);
    const cir::PositivityReport rep =
        cir::positivity_precondition(feller, cir::make_grid(1.0, 4));
    REQUIRE(rep.feller_ok);
    REQUIRE(rep.steps_ok);
    REQUIRE(rep.discriminant == Approx(-0.25).epsilon(1e-14));
    REQUIRE(rep.guaranteed);

    // n = 2T fails the step condition
    REQUIRE_FALSE(
        cir::positivity_precondition(feller, cir::make_grid(1.0, 2)).guaranteed);
    // sigma^2 > 2b fails the Feller condition
    const cir::CirParams loud = cir::validate_params(1.0, 1.6, 1.0);
    REQUIRE_FALSE(
        cir::positivity_precondition(loud, cir::make_grid(1.0, 64)).guaranteed);
}

TEST_CASE("enforced runs outside the guarantee are refused", "[schemes]") {
    const cir::GridSpec grid = cir::make_grid(1.0, 2);
    cir::Rng rng(1, 0);
    const cir::NoiseSequence noise = cir::rademacher_noise(grid, rng);
    REQUIRE_THROWS_AS(cir::additive_scheme(kStd, noise),
                      cir::PositivityNotGuaranteed);
    REQUIRE_THROWS_AS(cir::truncated_scheme(kStd, kC5, noise),
                      cir::PositivityNotGuaranteed);
}

TEST_CASE("unchecked mode reports the step that went negative", "[schemes]") {
    const cir::CirParams p = cir::validate_params(0.1, 5.0, 0.01);
    const cir::GridSpec grid = cir::make_grid(1.0, 4);
    const cir::NoiseSequence noise = cir::noise_from_signs(grid, {-1, -1, -1, -1});
    try {
        cir::additive_scheme(p, noise, cir::PositivityCheck::skip);
        FAIL("expected NegativeStateEncountered");
    } catch (const cir::NegativeStateEncountered& e) {
        REQUIRE(e.step == 1);
    }

    // a negative terminal state is representable: nothing left to take a
    // root of afterwards
    const cir::GridSpec one = cir::make_grid(1.0, 1);
    const cir::SchemePath path = cir::additive_scheme(
        p, cir::noise_from_signs(one, {-1}), cir::PositivityCheck::skip);
    REQUIRE(path.values[1] < 0.0);
}

TEST_CASE("positivity holds throughout the guaranteed regime", "[schemes]") {
    const cir::GridSpec grid = cir::make_grid(1.0, 64);
    for (std::uint64_t s = 0; s < 500; ++s) {
        cir::Rng rng(29, s);
        const cir::NoiseSequence noise = cir::rademacher_noise(grid, rng);
        const cir::SchemePath plain = cir::additive_scheme(kStd, noise);
        const cir::SchemePath capped = cir::truncated_scheme(kStd, kC5, noise);
        REQUIRE(*std::min_element(plain.values.begin(), plain.values.end()) > 0.0);
        REQUIRE(*std::min_element(capped.values.begin(), capped.values.end()) >
                0.0);
    }
}

TEST_CASE("infinite cap reproduces the additive scheme bit for bit",
          "[schemes]") {
    const cir::GridSpec grid = cir::make_grid(1.0, 64);
    const cir::TruncationLevel none{kInf};
    for (std::uint64_t s = 0; s < 100; ++s) {
        cir::Rng rng(31, s);
        const cir::NoiseSequence noise = cir::rademacher_noise(grid, rng);
        const cir::SchemePath plain = cir::additive_scheme(kStd, noise);
        const cir::SchemePath sentinel = cir::truncated_scheme(kStd, none, noise);
        REQUIRE(plain.values == sentinel.values);
        REQUIRE(plain.increments == sentinel.increments);
        REQUIRE_FALSE(sentinel.truncated());
    }
}

TEST_CASE("sigma = 0 reduces to the deterministic recursion", "[schemes]") {
    const cir::CirParams det{2.0, 0.0, 0.5, true};
    const cir::GridSpec grid = cir::make_grid(1.0, 16);
    cir::Rng rng(5, 0);
    const cir::SchemePath path =
        cir::additive_scheme(det, cir::rademacher_noise(grid, rng));
    double x = 0.5;
    for (long k = 1; k <= 16; ++k) {
        x = x + (2.0 - x) * grid.dt();
        REQUIRE(path.values[static_cast<std::size_t>(k)] == Approx(x).epsilon(1e-15));
    }
}

TEST_CASE("a-priori constants match reference values", "[schemes]") {
    const cir::GridSpec grid = cir::make_grid(1.0, 100);
    const cir::TheoreticalBounds b = cir::theoretical_bounds(kStd, kC5, grid);
    REQUIRE(b.gamma == Approx(4.4037008503093262).epsilon(1e-14));
    REQUIRE(b.c2 == Approx(6.0 + std::sqrt(5.0)).epsilon(1e-15));
    REQUIRE(b.increment_bound == Approx(0.28360679774997897).epsilon(1e-14));
    REQUIRE(b.disagreement_bound == Approx(1.7291842720989844).epsilon(1e-14));
    REQUIRE(b.drift_residual_bound == Approx(0.06).epsilon(1e-15));
    REQUIRE(b.quad_residual_bound == Approx(0.41).epsilon(1e-14));

    // gamma never undercuts the start
    const cir::CirParams high = cir::validate_params(1.0, 1.0, 10.0);
    REQUIRE(cir::theoretical_bounds(high, kC5, grid).gamma == 10.0);
}

TEST_CASE("increments obey the deterministic bound pathwise", "[schemes]") {
    const cir::GridSpec grid = cir::make_grid(1.0, 64);
    const double bound = cir::theoretical_bounds(kStd, kC5, grid).increment_bound;
    for (std::uint64_t s = 0; s < 200; ++s) {
        cir::Rng rng(37, s);
        const cir::SchemePath path =
            cir::truncated_scheme(kStd, kC5, cir::rademacher_noise(grid, rng));
        double worst = 0.0;
        for (double q : path.increments) worst = std::max(worst, std::fabs(q));
        REQUIRE(worst <= bound);
    }
}

TEST_CASE("averaging one step over both signs recovers the conditional moments",
          "[schemes]") {
    // two-point exact check: with q = +-sqrt(h), mean and second moment of
    // X_1 must equal the one-step formulas with no statistical error
    const cir::GridSpec grid = cir::make_grid(1.0, 8);
    const double h = grid.dt();
    const cir::CirParams p = cir::validate_params(1.3, 0.9, 0.7);
    const double up =
        cir::additive_scheme(p, cir::noise_from_signs(grid, {+1, +1, +1, +1, +1,
                                                             +1, +1, +1}))
            .values[1];
    const double dn =
        cir::additive_scheme(p, cir::noise_from_signs(grid, {-1, +1, +1, +1, +1,
                                                             +1, +1, +1}))
            .values[1];
    const double a = 0.7 * (1.0 - h) + 1.3 * h;
    REQUIRE(0.5 * (up + dn) == Approx(a).epsilon(5e-15));
    REQUIRE(0.5 * (up * up + dn * dn) ==
            Approx(a * a + 0.9 * 0.9 * h * 0.7).epsilon(1e-14));
}

TEST_CASE("sample moments track the exact discrete recursions", "[schemes]") {
    const cir::GridSpec grid = cir::make_grid(1.0, 32);
    const std::size_t n_paths = 4000;
    std::vector<double> terminal(n_paths);
    for (std::uint64_t s = 0; s < n_paths; ++s) {
        cir::Rng rng(41, s);
        terminal[s] =
            cir::additive_scheme(kStd, cir::rademacher_noise(grid, rng))
                .values.back();
    }
    // exact discrete targets via the one-step recursions
    double m1 = 1.0, m2 = 1.0;
    const double h = grid.dt();
    for (int i = 0; i < 32; ++i) {
        m2 = h * h + (h + 2.0 * h * (1.0 - h)) * m1 + (1.0 - h) * (1.0 - h) * m2;
        m1 = (1.0 - h) * m1 + h;
    }
    REQUIRE(cir::mean_consistency(terminal, m1, 4.0).consistent);
    std::vector<double> squares(n_paths);
    std::transform(terminal.begin(), terminal.end(), squares.begin(),
                   [](double x) { return x * x; });
    REQUIRE(cir::mean_consistency(squares, m2, 4.0).consistent);
}

TEST_CASE("per-step means stay under gamma", "[schemes]") {
    const cir::GridSpec grid = cir::make_grid(1.0, 64);
    const double gamma = cir::theoretical_bounds(kStd, kC5, grid).gamma;
    std::vector<double> step_sums(65, 0.0);
    const std::size_t n_paths = 2000;
    for (std::uint64_t s = 0; s < n_paths; ++s) {
        cir::Rng rng(43, s);
        const cir::SchemePath path =
            cir::truncated_scheme(kStd, kC5, cir::rademacher_noise(grid, rng));
        for (std::size_t k = 0; k < path.values.size(); ++k)
            step_sums[k] += path.values[k];
    }
    for (double sum : step_sums)
        REQUIRE(sum / static_cast<double>(n_paths) <= gamma);
}

TEST_CASE("step evaluation floors onto the grid", "[schemes]") {
    const cir::GridSpec grid = cir::make_grid(1.0, 4);
    const cir::SchemePath path = cir::additive_scheme(
        kStd, cir::noise_from_signs(grid, {+1, -1, +1, -1}));
    REQUIRE(cir::step_eval(path, 0.0) == path.values[0]);
    REQUIRE(cir::step_eval(path, 0.2) == path.values[0]);
    REQUIRE(cir::step_eval(path, 0.25) == path.values[1]);
    REQUIRE(cir::step_eval(path, 0.7) == path.values[2]);
    REQUIRE(cir::step_eval(path, 1.0) == path.values[4]);
    REQUIRE_THROWS_AS(cir::step_eval(path, 1.5), cir::OutOfDomain);

    const cir::StepPath step{path};
    REQUIRE(step.at(0.6) == cir::step_eval(path, 0.6));
}
