// Command-line driver: closed-form tables, law evaluation, path dumps, and
// the certification experiments, all emitting the common result-row schema.
//
// Exit codes: 0 when every decision row is consistent, 1 when any row is
// rejected, 2 on usage or configuration errors.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cir/errors.hpp"
#include "cir/experiments.hpp"
#include "cir/params.hpp"
#include "cir/prices.hpp"
#include "cir/results.hpp"
#include "cir/schemes.hpp"
#include "cir/stats.hpp"
#include "cir/truncated.hpp"

namespace {

struct Options {
    double b = 1.0;
    double sigma = 1.0;
    double x0 = 1.0;
    double horizon = 1.0;
    std::vector<double> ts;          // moments
    double t_single = 1.0;           // marginal
    std::vector<double> xs;          // marginal CDF arguments
    std::vector<double> qs;          // marginal quantile levels
    std::vector<double> eval_times;  // converge
    std::vector<long> n_ladder;
    std::vector<double> c_ladder;
    long n_single = 64;
    double c_single = 5.0;
    std::size_t paths = 10000;
    std::size_t scheme_paths = 1;
    long n_ref = 4096;
    std::size_t ref_paths = 2000;
    double alpha = 0.5;
    double beta = 2.0;
    double dt = 1.0 / 512.0;
    double max_time = 64.0;
    bool allow_negative = false;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    double confidence = 0.999;
    std::string out;
    std::string format = "csv";
};

void add_params(CLI::App* sub, Options& o) {
    sub->add_option("--b", o.b, "drift level and long-run mean b")
        ->capture_default_str();
    sub->add_option("--sigma", o.sigma, "volatility sigma")->capture_default_str();
    sub->add_option("--x0", o.x0, "initial state x0")->capture_default_str();
}

void add_output(CLI::App* sub, Options& o) {
    sub->add_option("--out", o.out, "write rows to this file as well");
    sub->add_option("--format", o.format, "file format for --out")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

void add_run_controls(CLI::App* sub, Options& o) {
    sub->add_option("--seed", o.seed, "master seed for all streams")
        ->envname("CIR_MASTER_SEED")
        ->capture_default_str();
    sub->add_option("--workers", o.workers, "worker threads")
        ->check(CLI::Range(1u, 256u))
        ->capture_default_str();
}

cir::ExperimentConfig experiment_config(const Options& o) {
    cir::ExperimentConfig cfg;
    if (o.sigma == 0.0) {
        // Degenerate deterministic diagnostic: allowed for the experiments
        // that can handle it, so validate the remaining fields only.
        cir::validate_params(o.b, 1.0, o.x0);
        cfg.params = cir::CirParams{o.b, 0.0, o.x0, true};
    } else {
        cfg.params = cir::validate_params(o.b, o.sigma, o.x0);
    }
    cfg.horizon = o.horizon;
    cfg.n_ladder = o.n_ladder;
    cfg.c_ladder = o.c_ladder;
    cfg.eval_times = o.eval_times;
    cfg.path_count = o.paths;
    cfg.master_seed = o.seed;
    cfg.confidence = o.confidence;
    cfg.workers = o.workers;
    return cfg;
}

std::string numbered_metric(const char* stem, double arg) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s(%.17g)", stem, arg);
    return buf;
}

std::vector<cir::ResultRow> run_moments(const Options& o) {
    const cir::CirParams p = cir::validate_params(o.b, o.sigma, o.x0);
    std::vector<double> ts = o.ts.empty() ? std::vector<double>{1.0} : o.ts;
    std::vector<cir::ResultRow> rows;
    for (double t : ts) {
        if (!(t >= 0.0)) throw cir::ConfigInvalid("moment times must be >= 0");
        rows.push_back({"moments", std::nullopt, std::nullopt, t, "mean",
                        cir::mean_at(p, t), std::nullopt, cir::Decision::info});
        rows.push_back({"moments", std::nullopt, std::nullopt, t, "second_moment",
                        cir::second_moment_at(p, t), std::nullopt,
                        cir::Decision::info});
        rows.push_back({"moments", std::nullopt, std::nullopt, t, "variance",
                        cir::variance_at(p, t), std::nullopt, cir::Decision::info});
    }
    return rows;
}

double law_quantile(const cir::NoncentralChiSqSpec& law, double q) {
    if (!(q > 0.0 && q < 1.0))
        throw cir::ConfigInvalid("quantile levels must lie strictly in (0, 1)");
    const double mean = law.scale * (law.df + law.noncentrality);
    const double sd =
        law.scale * std::sqrt(2.0 * law.df + 4.0 * law.noncentrality);
    double lo = 0.0;
    double hi = mean + 40.0 * sd;
    for (int i = 0; i < 200 && cir::noncentral_chisq_cdf(law, hi) < q; ++i)
        hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cir::noncentral_chisq_cdf(law, mid) < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<cir::ResultRow> run_marginal(const Options& o) {
    const cir::CirParams p = cir::validate_params(o.b, o.sigma, o.x0);
    const double t = o.t_single;
    const cir::NoncentralChiSqSpec law = cir::marginal_law(p, t);
    std::vector<cir::ResultRow> rows;
    auto info = [&](const std::string& metric, double value) {
        rows.push_back({"marginal", std::nullopt, std::nullopt, t, metric, value,
                        std::nullopt, cir::Decision::info});
    };
    info("df", law.df);
    info("noncentrality", law.noncentrality);
    info("scale", law.scale);
    info("mean", law.scale * (law.df + law.noncentrality));
    info("variance",
         law.scale * law.scale * (2.0 * law.df + 4.0 * law.noncentrality));
    for (double x : o.xs)
        info(numbered_metric("cdf", x), cir::noncentral_chisq_cdf(law, x));
    for (double q : o.qs) info(numbered_metric("quantile", q), law_quantile(law, q));
    return rows;
}

std::vector<cir::ResultRow> run_scheme(const Options& o, bool truncated) {
    const cir::CirParams p = cir::validate_params(o.b, o.sigma, o.x0);
    const cir::GridSpec grid = cir::make_grid(o.horizon, o.n_single);
    const cir::PositivityReport pos = cir::positivity_precondition(p, grid);
    const auto check = o.allow_negative ? cir::PositivityCheck::skip
                                        : cir::PositivityCheck::enforce;
    std::optional<double> c_cell;
    cir::TruncationLevel trunc{0.0};
    if (truncated) {
        trunc = cir::validate_truncation(p, o.c_single);
        c_cell = trunc.C;
    }

    std::vector<cir::ResultRow> rows;
    rows.push_back({"scheme", o.n_single, c_cell, std::nullopt, "discriminant",
                    pos.discriminant, 0.0, cir::Decision::info});
    rows.push_back({"scheme", o.n_single, c_cell, std::nullopt,
                    "positivity_guaranteed", pos.guaranteed ? 1.0 : 0.0,
                    std::nullopt, cir::Decision::info});

    double min_state = p.x0;
    for (std::size_t i = 0; i < o.scheme_paths; ++i) {
        cir::Rng rng(o.seed, i);
        const cir::NoiseSequence noise = cir::rademacher_noise(grid, rng);
        const cir::SchemePath path =
            truncated ? cir::truncated_scheme(p, trunc, noise, check)
                      : cir::additive_scheme(p, noise, check);
        const std::string metric = "x_path" + std::to_string(i);
        for (long k = 0; k <= grid.steps; ++k) {
            const double v = path.values[static_cast<std::size_t>(k)];
            min_state = std::min(min_state, v);
            rows.push_back({"scheme", o.n_single, c_cell, grid.time(k), metric, v,
                            std::nullopt, cir::Decision::info});
        }
    }
    rows.push_back({"scheme", o.n_single, c_cell, std::nullopt, "min_state",
                    min_state, std::nullopt, cir::Decision::info});
    return rows;
}

std::vector<cir::ResultRow> run_bounds(const Options& o) {
    const cir::CirParams p = cir::validate_params(o.b, o.sigma, o.x0);
    const cir::TruncationLevel trunc = cir::validate_truncation(p, o.c_single);
    const cir::GridSpec grid = cir::make_grid(o.horizon, o.n_single);
    const cir::TheoreticalBounds b = cir::theoretical_bounds(p, trunc, grid);
    std::vector<cir::ResultRow> rows;
    auto info = [&](const std::string& metric, double value) {
        rows.push_back({"bounds", o.n_single, trunc.C, std::nullopt, metric, value,
                        std::nullopt, cir::Decision::info});
    };
    info("gamma", b.gamma);
    info("c2", b.c2);
    info("increment_bound", b.increment_bound);
    info("disagreement_bound", b.disagreement_bound);
    info("drift_residual_bound", b.drift_residual_bound);
    info("quad_residual_bound", b.quad_residual_bound);
    info("centered_quad_bound", p.sigma * p.sigma * trunc.C * grid.dt());
    return rows;
}

void print_table(const std::vector<cir::ResultRow>& rows) {
    std::printf("%-10s %6s %10s %10s %-36s %14s %14s %s\n", "experiment", "n", "C",
                "t", "metric", "value", "bound", "decision");
    for (const cir::ResultRow& r : rows) {
        char n_buf[24] = "";
        char c_buf[24] = "";
        char t_buf[24] = "";
        char b_buf[24] = "";
        if (r.n) std::snprintf(n_buf, sizeof(n_buf), "%ld", *r.n);
        if (r.C) std::snprintf(c_buf, sizeof(c_buf), "%.6g", *r.C);
        if (r.t) std::snprintf(t_buf, sizeof(t_buf), "%.6g", *r.t);
        if (r.bound) std::snprintf(b_buf, sizeof(b_buf), "%.8g", *r.bound);
        std::printf("%-10s %6s %10s %10s %-36s %14.8g %14s %s\n",
                    r.experiment.c_str(), n_buf, c_buf, t_buf, r.metric.c_str(),
                    r.value, b_buf, cir::decision_name(r.decision).c_str());
    }
}

int finish(const Options& o, const std::vector<cir::ResultRow>& rows) {
    print_table(rows);
    if (!o.out.empty()) {
        const auto fmt = o.format == "json" ? cir::OutputFormat::json
                                            : cir::OutputFormat::csv;
        cir::write_results(rows, o.out, fmt);
    }
    return cir::any_rejected(rows) ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "cirsim: simulation and verification toolkit for the CIR square-root "
        "diffusion, its truncated variant, and their Bernoulli-driven schemes"};
    app.set_config("--config", "", "read options from a key=value file");
    app.require_subcommand(1);
    Options o;

    CLI::App* moments = app.add_subcommand("moments", "closed-form moment table");
    add_params(moments, o);
    moments->add_option("--t", o.ts, "evaluation times (repeatable)")
        ->delimiter(',');
    add_output(moments, o);

    CLI::App* marginal =
        app.add_subcommand("marginal", "exact marginal law: CDF and quantiles");
    add_params(marginal, o);
    marginal->add_option("--t", o.t_single, "evaluation time")
        ->capture_default_str();
    marginal->add_option("--x", o.xs, "CDF arguments (repeatable)")->delimiter(',');
    marginal->add_option("--q", o.qs, "quantile levels (repeatable)")
        ->delimiter(',');
    add_output(marginal, o);

    CLI::App* scheme =
        app.add_subcommand("scheme", "simulate discrete paths and dump states");
    add_params(scheme, o);
    scheme->add_option("--T", o.horizon, "time horizon")->capture_default_str();
    scheme->add_option("--n", o.n_single, "steps")->capture_default_str();
    auto* scheme_c = scheme->add_option("--C", o.c_single,
                                        "truncation level (omit for the plain scheme)");
    scheme->add_option("--paths", o.scheme_paths, "paths to dump")
        ->capture_default_str();
    scheme->add_flag("--allow-negative", o.allow_negative,
                     "run outside the positivity regime");
    add_run_controls(scheme, o);
    add_output(scheme, o);

    CLI::App* bounds =
        app.add_subcommand("bounds", "a-priori constants for the capped scheme");
    add_params(bounds, o);
    bounds->add_option("--T", o.horizon, "time horizon")->capture_default_str();
    bounds->add_option("--n", o.n_single, "steps")->capture_default_str();
    bounds->add_option("--C", o.c_single, "truncation level")
        ->capture_default_str();
    add_output(bounds, o);

    CLI::App* hitprob = app.add_subcommand(
        "hitprob", "scale-function exit probabilities vs Monte Carlo");
    add_params(hitprob, o);
    hitprob->add_option("--C", o.c_single, "truncation level")
        ->capture_default_str();
    hitprob->add_option("--alpha", o.alpha, "lower barrier")->capture_default_str();
    hitprob->add_option("--beta", o.beta, "upper barrier")->capture_default_str();
    hitprob->add_option("--dt", o.dt, "Euler step of the reference")
        ->capture_default_str();
    hitprob->add_option("--max-time", o.max_time, "give up on a path after this")
        ->capture_default_str();
    hitprob->add_option("--paths", o.paths, "Monte Carlo runs")
        ->capture_default_str();
    add_run_controls(hitprob, o);
    add_output(hitprob, o);

    CLI::App* converge = app.add_subcommand(
        "converge", "terminal-law convergence study over an n ladder");
    add_params(converge, o);
    converge->add_option("--T", o.horizon, "time horizon")->capture_default_str();
    converge->add_option("--n", o.n_ladder, "step-count ladder")->delimiter(',');
    converge->add_option("--eval-t", o.eval_times, "evaluation times (default T)")
        ->delimiter(',');
    converge->add_option("--paths", o.paths, "paths per cell")
        ->capture_default_str();
    converge->add_option("--confidence", o.confidence, "DKW confidence")
        ->capture_default_str();
    add_run_controls(converge, o);
    add_output(converge, o);

    CLI::App* sandwich = app.add_subcommand(
        "sandwich", "plain-vs-truncated disagreement over the (C, n) grid");
    add_params(sandwich, o);
    sandwich->add_option("--T", o.horizon, "time horizon")->capture_default_str();
    sandwich->add_option("--n", o.n_ladder, "step-count ladder")->delimiter(',');
    sandwich->add_option("--C", o.c_ladder, "truncation ladder")->delimiter(',');
    sandwich->add_option("--paths", o.paths, "paths per n")->capture_default_str();
    add_run_controls(sandwich, o);
    add_output(sandwich, o);

    CLI::App* price = app.add_subcommand(
        "price", "multiplicative price means vs the exact-path limit");
    add_params(price, o);
    price->add_option("--T", o.horizon, "time horizon")->capture_default_str();
    price->add_option("--n", o.n_ladder, "step-count ladder")->delimiter(',');
    price->add_option("--n-ref", o.n_ref, "reference grid size")
        ->capture_default_str();
    price->add_option("--ref-paths", o.ref_paths, "reference path count")
        ->capture_default_str();
    price->add_option("--paths", o.paths, "paths per n")->capture_default_str();
    add_run_controls(price, o);
    add_output(price, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::vector<cir::ResultRow> rows;
        if (app.got_subcommand(moments)) {
            rows = run_moments(o);
        } else if (app.got_subcommand(marginal)) {
            rows = run_marginal(o);
        } else if (app.got_subcommand(scheme)) {
            rows = run_scheme(o, scheme_c->count() > 0);
        } else if (app.got_subcommand(bounds)) {
            rows = run_bounds(o);
        } else if (app.got_subcommand(hitprob)) {
            Options ho = o;
            ho.c_ladder = {o.c_single};
            cir::HitProbSetup setup{o.alpha, o.beta, o.dt, o.max_time};
            rows = cir::hitting_experiment(experiment_config(ho), setup);
        } else if (app.got_subcommand(converge)) {
            Options co = o;
            if (co.n_ladder.empty()) co.n_ladder = {8, 32, 128, 512};
            rows = cir::convergence_experiment(experiment_config(co));
        } else if (app.got_subcommand(sandwich)) {
            Options so = o;
            if (so.n_ladder.empty()) so.n_ladder = {64, 256};
            if (so.c_ladder.empty()) so.c_ladder = {4.0, 8.0, 16.0, 32.0};
            rows = cir::truncation_sandwich(experiment_config(so));
        } else if (app.got_subcommand(price)) {
            Options po = o;
            if (po.n_ladder.empty()) po.n_ladder = {128, 512};
            rows = cir::price_experiment(experiment_config(po), o.n_ref,
                                         o.ref_paths);
        }
        return finish(o, rows);
    } catch (const cir::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
