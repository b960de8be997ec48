#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cir/grid.hpp"
#include "cir/params.hpp"
#include "cir/truncated.hpp"

namespace cir {

// Verdict attached to a result row. `info` marks diagnostic rows that carry
// no pass/fail meaning (raw statistics, tables of constants); only
// `rejected` rows should fail a run.
enum class Decision { consistent, rejected, info };

std::string decision_name(Decision d);

// One row of an experiment report. Cell labels that do not apply to a row
// (a ladder summary has no single n, a formula row has no C) stay empty.
// For decision rows the convention is: consistent iff value <= bound.
struct ResultRow {
    std::string experiment;
    std::optional<long> n;
    std::optional<double> C;
    std::optional<double> t;
    std::string metric;
    double value = 0.0;
    std::optional<double> bound;
    Decision decision = Decision::info;
};

bool any_rejected(std::span<const ResultRow> rows);

struct ExperimentConfig {
    CirParams params{};
    double horizon = 1.0;
    std::vector<long> n_ladder;
    std::vector<double> c_ladder;
    std::vector<double> eval_times;  // empty means {horizon}
    std::size_t path_count = 1000;
    std::uint64_t master_seed = 0;
    double confidence = 0.999;
    unsigned workers = 1;
};

// Rejects settings that violate the preconditions of the runs downstream:
// n <= 2T when positivity is to be enforced, C <= max(b, 1), path counts
// too small to say anything, malformed confidence levels.
void validate_config(const ExperimentConfig& cfg, bool positivity_mode = true);

// Discrete-time moments of the additive recursion after m steps of size
// T/n, from the exact one-step recursions for E X and E X^2. Used to turn
// prelimit-vs-limit moment gaps into explicit allowances.
struct DiscreteMoments {
    double mean = 0.0;
    double second = 0.0;
};

DiscreteMoments discrete_scheme_moments(const CirParams& p, const GridSpec& grid,
                                        long steps_taken);

// Terminal-law study over the n-ladder: for each n and evaluation time,
// a KS statistic against the exact marginal CDF (diagnostic; the prelimit
// law genuinely differs at small n) and moment checks with explicit
// discretization allowances. One summary row per evaluation time counts
// non-monotone steps of the KS statistic along the ladder (at most one is
// accepted as Monte Carlo noise).
std::vector<ResultRow> convergence_experiment(const ExperimentConfig& cfg);

// Disagreement study over the (C, n) product: frequency of the plain and
// truncated paths differing anywhere on the grid, held against the a-priori
// disagreement bound, plus an exact monotonicity check in C (the
// disagreement event is nested as C grows since both schemes share noise).
std::vector<ResultRow> truncation_sandwich(const ExperimentConfig& cfg);

// Multiplicative study: terminal log-price means of the discrete product
// against the limit price evaluated on exact paths at a fine reference
// grid, and of the corrected product against the closed-form mean of X_T.
std::vector<ResultRow> price_experiment(const ExperimentConfig& cfg, long n_ref,
                                        std::size_t ref_paths);

struct HitProbSetup {
    double alpha = 0.5;
    double beta = 2.0;
    double dt = 1.0 / 512.0;
    double max_time = 64.0;
};

// Exit-split probabilities from the scale function against Monte Carlo
// first-exit frequencies of the Euler reference, at 3 standard errors.
std::vector<ResultRow> hitting_experiment(const ExperimentConfig& cfg,
                                          const HitProbSetup& setup);

}  // namespace cir
