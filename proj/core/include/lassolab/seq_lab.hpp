#pragma once

#include <optional>
#include <utility>

#include "lassolab/opt_lasso.hpp"
#include "lassolab/rng.hpp"
#include "lassolab/types.hpp"

namespace lassolab {

enum class SeqEstimator { lasso, opt_lasso, oracle_ls };

/// One sequential-estimation experiment: a single sparse theta, i.i.d. rounds
/// (X_t, Y_t), the chosen estimator refit on all data up to t.
struct SequentialScenario {
    std::size_t s0 = 1;
    std::size_t d = 2;
    std::size_t T = 2;
    double sigma = 1.0;
    CovariateModel cov = CovariateModel::identity(2);
    SeqEstimator estimator = SeqEstimator::opt_lasso;
    double C0 = 0.8;
    double C0_hard = 0.6;
    ScheduleVariant schedule_variant = ScheduleVariant::sim_seq;
    std::optional<double> cap_xi;            // cap on per-round squared error; absent = uncapped
    std::size_t reps = 1;
    std::uint64_t base_seed = 0;
    std::pair<std::size_t, std::size_t> error_window{1, 2};  // inclusive rounds
    std::size_t refit_every = 1;
    double solver_tol = 1e-10;
    std::size_t solver_max_iters = 10000;

    void validate() const;
};

struct SeqRunRecord {
    RealVector squared_error;       // per round, length T
    std::vector<int> fp;            // selected but truly zero
    std::vector<int> fn;            // truly nonzero but unselected
    std::vector<int> support_size;  // |estimated support|; = fp + |S| - fn
    std::vector<std::uint8_t> fit_converged;
    SparseParam theta_true;
};

SeqRunRecord run_sequential_replication(const SequentialScenario& sc, RngStream stream);

/// Sum over the inclusive window of min(squared_error_t, cap).
double cumulative_error(const SeqRunRecord& rec, std::pair<std::size_t, std::size_t> window,
                        std::optional<double> cap = std::nullopt);

/// Rounds {every, 2*every, ...} within [1, T].
std::vector<std::size_t> refit_cadence_plan(std::size_t T, std::size_t every);

struct Aggregate {
    double mean = 0.0;
    double sem = 0.0;
    double sd = 0.0;
};

struct TooFewReplications : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sample mean, sd (n-1 denominator) and sem = sd / sqrt(reps); reps >= 2.
Aggregate aggregate_replications(const RealVector& values);

}  // namespace lassolab
