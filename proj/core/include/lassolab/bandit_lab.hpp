#pragma once

#include <utility>
#include <vector>

#include "lassolab/opt_lasso.hpp"
#include "lassolab/rng.hpp"
#include "lassolab/types.hpp"

namespace lassolab {

enum class BanditLambdaVariant { theory_bandit, sim_bandit };
enum class TieRule { lowest_index, random_tie };

enum class PolicyKind {
    random_policy,     // Stage 1 forever
    three_stage,       // random -> Lasso -> OPT-Lasso
    two_stage_opt,     // gamma2 := gamma1, OPT-Lasso only after exploration
    two_stage_lasso,   // gamma2 := T, Lasso only after exploration
    oracle             // argmax over the true parameters
};

struct BanditScenario {
    std::size_t K = 2;
    std::size_t s0 = 1;
    std::size_t d = 2;
    std::size_t T = 2;
    double sigma = 1.0;
    CovariateModel cov = CovariateModel::clipped(2, 1.0);
    std::size_t gamma1 = 1;   // end of Stage 1
    std::size_t gamma2 = 1;   // end of Stage 2
    std::size_t g1 = 1;       // Stage 2 refit cadence
    std::size_t g2 = 1;       // Stage 3 refit cadence
    double C0 = 2.0;
    double C0_hard = 0.6;
    BanditLambdaVariant lambda_variant = BanditLambdaVariant::sim_bandit;
    TieRule tie_rule = TieRule::lowest_index;
    std::size_t reps = 1;
    std::uint64_t base_seed = 0;
    double m_X = 1.0;  // theory_bandit covariate bound
    double L3 = 2.0;   // theory_bandit conditioning constant
    double solver_tol = 1e-10;
    std::size_t solver_max_iters = 10000;

    void validate() const;
};

/// Per-arm observations: the rounds where the arm was pulled, their rewards,
/// and the accumulated sufficient statistics of the arm's zero-padded design.
/// The partition invariant (every round in exactly one arm's list) is
/// asserted at every refit.
struct ArmDataset {
    std::vector<std::size_t> rounds;
    RealVector rewards;
    GramData stats;

    explicit ArmDataset(std::size_t d) : stats(d) {}
    std::size_t pull_count() const { return rounds.size(); }
};

struct RefitRecord {
    std::size_t round = 0;
    bool used_opt = false;  // OPT-Lasso (Stage 3) vs Lasso (Stage 2)
    std::vector<int> fp;    // per arm
    std::vector<int> fn;
    std::vector<std::uint8_t> fitted;  // 0 when the arm had no data and kept its estimate
};

struct BanditRunRecord {
    RealVector regret;               // per round, length T
    std::vector<int> arm;            // 1-based pulled arm per round
    std::vector<RefitRecord> refits;
    std::size_t stage1_end = 0;      // effective gamma1
    std::size_t stage2_end = 0;      // effective gamma2
};

/// max_k x' theta^(k) - x' theta^(a); always >= 0. Arms are 1-based.
double instantaneous_regret(const RealVector& x, const std::vector<SparseParam>& thetas,
                            std::size_t a);

/// argmax_k estimate_k' x (1-based); ties by lowest index or uniformly at
/// random (consuming the given stream).
std::size_t select_arm_greedy(const std::vector<RealVector>& estimates, const RealVector& x,
                              TieRule tie_rule, RngStream* tie_stream = nullptr);

/// (lambda, lambda_opt) for arm k at round t.
/// theory_bandit: lambda = 6 m_X sigma sqrt(log(dT)/t),   lambda_opt = 28 L3 lambda
/// sim_bandit:    lambda = C0 * p_hat * sqrt(log(d)/t),   lambda_opt = C0_hard*C0*sqrt(log(dt)/t)
std::pair<double, double> bandit_lambda(const BanditScenario& sc, std::size_t t, std::size_t k,
                                        double pull_fraction);

/// Runs one replication: Stage 1 pulls uniformly at random through gamma1,
/// Stage 2 plays greedily on Lasso estimates refit every g1 rounds, Stage 3
/// on OPT-Lasso estimates refit every g2 rounds; each refit at round t uses
/// that arm's rows with normalizer t. Arms with no data keep their previous
/// estimate, and an OPT refit whose hard threshold empties the support keeps
/// the Lasso-stage coefficients for arm selection.
///
/// theta_override (mainly for tests) replaces the K drawn arm parameters;
/// the theta channel of the stream is still consumed identically.
BanditRunRecord run_bandit_replication(const BanditScenario& sc, PolicyKind policy,
                                       RngStream stream,
                                       const std::vector<SparseParam>* theta_override = nullptr);

/// Sum of regret over the inclusive round window.
double cumulative_regret(const BanditRunRecord& rec, std::pair<std::size_t, std::size_t> window);

}  // namespace lassolab
