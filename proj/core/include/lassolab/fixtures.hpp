#pragma once

#include <span>

#include "lassolab/linalg.hpp"
#include "lassolab/rng.hpp"
#include "lassolab/types.hpp"

namespace lassolab {

struct OutOfRegime : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PackingFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// ((s-1)/2) * ln((d-s) / ((s-1)/2)); requires 3 <= s <= (d+2)/3.
double l_ds(std::size_t d, std::size_t s);

/// Family of s-sparse vectors in R^d with first coordinate r, remaining
/// support of size s-1 carrying values +-sqrt(2/(s-1)) * delta. Every member
/// has squared norm r^2 + 2 delta^2, pairwise squared distances lie in
/// [delta^2, 8 delta^2], and log M >= l_ds(d, s).
struct PackingSet {
    std::vector<SparseParam> vectors;
    std::size_t d = 0;
    std::size_t s = 0;
    double r = 0.0;
    double delta = 0.0;

    std::size_t size() const { return vectors.size(); }
};

/// Randomized greedy construction: sign patterns on d-1 coordinates are
/// sampled and kept when their Hamming distance to every accepted pattern is
/// at least ceil((s-1)/2). All invariants are verified exhaustively before
/// returning; PackingFailed after max_attempts candidates.
PackingSet build_packing_set(std::size_t d, std::size_t s, double r, double delta,
                             RngStream& stream, std::size_t max_attempts = 10'000'000);

/// Draw from the prior supported on the first s coordinates: direction
/// uniform on the unit sphere S^{s-1}, radius from the density
/// 4 r^{-1} sin^2(2 pi tau / r) on [r/2, r] by rejection.
SparseParam sample_omega1(std::size_t d, std::size_t s, double r, RngStream& stream);

/// Sampled upper estimate of the restricted eigenvalue constant: minimum of
/// ||X v||_2^2 / (n ||v||_2^2) over n_dirs random cone directions (random
/// s-subset J, Gaussian v_J, off-support mass scaled to a uniform fraction of
/// kappa ||v_J||_1). extra_dirs are evaluated alongside the sampled ones.
/// A diagnostic, not a certificate: the true constant can only be lower.
double re_constant_sampled(const DenseMatrix& x, std::size_t n, std::size_t s, double kappa,
                           std::size_t n_dirs, RngStream& stream,
                           std::span<const RealVector> extra_dirs = {});

struct MarginCurve {
    RealVector taus;
    RealVector empirical_probs;  // P(|u'X| <= tau), nondecreasing in tau
    std::size_t n_samples = 0;
};

/// Monte-Carlo estimate of tau -> P(|u'X| <= tau) on an ascending grid.
MarginCurve margin_curve(const CovariateModel& cov, const RealVector& u, const RealVector& taus,
                         std::size_t n_samples, RngStream& stream);

}  // namespace lassolab
