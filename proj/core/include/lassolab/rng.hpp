#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "lassolab/linalg.hpp"
#include "lassolab/types.hpp"

namespace lassolab {

/// Counter-based stream (Philox4x32-10). State is a 64-bit key plus a 128-bit
/// counter whose top half is the stream id, so distinct stream ids own
/// disjoint counter domains: consuming one stream never perturbs another, and
/// an equal (seed, id) pair replays bit-identically on any platform.
class RngStream {
  public:
    RngStream(std::uint64_t base_seed, std::uint64_t stream_id);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01();
    double uniform(double lo, double hi);

    /// Unbiased integer in [0, n), n >= 1.
    std::uint64_t uniform_int(std::uint64_t n);

    /// Standard normal (Box-Muller; the pair partner is cached in-stream).
    double normal();

    std::uint64_t base_seed() const { return base_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Sibling stream sharing this stream's (seed, replication) identity but
    /// with the low 32 id bits replaced by `c`. Streams created through
    /// make_stream leave those bits zero, so channels never collide with
    /// replication ids.
    RngStream channel(std::uint32_t c) const;

  private:
    void refill();

    std::uint64_t base_seed_ = 0;
    std::uint64_t stream_id_ = 0;
    std::array<std::uint32_t, 2> key_{};
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int buf_pos_ = 4;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// Stream for one replication: ids are spaced so that .channel(c) sub-streams
/// of different replications stay disjoint. replication_index < 2^32.
RngStream make_stream(std::uint64_t base_seed, std::uint64_t replication_index);

RealVector sample_standard_normal(RngStream& s, std::size_t n);

enum class CovarianceKind { gaussian_identity, gaussian_circulant, gaussian_block, clipped_gaussian };

/// Covariate distribution; gaussian_circulant has Sigma_ij = r^|i-j|,
/// gaussian_block is block-diagonal with within-block correlation 0.5,
/// clipped_gaussian clamps N(0, I) entries into [-bound, bound].
struct CovariateModel {
    CovarianceKind kind = CovarianceKind::gaussian_identity;
    std::size_t d = 0;
    double r = 0.5;             // circulant decay, in (0, 1)
    std::size_t block_size = 2; // block model
    double bound = 1.0;         // clipping bound, > 0

    static CovariateModel identity(std::size_t d);
    static CovariateModel circulant(std::size_t d, double r);
    static CovariateModel block(std::size_t d, std::size_t block_size);
    static CovariateModel clipped(std::size_t d, double bound);

    void validate() const;
};

/// Holds the Cholesky factor of the model covariance (cached once, shared
/// read-only across threads).
class CovariateSampler {
  public:
    explicit CovariateSampler(const CovariateModel& model);
    RealVector sample(RngStream& s) const;
    const CovariateModel& model() const { return model_; }

  private:
    CovariateModel model_;
    DenseMatrix chol_;  // empty for identity / clipped
};

RealVector sample_covariate(RngStream& s, const CovariateSampler& sampler);
/// Convenience overload; factors the covariance on every call.
RealVector sample_covariate(RngStream& s, const CovariateModel& model);

/// Uniformly random s0-subset of [d] as support, supported values i.i.d.
/// Uniform[lo, hi), the rest exactly zero. Support size is exact.
SparseParam sample_sparse_uniform_param(RngStream& s, std::size_t d, std::size_t s0,
                                        double lo, double hi);

}  // namespace lassolab
