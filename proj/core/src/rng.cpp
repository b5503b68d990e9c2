#include "lassolab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lassolab {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline void philox_round(std::array<std::uint32_t, 4>& ctr, std::array<std::uint32_t, 2>& key) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
}

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
    for (int r = 0; r < 10; ++r) philox_round(ctr, key);
    return ctr;
}

}  // namespace

RngStream::RngStream(std::uint64_t base_seed, std::uint64_t stream_id)
    : base_seed_(base_seed), stream_id_(stream_id) {
    const std::uint64_t k = splitmix64(base_seed);
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

void RngStream::refill() {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)};
    buf_ = philox4x32_10(ctr, key_);
    ++block_;
    buf_pos_ = 0;
}

std::uint32_t RngStream::next_u32() {
    if (buf_pos_ >= 4) refill();
    return buf_[buf_pos_++];
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
}

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

std::uint64_t RngStream::uniform_int(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_int: n must be >= 1");
    // rejection to kill modulo bias
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % n;
}

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_normal_ = rad * std::sin(ang);
    has_spare_ = true;
    return rad * std::cos(ang);
}

RngStream RngStream::channel(std::uint32_t c) const {
    return RngStream(base_seed_, (stream_id_ & 0xFFFFFFFF00000000ull) | c);
}

RngStream make_stream(std::uint64_t base_seed, std::uint64_t replication_index) {
    if (replication_index >= (1ull << 32))
        throw std::invalid_argument("make_stream: replication_index must be < 2^32");
    return RngStream(base_seed, replication_index << 32);
}

RealVector sample_standard_normal(RngStream& s, std::size_t n) {
    if (n < 1) throw std::invalid_argument("sample_standard_normal: n must be >= 1");
    RealVector out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = s.normal();
    return out;
}

CovariateModel CovariateModel::identity(std::size_t d) {
    CovariateModel m;
    m.kind = CovarianceKind::gaussian_identity;
    m.d = d;
    m.validate();
    return m;
}

CovariateModel CovariateModel::circulant(std::size_t d, double r) {
    CovariateModel m;
    m.kind = CovarianceKind::gaussian_circulant;
    m.d = d;
    m.r = r;
    m.validate();
    return m;
}

CovariateModel CovariateModel::block(std::size_t d, std::size_t block_size) {
    CovariateModel m;
    m.kind = CovarianceKind::gaussian_block;
    m.d = d;
    m.block_size = block_size;
    m.validate();
    return m;
}

CovariateModel CovariateModel::clipped(std::size_t d, double bound) {
    CovariateModel m;
    m.kind = CovarianceKind::clipped_gaussian;
    m.d = d;
    m.bound = bound;
    m.validate();
    return m;
}

void CovariateModel::validate() const {
    if (d < 2) throw std::invalid_argument("CovariateModel: d must be >= 2");
    if (kind == CovarianceKind::gaussian_circulant && !(r > 0.0 && r < 1.0))
        throw std::invalid_argument("CovariateModel: circulant r must be in (0,1)");
    if (kind == CovarianceKind::gaussian_block && block_size < 1)
        throw std::invalid_argument("CovariateModel: block_size must be >= 1");
    if (kind == CovarianceKind::clipped_gaussian && !(bound > 0.0))
        throw std::invalid_argument("CovariateModel: clipping bound must be > 0");
}

namespace {

DenseMatrix model_covariance(const CovariateModel& m) {
    DenseMatrix sigma(m.d, m.d, 0.0);
    switch (m.kind) {
        case CovarianceKind::gaussian_circulant:
            for (std::size_t j = 0; j < m.d; ++j)
                for (std::size_t i = 0; i < m.d; ++i)
                    sigma(i, j) = std::pow(m.r, static_cast<double>(i > j ? i - j : j - i));
            break;
        case CovarianceKind::gaussian_block:
            for (std::size_t j = 0; j < m.d; ++j) {
                for (std::size_t i = 0; i < m.d; ++i) {
                    if (i == j)
                        sigma(i, j) = 1.0;
                    else if (i / m.block_size == j / m.block_size)
                        sigma(i, j) = 0.5;
                }
            }
            break;
        default:
            break;  // identity / clipped need no factor
    }
    return sigma;
}

// plain lower Cholesky; the model covariances here are strictly PD
DenseMatrix chol_lower(const DenseMatrix& a) {
    const std::size_t n = a.rows;
    DenseMatrix l(n, n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (d <= 0.0) throw NotPositiveDefinite("covariance factorisation failed");
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

}  // namespace

CovariateSampler::CovariateSampler(const CovariateModel& model) : model_(model) {
    model_.validate();
    if (model_.kind == CovarianceKind::gaussian_circulant ||
        model_.kind == CovarianceKind::gaussian_block) {
        chol_ = chol_lower(model_covariance(model_));
    }
}

RealVector CovariateSampler::sample(RngStream& s) const {
    const std::size_t d = model_.d;
    RealVector z(d);
    for (std::size_t i = 0; i < d; ++i) z[i] = s.normal();

    switch (model_.kind) {
        case CovarianceKind::gaussian_identity:
            return z;
        case CovarianceKind::clipped_gaussian: {
            const double b = model_.bound;
            for (double& v : z) v = std::clamp(v, -b, b);
            return z;
        }
        default: {
            RealVector x(d, 0.0);
            for (std::size_t j = 0; j < d; ++j) {
                const double zj = z[j];
                const double* cj = chol_.col(j);
                for (std::size_t i = j; i < d; ++i) x[i] += cj[i] * zj;
            }
            return x;
        }
    }
}

RealVector sample_covariate(RngStream& s, const CovariateSampler& sampler) {
    return sampler.sample(s);
}

RealVector sample_covariate(RngStream& s, const CovariateModel& model) {
    return CovariateSampler(model).sample(s);
}

SparseParam sample_sparse_uniform_param(RngStream& s, std::size_t d, std::size_t s0,
                                        double lo, double hi) {
    if (s0 < 1 || s0 > d) throw std::invalid_argument("sample_sparse_uniform_param: need 1 <= s0 <= d");
    if (!(lo < hi)) throw std::invalid_argument("sample_sparse_uniform_param: need lo < hi");

    // partial Fisher-Yates: first s0 entries form a uniform subset
    std::vector<std::size_t> idx(d);
    for (std::size_t i = 0; i < d; ++i) idx[i] = i;
    for (std::size_t i = 0; i < s0; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(s.uniform_int(d - i));
        std::swap(idx[i], idx[j]);
    }

    SparseParam theta;
    theta.dim = d;
    theta.support.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(s0));
    std::sort(theta.support.begin(), theta.support.end());
    theta.values.resize(s0);
    for (std::size_t i = 0; i < s0; ++i) theta.values[i] = s.uniform(lo, hi);
    return theta;
}

}  // namespace lassolab
