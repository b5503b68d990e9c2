#include "lassolab/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lassolab {

double l_ds(std::size_t d, std::size_t s) {
    if (s < 3 || 3 * s > d + 2)
        throw OutOfRegime("l_ds: requires 3 <= s <= (d+2)/3");
    const double half = static_cast<double>(s - 1) / 2.0;
    return half * std::log(static_cast<double>(d - s) / half);
}

namespace {

// sign pattern over coordinates 1..d-1 of the final vector
struct Pattern {
    IndexSet pos;              // ascending positions in [0, d-1)
    std::vector<int> sign;     // +-1 aligned with pos
};

// Hamming distance between two equal-size sparse sign patterns: coordinates
// in the symmetric difference plus sign mismatches on the intersection.
std::size_t hamming(const Pattern& a, const Pattern& b) {
    std::size_t dist = 0;
    std::size_t i = 0, j = 0;
    while (i < a.pos.size() && j < b.pos.size()) {
        if (a.pos[i] == b.pos[j]) {
            if (a.sign[i] != b.sign[j]) ++dist;
            ++i;
            ++j;
        } else if (a.pos[i] < b.pos[j]) {
            ++dist;
            ++i;
        } else {
            ++dist;
            ++j;
        }
    }
    dist += (a.pos.size() - i) + (b.pos.size() - j);
    return dist;
}

Pattern sample_pattern(RngStream& stream, std::size_t d_minus_1, std::size_t weight) {
    // partial Fisher-Yates for the support
    std::vector<std::size_t> idx(d_minus_1);
    for (std::size_t i = 0; i < d_minus_1; ++i) idx[i] = i;
    for (std::size_t i = 0; i < weight; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(stream.uniform_int(d_minus_1 - i));
        std::swap(idx[i], idx[j]);
    }
    Pattern p;
    p.pos.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(weight));
    std::sort(p.pos.begin(), p.pos.end());
    p.sign.resize(weight);
    for (std::size_t i = 0; i < weight; ++i) p.sign[i] = stream.uniform_int(2) == 0 ? -1 : 1;
    return p;
}

}  // namespace

PackingSet build_packing_set(std::size_t d, std::size_t s, double r, double delta,
                             RngStream& stream, std::size_t max_attempts) {
    const double l = l_ds(d, s);  // also enforces the regime
    if (!(r > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("build_packing_set: r and delta must be > 0");

    // one above the integer information bound ceil(exp(l_ds))
    const std::size_t target =
        static_cast<std::size_t>(std::ceil(std::exp(l))) + 1;
    const std::size_t weight = s - 1;
    const std::size_t min_dist = (weight + 1) / 2;  // ceil((s-1)/2)

    std::vector<Pattern> accepted;
    accepted.reserve(target);
    std::size_t attempts = 0;
    while (accepted.size() < target) {
        if (attempts >= max_attempts)
            throw PackingFailed("build_packing_set: exhausted max_attempts at " +
                                std::to_string(accepted.size()) + " of " +
                                std::to_string(target) + " vectors");
        ++attempts;
        Pattern cand = sample_pattern(stream, d - 1, weight);
        bool ok = true;
        for (const Pattern& p : accepted) {
            if (hamming(cand, p) < min_dist) {
                ok = false;
                break;
            }
        }
        if (ok) accepted.push_back(std::move(cand));
    }

    const double mag = std::sqrt(2.0 / static_cast<double>(weight)) * delta;
    PackingSet set;
    set.d = d;
    set.s = s;
    set.r = r;
    set.delta = delta;
    set.vectors.reserve(target);
    for (const Pattern& p : accepted) {
        SparseParam v;
        v.dim = d;
        v.support.reserve(s);
        v.values.reserve(s);
        v.support.push_back(0);
        v.values.push_back(r);
        for (std::size_t i = 0; i < weight; ++i) {
            v.support.push_back(p.pos[i] + 1);
            v.values.push_back(p.sign[i] * mag);
        }
        set.vectors.push_back(std::move(v));
    }

    // exhaustive verification; a failure here is a construction bug
    const std::size_t m = set.vectors.size();
    if (std::log(static_cast<double>(m)) < l)
        throw PackingFailed("build_packing_set: size below the information bound");
    for (const SparseParam& v : set.vectors) {
        if (v.support.size() != s) throw PackingFailed("build_packing_set: wrong sparsity");
        const double want = r * r + 2.0 * delta * delta;
        if (std::abs(v.l2_norm_sq() - want) > 1e-12 * (1.0 + want))
            throw PackingFailed("build_packing_set: wrong norm");
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const std::size_t w = hamming(accepted[i], accepted[j]);
            // squared distance = (2 delta^2 / (s-1)) * weighted Hamming count,
            // where intersecting sign flips weigh 4; integer bounds below are
            // exact: (s-1)/2 <= w and weighted count <= 4 (s-1)
            if (2 * w < weight)
                throw PackingFailed("build_packing_set: pairwise separation violated");
        }
    }
    return set;
}

SparseParam sample_omega1(std::size_t d, std::size_t s, double r, RngStream& stream) {
    if (s < 2 || s > d) throw std::invalid_argument("sample_omega1: need 2 <= s <= d");
    if (!(r > 0.0)) throw std::invalid_argument("sample_omega1: r must be > 0");

    // radius by rejection against the uniform envelope of height 4/r on [r/2, r]
    double radius;
    for (;;) {
        const double tau = stream.uniform(r / 2.0, r);
        const double u = stream.uniform01();
        const double sine = std::sin(2.0 * std::numbers::pi * tau / r);
        if (u < sine * sine) {
            radius = tau;
            break;
        }
    }

    // uniform direction on S^{s-1}
    RealVector dir(s);
    double norm_sq = 0.0;
    do {
        norm_sq = 0.0;
        for (std::size_t i = 0; i < s; ++i) {
            dir[i] = stream.normal();
            norm_sq += dir[i] * dir[i];
        }
    } while (norm_sq == 0.0);
    const double scale = radius / std::sqrt(norm_sq);

    SparseParam theta;
    theta.dim = d;
    theta.support.resize(s);
    theta.values.resize(s);
    for (std::size_t i = 0; i < s; ++i) {
        theta.support[i] = i;
        theta.values[i] = dir[i] * scale;
    }
    return theta;
}

double re_constant_sampled(const DenseMatrix& x, std::size_t n, std::size_t s, double kappa,
                           std::size_t n_dirs, RngStream& stream,
                           std::span<const RealVector> extra_dirs) {
    if (n_dirs < 1) throw std::invalid_argument("re_constant_sampled: n_dirs must be >= 1");
    if (s < 1 || s > x.cols) throw std::invalid_argument("re_constant_sampled: need 1 <= s <= d");
    const std::size_t d = x.cols;

    auto cone_ratio = [&](const RealVector& v) {
        const double denom = l2_norm_sq(v);
        if (denom == 0.0) return std::numeric_limits<double>::infinity();
        return l2_norm_sq(matvec(x, v)) / (static_cast<double>(n) * denom);
    };

    double best = std::numeric_limits<double>::infinity();
    for (const RealVector& v : extra_dirs) best = std::min(best, cone_ratio(v));

    std::vector<std::size_t> idx(d);
    RealVector v(d);
    for (std::size_t trial = 0; trial < n_dirs; ++trial) {
        for (std::size_t i = 0; i < d; ++i) idx[i] = i;
        for (std::size_t i = 0; i < s; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(stream.uniform_int(d - i));
            std::swap(idx[i], idx[j]);
        }
        std::fill(v.begin(), v.end(), 0.0);
        double l1_on = 0.0;
        for (std::size_t i = 0; i < s; ++i) {
            const double g = stream.normal();
            v[idx[i]] = g;
            l1_on += std::abs(g);
        }
        if (s < d) {
            double l1_off = 0.0;
            RealVector off(d - s);
            for (std::size_t i = 0; i < d - s; ++i) {
                off[i] = stream.normal();
                l1_off += std::abs(off[i]);
            }
            if (l1_off > 0.0) {
                const double budget = stream.uniform01() * kappa * l1_on;
                const double scale = budget / l1_off;
                for (std::size_t i = 0; i < d - s; ++i) v[idx[s + i]] = off[i] * scale;
            }
        }
        best = std::min(best, cone_ratio(v));
    }
    return best;
}

MarginCurve margin_curve(const CovariateModel& cov, const RealVector& u, const RealVector& taus,
                         std::size_t n_samples, RngStream& stream) {
    if (u.size() != cov.d) throw std::invalid_argument("margin_curve: u dimension mismatch");
    if (l2_norm_sq(u) == 0.0) throw std::invalid_argument("margin_curve: u must be nonzero");
    for (std::size_t i = 0; i + 1 < taus.size(); ++i)
        if (!(taus[i] > 0.0) || taus[i] >= taus[i + 1])
            throw std::invalid_argument("margin_curve: taus must be positive ascending");
    if (!taus.empty() && !(taus.back() > 0.0))
        throw std::invalid_argument("margin_curve: taus must be positive");

    MarginCurve curve;
    curve.taus = taus;
    curve.empirical_probs.assign(taus.size(), 0.0);
    curve.n_samples = n_samples;

    const CovariateSampler sampler(cov);
    std::vector<std::size_t> counts(taus.size(), 0);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const RealVector x = sampler.sample(stream);
        double z = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) z += u[j] * x[j];
        z = std::abs(z);
        for (std::size_t k = 0; k < taus.size(); ++k)
            if (z <= taus[k]) ++counts[k];
    }
    for (std::size_t k = 0; k < taus.size(); ++k)
        curve.empirical_probs[k] =
            static_cast<double>(counts[k]) / static_cast<double>(n_samples);
    return curve;
}

}  // namespace lassolab
