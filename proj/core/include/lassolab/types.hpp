#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lassolab {

using RealVector = std::vector<double>;
using IndexSet = std::vector<std::size_t>;  // kept sorted ascending

/// d-dimensional parameter with explicit support; coordinates off the
/// support are exactly zero.
struct SparseParam {
    std::size_t dim = 0;
    IndexSet support;          // ascending, no duplicates
    RealVector values;         // values[i] belongs to support[i]

    RealVector to_dense() const {
        RealVector out(dim, 0.0);
        for (std::size_t i = 0; i < support.size(); ++i) out[support[i]] = values[i];
        return out;
    }

    double l2_norm_sq() const {
        double s = 0.0;
        for (double v : values) s += v * v;
        return s;
    }

    bool contains(std::size_t j) const {
        for (std::size_t idx : support)
            if (idx == j) return true;
        return false;
    }
};

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace lassolab
