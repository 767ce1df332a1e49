#pragma once

#include "l1tucker/rng.hpp"
#include "l1tucker/tensor.hpp"

#include <vector>

namespace l1tucker::test {

inline DenseTensor random_tensor(const Shape& shape, Rng& rng) {
    std::vector<double> v(shape_volume(shape));
    for (double& x : v) x = rng.gaussian();
    return DenseTensor(shape, std::move(v));
}

inline Shape random_shape(Rng& rng, std::size_t max_order, std::size_t max_dim) {
    Shape s(1 + rng.below(max_order));
    for (auto& d : s) d = 1 + rng.below(max_dim);
    return s;
}

/// Visits every multi-index of `shape` with the first index fastest.
template <class F>
void for_each_index(const Shape& shape, F&& f) {
    std::vector<std::size_t> idx(shape.size(), 0);
    const std::size_t total = shape_volume(shape);
    for (std::size_t k = 0; k < total; ++k) {
        f(idx);
        for (std::size_t m = 0; m < shape.size(); ++m) {
            if (++idx[m] < shape[m]) break;
            idx[m] = 0;
        }
    }
}

inline double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

}  // namespace l1tucker::test
