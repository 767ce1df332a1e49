#include "l1tucker/tensor.hpp"

#include "l1tucker/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace l1tucker {

namespace {

// Product of dims strictly left and strictly right of `mode`.
std::pair<std::size_t, std::size_t> outer_extents(const Shape& shape, std::size_t mode) {
    std::size_t left = 1;
    for (std::size_t k = 0; k < mode; ++k) left *= shape[k];
    std::size_t right = 1;
    for (std::size_t k = mode + 1; k < shape.size(); ++k) right *= shape[k];
    return {left, right};
}

void check_mode(const Shape& shape, std::size_t mode) {
    if (mode >= shape.size()) {
        throw ArgumentError("mode " + std::to_string(mode) + " out of range for order-" +
                            std::to_string(shape.size()) + " tensor");
    }
}

}  // namespace

std::size_t shape_volume(const Shape& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

DenseTensor::DenseTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (shape_.empty()) throw ArgumentError("tensor shape must have at least one mode");
    for (auto d : shape_) {
        if (d == 0) throw ArgumentError("tensor dimensions must be positive");
    }
    if (data_.size() != shape_volume(shape_)) {
        throw ArgumentError("tensor data length " + std::to_string(data_.size()) +
                            " does not match shape volume " + std::to_string(shape_volume(shape_)));
    }
}

DenseTensor DenseTensor::zeros(Shape shape) {
    const auto n = shape_volume(shape);
    return DenseTensor(std::move(shape), std::vector<double>(n, 0.0));
}

std::size_t DenseTensor::linear_index(const std::vector<std::size_t>& index) const {
    if (index.size() != shape_.size()) throw ArgumentError("index order does not match tensor order");
    std::size_t offset = 0;
    std::size_t stride = 1;
    for (std::size_t k = 0; k < shape_.size(); ++k) {
        if (index[k] >= shape_[k]) throw ArgumentError("tensor index out of range");
        offset += index[k] * stride;
        stride *= shape_[k];
    }
    return offset;
}

double DenseTensor::at(const std::vector<std::size_t>& index) const {
    return data_[linear_index(index)];
}

UnfoldedMatrix unfold(const DenseTensor& x, std::size_t mode) {
    check_mode(x.shape(), mode);
    const auto [left, right] = outer_extents(x.shape(), mode);
    const std::size_t dn = x.dim(mode);

    UnfoldedMatrix out{mode, Matrix(static_cast<Eigen::Index>(dn), static_cast<Eigen::Index>(left * right))};
    const double* src = x.data().data();
    // Linear offset = i_left + L*(i_n + Dn*i_right); column = i_left + L*i_right.
    for (std::size_t r = 0; r < right; ++r) {
        for (std::size_t i = 0; i < dn; ++i) {
            const double* fiber_row = src + left * (i + dn * r);
            for (std::size_t l = 0; l < left; ++l) {
                out.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l + left * r)) = fiber_row[l];
            }
        }
    }
    return out;
}

DenseTensor fold(const Matrix& m, std::size_t mode, const Shape& shape) {
    check_mode(shape, mode);
    const auto [left, right] = outer_extents(shape, mode);
    const std::size_t dn = shape[mode];
    if (static_cast<std::size_t>(m.rows()) != dn || static_cast<std::size_t>(m.cols()) != left * right) {
        throw ArgumentError("fold: matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                            ", expected " + std::to_string(dn) + "x" + std::to_string(left * right));
    }
    std::vector<double> data(dn * left * right);
    for (std::size_t r = 0; r < right; ++r) {
        for (std::size_t i = 0; i < dn; ++i) {
            double* dst = data.data() + left * (i + dn * r);
            for (std::size_t l = 0; l < left; ++l) {
                dst[l] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l + left * r));
            }
        }
    }
    return DenseTensor(shape, std::move(data));
}

DenseTensor fold(const UnfoldedMatrix& m, const Shape& shape) {
    return fold(m.data, m.mode, shape);
}

DenseTensor mode_product(const DenseTensor& x, const Matrix& u, std::size_t mode) {
    check_mode(x.shape(), mode);
    const std::size_t dn = x.dim(mode);
    if (static_cast<std::size_t>(u.cols()) != dn) {
        throw ArgumentError("mode_product: matrix has " + std::to_string(u.cols()) + " columns, mode " +
                            std::to_string(mode) + " has dimension " + std::to_string(dn));
    }
    if (u.rows() == 0) throw ArgumentError("mode_product: matrix has no rows");

    const auto [left, right] = outer_extents(x.shape(), mode);
    const auto d = static_cast<std::size_t>(u.rows());
    Shape out_shape = x.shape();
    out_shape[mode] = d;

    std::vector<double> out(left * d * right);
    const auto L = static_cast<Eigen::Index>(left);
    // Each block of fixed trailing indices is an L x Dn column-major slab.
    for (std::size_t r = 0; r < right; ++r) {
        Eigen::Map<const Matrix> slab(x.data().data() + left * dn * r, L, static_cast<Eigen::Index>(dn));
        Eigen::Map<Matrix> dst(out.data() + left * d * r, L, static_cast<Eigen::Index>(d));
        dst.noalias() = slab * u.transpose();
    }
    return DenseTensor(std::move(out_shape), std::move(out));
}

DenseTensor multi_mode_product(const DenseTensor& x, const std::vector<std::pair<std::size_t, Matrix>>& factors) {
    std::vector<std::size_t> order(factors.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t a = 0; a < factors.size(); ++a) {
        check_mode(x.shape(), factors[a].first);
        for (std::size_t b = a + 1; b < factors.size(); ++b) {
            if (factors[a].first == factors[b].first) {
                throw ArgumentError("multi_mode_product: duplicate mode " + std::to_string(factors[a].first));
            }
        }
    }
    auto shrink = [&](std::size_t k) {
        return static_cast<double>(factors[k].second.rows()) / static_cast<double>(factors[k].second.cols());
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return shrink(a) < shrink(b); });

    DenseTensor y = x;
    for (auto k : order) y = mode_product(y, factors[k].second, factors[k].first);
    return y;
}

double frobenius_norm(const DenseTensor& x) {
    double s = 0.0;
    for (double v : x.data()) s += v * v;
    return std::sqrt(s);
}

double l1_norm(const DenseTensor& x) {
    double s = 0.0;
    for (double v : x.data()) s += std::abs(v);
    return s;
}

}  // namespace l1tucker
