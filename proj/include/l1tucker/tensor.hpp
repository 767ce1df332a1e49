#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <utility>
#include <vector>

namespace l1tucker {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Shape = std::vector<std::size_t>;

/// Dense N-way array of doubles.
///
/// Storage is first-index-fastest: element (i_1, ..., i_N) (0-based here)
/// lives at linear offset i_1 + D_1*(i_2 + D_2*(i_3 + ...)). Mode indices in
/// the C++ API are 0-based, so the mathematical mode n corresponds to index
/// n-1 everywhere below.
///
/// A tensor is immutable once built; every operation returns a new value.
class DenseTensor {
public:
    DenseTensor() = default;

    /// Throws ArgumentError if any dimension is zero or the data length does
    /// not equal the product of the shape.
    DenseTensor(Shape shape, std::vector<double> data);

    static DenseTensor zeros(Shape shape);

    [[nodiscard]] const Shape& shape() const noexcept { return shape_; }
    [[nodiscard]] std::size_t order() const noexcept { return shape_.size(); }
    [[nodiscard]] std::size_t dim(std::size_t mode) const { return shape_.at(mode); }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

    [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }
    [[nodiscard]] std::vector<double> take_data() && noexcept { return std::move(data_); }

    /// Element access with a full 0-based multi-index. Throws on bad index.
    [[nodiscard]] double at(const std::vector<std::size_t>& index) const;
    [[nodiscard]] std::size_t linear_index(const std::vector<std::size_t>& index) const;

    bool operator==(const DenseTensor&) const = default;

private:
    Shape shape_;
    std::vector<double> data_;
};

[[nodiscard]] std::size_t shape_volume(const Shape& shape);

/// Mode-n matricization [X]_(n), Dn x Pn.
struct UnfoldedMatrix {
    std::size_t mode = 0;
    Matrix data;
};

/// Column j of the mode-n unfolding holds the fiber with
/// j = sum_{m != n} i_m J_m, J_m = prod_{k < m, k != n} D_k (0-based indices).
[[nodiscard]] UnfoldedMatrix unfold(const DenseTensor& x, std::size_t mode);

/// Inverse of unfold for the given target shape.
[[nodiscard]] DenseTensor fold(const Matrix& m, std::size_t mode, const Shape& shape);
[[nodiscard]] DenseTensor fold(const UnfoldedMatrix& m, const Shape& shape);

/// X x_n U for U of size d x Dn; the result replaces Dn with d.
[[nodiscard]] DenseTensor mode_product(const DenseTensor& x, const Matrix& u, std::size_t mode);

/// Product with one matrix per distinct mode. Modes are applied in the order
/// that shrinks the tensor fastest; the result does not depend on that order.
[[nodiscard]] DenseTensor multi_mode_product(const DenseTensor& x,
                                             const std::vector<std::pair<std::size_t, Matrix>>& factors);

[[nodiscard]] double frobenius_norm(const DenseTensor& x);
[[nodiscard]] double l1_norm(const DenseTensor& x);

}  // namespace l1tucker
