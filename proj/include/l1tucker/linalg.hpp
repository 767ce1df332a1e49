#pragma once

#include "l1tucker/tensor.hpp"

namespace l1tucker {

using Index = Eigen::Index;

/// Singular values at or below this fraction of the largest one count as zero
/// when deciding numerical rank.
inline constexpr double kRankTolerance = 1e-12;

/// D x d matrix with orthonormal columns (an element of the Stiefel manifold).
/// Construction validates max|U^T U - I| <= kTolerance.
class StiefelBasis {
public:
    static constexpr double kTolerance = 1e-10;

    explicit StiefelBasis(Matrix m);

    /// First d columns of the D x D identity.
    static StiefelBasis identity(Index rows, Index cols);

    [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
    [[nodiscard]] Index rows() const noexcept { return m_.rows(); }
    [[nodiscard]] Index cols() const noexcept { return m_.cols(); }

    bool operator==(const StiefelBasis& o) const { return m_ == o.m_; }

private:
    Matrix m_;
};

/// max |U^T U - I|.
[[nodiscard]] double orthonormality_error(const Matrix& u);

/// A = left * diag(singular_values) * right^T with r = min(rows, cols).
///
/// Sign convention: in every left singular vector the entry of largest
/// magnitude (lowest row on ties) is nonnegative; the matching right vector
/// is flipped along with it.
struct ThinSvd {
    Matrix left;
    Vector singular_values;
    Matrix right;
};

[[nodiscard]] ThinSvd thin_svd(const Matrix& a);

/// Count of singular values above kRankTolerance * sigma_max.
[[nodiscard]] Index numerical_rank(const Vector& singular_values);

/// Dominant d-dimensional left singular subspace of `a`. When rank(a) < d the
/// basis is completed with orthonormalized coordinate axes (see
/// orthonormal_completion). Throws ArgumentError if d is 0 or exceeds rows.
[[nodiscard]] StiefelBasis top_d_left_basis(const Matrix& a, Index d);

/// Extends the orthonormal columns of `partial` to `d` columns. Each new
/// column is the coordinate axis with the largest residual after projecting
/// out the current columns (lowest index on ties), normalized.
[[nodiscard]] Matrix orthonormal_completion(const Matrix& partial, Index rows, Index d);

struct ProcrustesResult {
    StiefelBasis basis;
    /// Set when the argument had numerical rank below its column count; the
    /// basis then uses the SVD's own null-space vectors.
    bool rank_deficient = false;
};

/// Phi(A) = W Q^T for A = W S Q^T, the maximizer of Tr(U^T A) over the
/// Stiefel manifold. A must be tall (cols <= rows).
[[nodiscard]] ProcrustesResult procrustes(const Matrix& a);
[[nodiscard]] StiefelBasis procrustes_phi(const Matrix& a);

/// Entrywise sign with sgn(0) = +1.
[[nodiscard]] Matrix sign_matrix(const Matrix& a);

/// Sum of singular values.
[[nodiscard]] double nuclear_norm(const Matrix& a);

/// Sum of absolute entries.
[[nodiscard]] inline double l1_norm(const Matrix& a) { return a.cwiseAbs().sum(); }

}  // namespace l1tucker
