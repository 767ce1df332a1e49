#include "l1tucker/linalg.hpp"

#include "l1tucker/error.hpp"

#include <cmath>
#include <string>

namespace l1tucker {

namespace {

void require_finite(const Matrix& a, const char* who) {
    if (!a.allFinite()) throw ArgumentError(std::string(who) + ": matrix has non-finite entries");
}

}  // namespace

StiefelBasis::StiefelBasis(Matrix m) : m_(std::move(m)) {
    if (m_.cols() == 0 || m_.rows() == 0) throw ArgumentError("basis must be non-empty");
    if (m_.cols() > m_.rows()) {
        throw ArgumentError("basis has more columns (" + std::to_string(m_.cols()) + ") than rows (" +
                            std::to_string(m_.rows()) + ")");
    }
    if (!m_.allFinite()) throw ArgumentError("basis has non-finite entries");
    const double err = orthonormality_error(m_);
    if (err > kTolerance) {
        throw ArgumentError("basis columns are not orthonormal (max |U^T U - I| = " + std::to_string(err) + ")");
    }
}

StiefelBasis StiefelBasis::identity(Index rows, Index cols) {
    return StiefelBasis(Matrix::Identity(rows, cols));
}

double orthonormality_error(const Matrix& u) {
    const Matrix g = u.transpose() * u;
    return (g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

ThinSvd thin_svd(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0) throw ArgumentError("thin_svd: empty matrix");
    require_finite(a, "thin_svd");

    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    ThinSvd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};

    for (Index k = 0; k < out.left.cols(); ++k) {
        Index pivot = 0;
        double best = -1.0;
        for (Index i = 0; i < out.left.rows(); ++i) {
            const double m = std::abs(out.left(i, k));
            if (m > best) {
                best = m;
                pivot = i;
            }
        }
        if (out.left(pivot, k) < 0.0) {
            out.left.col(k) *= -1.0;
            out.right.col(k) *= -1.0;
        }
    }
    return out;
}

Index numerical_rank(const Vector& s) {
    if (s.size() == 0) return 0;
    const double cutoff = kRankTolerance * s.maxCoeff();
    Index r = 0;
    for (Index i = 0; i < s.size(); ++i) {
        if (s(i) > cutoff) ++r;
    }
    return r;
}

Matrix orthonormal_completion(const Matrix& partial, Index rows, Index d) {
    if (partial.cols() > d) throw ArgumentError("orthonormal_completion: already more columns than requested");
    if (d > rows) throw ArgumentError("orthonormal_completion: rank exceeds dimension");
    Matrix out(rows, d);
    Index k = partial.cols();
    if (k > 0) out.leftCols(k) = partial;

    while (k < d) {
        const auto basis = out.leftCols(k);
        double best = -1.0;
        Vector best_residual;
        for (Index i = 0; i < rows; ++i) {
            Vector v = Vector::Unit(rows, i);
            // Two passes of classical Gram-Schmidt.
            for (int pass = 0; pass < 2; ++pass) v -= basis * (basis.transpose() * v);
            const double n = v.norm();
            if (n > best) {
                best = n;
                best_residual = std::move(v);
            }
        }
        out.col(k) = best_residual / best;
        ++k;
    }
    return out;
}

StiefelBasis top_d_left_basis(const Matrix& a, Index d) {
    if (d <= 0) throw ArgumentError("top_d_left_basis: rank must be positive");
    if (d > a.rows()) {
        throw ArgumentError("top_d_left_basis: rank " + std::to_string(d) + " exceeds row count " +
                            std::to_string(a.rows()));
    }
    const ThinSvd svd = thin_svd(a);
    const Index keep = std::min(numerical_rank(svd.singular_values), d);
    return StiefelBasis(orthonormal_completion(svd.left.leftCols(keep), a.rows(), d));
}

ProcrustesResult procrustes(const Matrix& a) {
    if (a.cols() > a.rows()) {
        throw ArgumentError("procrustes: expected a tall matrix, got " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()));
    }
    const ThinSvd svd = thin_svd(a);
    const bool deficient = numerical_rank(svd.singular_values) < a.cols();
    return {StiefelBasis(svd.left * svd.right.transpose()), deficient};
}

StiefelBasis procrustes_phi(const Matrix& a) { return procrustes(a).basis; }

Matrix sign_matrix(const Matrix& a) {
    return a.unaryExpr([](double v) { return v < 0.0 ? -1.0 : 1.0; });
}

double nuclear_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    require_finite(a, "nuclear_norm");
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues().sum();
}

}  // namespace l1tucker
