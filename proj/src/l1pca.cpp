#include "l1tucker/l1pca.hpp"

#include "l1tucker/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

namespace l1tucker {

int L1PcaConfig::resolved_max_iters(Index rows) const {
    if (max_iters) return *max_iters;
    const auto scaled = static_cast<std::int64_t>(kItersPerRow) * std::max<Index>(rows, 1);
    return static_cast<int>(std::min<std::int64_t>(scaled, kItersCap));
}

void L1PcaConfig::validate() const {
    if (!(tol > 0.0)) throw ArgumentError("L1-PCA tolerance must be positive");
    if (max_iters && *max_iters < 1) throw ArgumentError("L1-PCA iteration cap must be at least 1");
}

L1PcaResult l1pca_ao(const Matrix& x, const StiefelBasis& u0, const L1PcaConfig& cfg) {
    cfg.validate();
    if (!x.allFinite()) throw ArgumentError("l1pca_ao: data has non-finite entries");
    if (u0.rows() != x.rows()) {
        throw ArgumentError("l1pca_ao: basis has " + std::to_string(u0.rows()) + " rows, data has " +
                            std::to_string(x.rows()));
    }

    L1PcaResult out{u0, 0.0, {}, {}, 0, false};
    if (x.isZero(0.0)) {
        out.trace.push_back(0.0);
        out.converged = true;
        return out;
    }

    const int max_iters = cfg.resolved_max_iters(x.rows());
    Matrix u = u0.matrix();
    double metric = l1_norm(u.transpose() * x);
    out.trace.push_back(metric);

    for (int t = 1; t <= max_iters; ++t) {
        const Matrix b = sign_matrix(x.transpose() * u);
        const Matrix xb = x * b;
        AoStep step;
        step.metric_before = metric;
        step.surrogate_before = (u.transpose() * xb).trace();

        auto phi = procrustes(xb);
        u = phi.basis.matrix();
        step.rank_deficient = phi.rank_deficient;
        step.surrogate_after = (u.transpose() * xb).trace();
        step.metric_after = l1_norm(u.transpose() * x);

        const double gain = step.metric_after - metric;
        const bool done = metric > 0.0 ? gain / metric < cfg.tol : gain < L1PcaConfig::kAbsoluteTol;
        metric = step.metric_after;

        out.steps.push_back(step);
        out.trace.push_back(metric);
        out.iterations = t;
        if (done) {
            out.converged = true;
            break;
        }
    }
    out.basis = StiefelBasis(std::move(u));
    out.metric = metric;
    return out;
}

L1PcaResult l1pca_ao(const Matrix& x, Index rank, const L1PcaConfig& cfg) {
    if (cfg.init != L1PcaInit::SvdInit) {
        throw ArgumentError("l1pca_ao: a starting basis is required unless init = SvdInit");
    }
    return l1pca_ao(x, top_d_left_basis(x, rank), cfg);
}

namespace {

// Nuclear norm of a tall matrix through its small Gram matrix. Cheap but only
// accurate to ~sqrt(eps) for tiny singular values; used for screening.
double nuclear_screen(const Matrix& m) {
    if (m.cols() == 1) return m.norm();
    const Matrix g = m.transpose() * m;
    if (m.cols() == 2) {
        const double det = std::max(0.0, g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0));
        return std::sqrt(std::max(0.0, g.trace() + 2.0 * std::sqrt(det)));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(g, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Index i = 0; i < eig.eigenvalues().size(); ++i) s += std::sqrt(std::max(0.0, eig.eigenvalues()(i)));
    return s;
}

double nuclear_exact(const Matrix& m) { return m.cols() == 1 ? m.norm() : nuclear_norm(m); }

// Entry k (column-major over a rows x rank matrix) is -1 iff bit (K-1-k) of
// code is set, so increasing codes walk patterns lexicographically.
Matrix pattern_from_code(std::uint64_t code, Index rows, Index rank) {
    const Index total = rows * rank;
    Matrix b(rows, rank);
    for (Index k = 0; k < total; ++k) {
        const bool negative = (code >> (total - 1 - k)) & 1u;
        b(k % rows, k / rows) = negative ? -1.0 : 1.0;
    }
    return b;
}

}  // namespace

L1PcaExactResult l1pca_exact(const Matrix& x, Index rank) {
    if (rank <= 0) throw ArgumentError("l1pca_exact: rank must be positive");
    if (rank > x.rows()) throw ArgumentError("l1pca_exact: rank exceeds row count");
    if (!x.allFinite()) throw ArgumentError("l1pca_exact: data has non-finite entries");
    const Index cols = x.cols();
    const Index bits = cols * rank;
    if (bits > kExactBudgetBits) {
        throw ArgumentError("l1pca_exact: search space 2^" + std::to_string(bits) + " exceeds budget 2^" +
                            std::to_string(kExactBudgetBits));
    }

    auto make = [](StiefelBasis basis, double metric, Matrix pattern, double nuclear) {
        return L1PcaExactResult{L1PcaResult{std::move(basis), metric, {metric}, {}, 1, true}, std::move(pattern),
                                nuclear};
    };

    if (x.isZero(0.0)) {
        return make(top_d_left_basis(Matrix::Zero(x.rows(), rank), rank), 0.0, Matrix::Ones(cols, rank), 0.0);
    }

    const std::uint64_t count = std::uint64_t{1} << bits;
    constexpr std::uint64_t kRefresh = 4096;
    constexpr double kScreenSlack = 1e-6;
    constexpr double kTieSlack = 1e-12;

    Matrix xb = x * pattern_from_code(0, cols, rank);
    std::uint64_t best_code = 0;
    double best = nuclear_exact(xb);

    for (std::uint64_t code = 1; code < count; ++code) {
        if (code % kRefresh == 0) {
            xb = x * pattern_from_code(code, cols, rank);
        } else {
            // Bits that changed between code-1 and code are exactly the ones
            // set in (code ^ (code-1)); for each, the entry flips sign.
            std::uint64_t changed = code ^ (code - 1);
            for (Index k = bits - 1; changed != 0; --k, changed >>= 1) {
                if (!(changed & 1u)) continue;
                const bool now_negative = (code >> (bits - 1 - k)) & 1u;
                const Index row = k % cols;
                const Index col = k / cols;
                xb.col(col) += (now_negative ? -2.0 : 2.0) * x.col(row);
            }
        }
        const double screen = nuclear_screen(xb);
        if (screen < best * (1.0 - kScreenSlack)) continue;
        const double exact = nuclear_exact(x * pattern_from_code(code, cols, rank));
        if (exact > best + kTieSlack * std::max(1.0, best)) {
            best = exact;
            best_code = code;
        }
    }

    Matrix pattern = pattern_from_code(best_code, cols, rank);
    StiefelBasis basis = procrustes_phi(x * pattern);
    const double metric = l1_norm(basis.matrix().transpose() * x);
    return make(std::move(basis), metric, std::move(pattern), best);
}

}  // namespace l1tucker
