#pragma once

#include "l1tucker/linalg.hpp"

#include <optional>
#include <vector>

namespace l1tucker {

enum class L1PcaInit {
    GivenBasis,  ///< caller supplies U0
    SvdInit,     ///< U0 = dominant left singular vectors of X
};

struct L1PcaConfig {
    /// Stop once the relative metric increase drops below tol.
    double tol = 1e-6;
    /// Iteration cap; unset means min(100 * rows, 1000).
    std::optional<int> max_iters;
    L1PcaInit init = L1PcaInit::GivenBasis;

    static constexpr int kItersPerRow = 100;
    static constexpr int kItersCap = 1000;
    /// Absolute increase threshold used when the previous metric is zero.
    static constexpr double kAbsoluteTol = 1e-12;

    [[nodiscard]] int resolved_max_iters(Index rows) const;
    void validate() const;
};

/// One alternating step t, recording each link of the chain
///   ||U_{t-1}^T X||_1 = Tr(U_{t-1}^T X B_t) <= Tr(U_t^T X B_t) <= ||U_t^T X||_1.
struct AoStep {
    double metric_before = 0.0;
    double surrogate_before = 0.0;
    double surrogate_after = 0.0;
    double metric_after = 0.0;
    bool rank_deficient = false;
};

struct L1PcaResult {
    StiefelBasis basis;
    /// ||U^T X||_1 of the returned basis.
    double metric = 0.0;
    /// Metric of U0 followed by the metric after every update.
    std::vector<double> trace;
    std::vector<AoStep> steps;
    int iterations = 0;
    bool converged = false;
};

/// Alternating optimization U_t = Phi(X sgn(X^T U_{t-1})) started from u0.
/// Returns the last iterate. An all-zero X returns u0 unchanged.
[[nodiscard]] L1PcaResult l1pca_ao(const Matrix& x, const StiefelBasis& u0, const L1PcaConfig& cfg = {});

/// Same, with the starting basis chosen by cfg.init (which must be SvdInit).
[[nodiscard]] L1PcaResult l1pca_ao(const Matrix& x, Index rank, const L1PcaConfig& cfg);

struct L1PcaExactResult : L1PcaResult {
    /// The maximizing sign matrix B_nuc (cols x rank).
    Matrix sign_pattern;
    /// max_B ||X B||_*.
    double nuclear_max = 0.0;
};

/// Largest cols * rank the exhaustive search accepts.
inline constexpr int kExactBudgetBits = 24;

/// Exact L1-PCA by exhausting every B in {+-1}^{cols x rank} and returning
/// U = Phi(X B_nuc). Patterns are visited in lexicographic order of the
/// column-major entry sequence with +1 before -1; the first maximizer wins
/// ties (differences below 1e-12 relative count as ties).
[[nodiscard]] L1PcaExactResult l1pca_exact(const Matrix& x, Index rank);

}  // namespace l1tucker
