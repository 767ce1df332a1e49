#pragma once

#include "l1tucker/l1pca.hpp"
#include "l1tucker/tensor.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace l1tucker {

using Ranks = std::vector<std::size_t>;
using Bases = std::vector<StiefelBasis>;

/// Per-mode orthonormal bases of a Tucker approximation, plus an optionally
/// materialized core X x_n U_n^T.
struct TuckerModel {
    Bases bases;
    Ranks ranks;
    std::optional<DenseTensor> core;

    [[nodiscard]] Shape dims() const;
    /// Computes and stores the core for `x`.
    void materialize_core(const DenseTensor& x);
};

enum class TuckerInit {
    Auto,     ///< HOSVD for hooi, L1-HOSVD for l1_hooi
    Hosvd,
    L1Hosvd,
    Random,   ///< seeded Haar-random bases
};

struct HooiConfig {
    double tol = 1e-6;
    int max_outer_iters = 100;
    /// Settings for the inner L1-PCA calls of L1-HOSVD / L1-HOOI.
    L1PcaConfig inner{};
    TuckerInit init = TuckerInit::Auto;
    std::uint64_t seed = 0;
    /// Keep every inner L1-PCA metric trace (for convergence audits).
    bool record_inner = false;

    /// Sets the outer and inner tolerance together.
    HooiConfig& with_tol(double t) {
        tol = t;
        inner.tol = t;
        return *this;
    }
    void validate() const;
};

struct DecompTrace {
    /// Entry 0 is the metric of the initial bases; entry q is the metric after
    /// outer sweep q. L2 solvers trace ||core||_F^2, L1 solvers ||core||_1.
    std::vector<double> metric_per_outer_iter;
    bool converged = false;
    int iterations = 0;
    /// [q-1][n]: metric of U_n^(q) on A_n^(q), right after the mode-n update.
    std::vector<std::vector<double>> mode_metrics;
    /// [q-1][n]: metric of the previous U_n^(q-1) on the same A_n^(q).
    std::vector<std::vector<double>> mode_metrics_before;
    /// Inner L1-PCA traces, in (q, n) order. Filled only with record_inner.
    std::vector<std::vector<double>> inner_traces;
};

struct Decomposition {
    TuckerModel model;
    DecompTrace trace;
};

/// ||X x_n U_n^T||_F^2.
[[nodiscard]] double tucker_metric_l2(const DenseTensor& x, const Bases& bases);
/// ||X x_n U_n^T||_1.
[[nodiscard]] double tucker_metric_l1(const DenseTensor& x, const Bases& bases);

/// X x_n U_n^T over every mode.
[[nodiscard]] DenseTensor project_core(const DenseTensor& x, const Bases& bases);

/// G x_n U_n over every mode.
[[nodiscard]] DenseTensor expand_core(const DenseTensor& core, const Bases& bases);

/// A_n = [X x_{m != n} U_m^T]_(n), with products taken in the order that
/// shrinks the tensor fastest.
[[nodiscard]] Matrix projected_unfolding(const DenseTensor& x, const Bases& bases, std::size_t mode);

[[nodiscard]] TuckerModel hosvd(const DenseTensor& x, const Ranks& ranks);
[[nodiscard]] Decomposition hooi(const DenseTensor& x, const Ranks& ranks, const HooiConfig& cfg = {});
[[nodiscard]] TuckerModel l1_hosvd(const DenseTensor& x, const Ranks& ranks, const L1PcaConfig& cfg = {});
[[nodiscard]] Decomposition l1_hooi(const DenseTensor& x, const Ranks& ranks, const HooiConfig& cfg = {});

/// X x_n U_n U_n^T.
[[nodiscard]] DenseTensor reconstruct(const DenseTensor& x, const TuckerModel& model);

void validate_ranks(const Shape& shape, const Ranks& ranks);

enum class Solver { Hosvd, Hooi, L1Hosvd, L1Hooi };

inline constexpr Solver kAllSolvers[] = {Solver::Hosvd, Solver::Hooi, Solver::L1Hosvd, Solver::L1Hooi};

/// "hosvd", "hooi", "l1-hosvd", "l1-hooi".
[[nodiscard]] std::string solver_name(Solver s);
[[nodiscard]] Solver parse_solver(std::string_view name);

/// Runs one solver. Single-pass solvers report an empty trace marked
/// converged after one iteration.
[[nodiscard]] Decomposition decompose(Solver solver, const DenseTensor& x, const Ranks& ranks,
                                      const HooiConfig& cfg = {});

}  // namespace l1tucker
