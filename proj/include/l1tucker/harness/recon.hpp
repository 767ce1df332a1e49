#pragma once

#include "l1tucker/harness/results.hpp"
#include "l1tucker/rng.hpp"
#include "l1tucker/tucker.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace l1tucker::harness {

/// Outlier-corrupted reconstruction study. The tensor is
///   X_corr = G x_n U_n  +  AWGN(0, awgn_std^2)  +  outliers
/// with core entries N(0, core_std^2), Haar bases, and `outlier_count`
/// entries (uniform, without replacement) receiving extra N(0, outlier_std^2).
struct ReconExperimentSpec {
    Shape shape{8, 10, 8, 10, 8};
    Ranks ranks{4, 4, 3, 3, 3};
    double core_std = 3.0;
    double awgn_std = 1.0;
    std::size_t outlier_count = 68;
    double outlier_std = 0.0;
    std::size_t trials = 50;
    std::uint64_t seed = 1;
    std::vector<Solver> solvers{std::begin(kAllSolvers), std::end(kAllSolvers)};
    HooiConfig solver_config{};

    /// Scaled-down default: same corruption ratio as the full-size study
    /// (300 / 225000) on a 51,200-entry tensor.
    static ReconExperimentSpec desk();
    /// Full-size study: dims (10,15,10,15,10), ranks (6,6,4,4,4), 300 outliers.
    static ReconExperimentSpec full();

    [[nodiscard]] double corruption_ratio() const;
    void validate() const;
};

/// Which field of the spec a sweep overrides.
enum class SweepParam { OutlierStd, OutlierCount };

[[nodiscard]] std::string sweep_param_name(SweepParam p);  // "outlier_std" / "outlier_count"
[[nodiscard]] SweepParam parse_sweep_param(const std::string& name);

struct SweepGrid {
    SweepParam param = SweepParam::OutlierStd;
    std::vector<double> values;
};

struct TuckerSample {
    DenseTensor x;
    TuckerModel truth;
};

/// Draws a Tucker-structured tensor from `rng` (the trial's Data stream).
[[nodiscard]] TuckerSample gen_tucker_tensor(const ReconExperimentSpec& spec, Rng& rng);

/// Per-trial generators for the three independent corruption components.
struct CorruptionStreams {
    Rng noise;
    Rng positions;
    Rng values;

    static CorruptionStreams for_trial(std::uint64_t seed, std::uint64_t trial);
};

/// Adds AWGN everywhere and outliers at spec.outlier_count positions.
/// Outlier positions for count k are a prefix of those for any larger count,
/// and outlier values are unit Gaussians scaled by outlier_std, so sweeps
/// over either parameter reuse the same underlying draws.
[[nodiscard]] DenseTensor corrupt(const DenseTensor& x, const ReconExperimentSpec& spec, CorruptionStreams& streams);

/// ||X_true - X_hat||_F^2 / ||X_true||_F^2. Throws ArgumentError for a zero
/// reference or a shape mismatch.
[[nodiscard]] double nse(const DenseTensor& x_true, const DenseTensor& x_hat);

/// Every grid point and trial: generate, corrupt, decompose with each solver,
/// reconstruct X_corr x_n U_n U_n^T, and aggregate NSE into MNSE rows. The
/// clean tensor and all random draws depend only on (seed, trial), so every
/// solver and every grid point sees paired data.
[[nodiscard]] ResultTable run_reconstruction_sweep(const ReconExperimentSpec& spec, const SweepGrid& grid,
                                                   unsigned threads = 1);

}  // namespace l1tucker::harness
