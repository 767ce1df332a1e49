#include "l1tucker/harness/recon.hpp"

#include "l1tucker/error.hpp"
#include "l1tucker/harness/parallel.hpp"

#include <cmath>
#include <optional>

namespace l1tucker::harness {

ReconExperimentSpec ReconExperimentSpec::desk() { return ReconExperimentSpec{}; }

ReconExperimentSpec ReconExperimentSpec::full() {
    ReconExperimentSpec s;
    s.shape = {10, 15, 10, 15, 10};
    s.ranks = {6, 6, 4, 4, 4};
    s.outlier_count = 300;
    s.trials = 1000;
    return s;
}

double ReconExperimentSpec::corruption_ratio() const {
    return static_cast<double>(outlier_count) / static_cast<double>(shape_volume(shape));
}

void ReconExperimentSpec::validate() const {
    if (shape.empty()) throw ArgumentError("recon spec: empty shape");
    for (auto d : shape) {
        if (d == 0) throw ArgumentError("recon spec: dimensions must be positive");
    }
    validate_ranks(shape, ranks);
    if (!(core_std >= 0.0) || !(awgn_std >= 0.0) || !(outlier_std >= 0.0)) {
        throw ArgumentError("recon spec: standard deviations must be nonnegative");
    }
    if (outlier_count > shape_volume(shape)) throw ArgumentError("recon spec: more outliers than tensor entries");
    if (trials == 0) throw ArgumentError("recon spec: trials must be positive");
    if (solvers.empty()) throw ArgumentError("recon spec: no solvers selected");
    solver_config.validate();
}

std::string sweep_param_name(SweepParam p) {
    return p == SweepParam::OutlierStd ? "outlier_std" : "outlier_count";
}

SweepParam parse_sweep_param(const std::string& name) {
    if (name == "outlier_std") return SweepParam::OutlierStd;
    if (name == "outlier_count") return SweepParam::OutlierCount;
    throw ArgumentError("unknown sweep parameter '" + name + "' (expected outlier_std or outlier_count)");
}

TuckerSample gen_tucker_tensor(const ReconExperimentSpec& spec, Rng& rng) {
    validate_ranks(spec.shape, spec.ranks);
    const Shape core_shape(spec.ranks.begin(), spec.ranks.end());
    std::vector<double> core(shape_volume(core_shape));
    for (auto& v : core) v = spec.core_std * rng.gaussian();

    TuckerModel truth;
    truth.ranks = spec.ranks;
    for (std::size_t n = 0; n < spec.shape.size(); ++n) {
        truth.bases.push_back(
            random_stiefel(static_cast<Index>(spec.shape[n]), static_cast<Index>(spec.ranks[n]), rng));
    }
    truth.core = DenseTensor(core_shape, std::move(core));
    DenseTensor x = expand_core(*truth.core, truth.bases);
    return {std::move(x), std::move(truth)};
}

CorruptionStreams CorruptionStreams::for_trial(std::uint64_t seed, std::uint64_t trial) {
    return {Rng::for_stream(seed, trial, Stream::Noise), Rng::for_stream(seed, trial, Stream::OutlierPositions),
            Rng::for_stream(seed, trial, Stream::OutlierValues)};
}

DenseTensor corrupt(const DenseTensor& x, const ReconExperimentSpec& spec, CorruptionStreams& streams) {
    if (spec.outlier_count > x.size()) throw ArgumentError("corrupt: more outliers than entries");
    std::vector<double> data = x.data();
    if (spec.awgn_std > 0.0) {
        for (auto& v : data) v += spec.awgn_std * streams.noise.gaussian();
    }
    if (spec.outlier_count > 0) {
        const auto positions = sample_without_replacement(x.size(), spec.outlier_count, streams.positions);
        for (auto p : positions) {
            const double z = streams.values.gaussian();
            data[p] += spec.outlier_std * z;
        }
    }
    return DenseTensor(x.shape(), std::move(data));
}

double nse(const DenseTensor& x_true, const DenseTensor& x_hat) {
    if (x_true.shape() != x_hat.shape()) throw ArgumentError("nse: shape mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x_true.size(); ++i) {
        const double diff = x_true.data()[i] - x_hat.data()[i];
        num += diff * diff;
        den += x_true.data()[i] * x_true.data()[i];
    }
    if (den == 0.0) throw ArgumentError("nse: reference tensor is zero");
    return num / den;
}

ResultTable run_reconstruction_sweep(const ReconExperimentSpec& spec, const SweepGrid& grid, unsigned threads) {
    spec.validate();
    if (grid.values.empty()) throw ArgumentError("sweep grid is empty");
    std::vector<ReconExperimentSpec> points;
    for (double v : grid.values) {
        ReconExperimentSpec p = spec;
        if (grid.param == SweepParam::OutlierStd) {
            if (!(v >= 0.0)) throw ArgumentError("outlier_std values must be nonnegative");
            p.outlier_std = v;
        } else {
            if (!(v >= 0.0) || v != std::floor(v)) throw ArgumentError("outlier_count values must be integers >= 0");
            p.outlier_count = static_cast<std::size_t>(v);
        }
        p.validate();
        points.push_back(std::move(p));
    }

    const std::size_t n_solvers = spec.solvers.size();
    // nse_values[point][solver][trial]; empty optional marks a failed run.
    std::vector<std::vector<std::vector<std::optional<double>>>> values(
        points.size(), std::vector<std::vector<std::optional<double>>>(n_solvers, std::vector<std::optional<double>>(spec.trials)));

    parallel_for(spec.trials, threads, [&](std::size_t trial) {
        Rng data_rng = Rng::for_stream(spec.seed, trial, Stream::Data);
        const TuckerSample sample = gen_tucker_tensor(spec, data_rng);
        for (std::size_t g = 0; g < points.size(); ++g) {
            CorruptionStreams streams = CorruptionStreams::for_trial(spec.seed, trial);
            const DenseTensor corrupted = corrupt(sample.x, points[g], streams);
            for (std::size_t s = 0; s < n_solvers; ++s) {
                try {
                    const Decomposition d = decompose(spec.solvers[s], corrupted, spec.ranks, spec.solver_config);
                    values[g][s][trial] = nse(sample.x, reconstruct(corrupted, d.model));
                } catch (const Error&) {
                    values[g][s][trial].reset();
                }
            }
        }
    });

    ResultTable table;
    for (std::size_t g = 0; g < points.size(); ++g) {
        for (std::size_t s = 0; s < n_solvers; ++s) {
            std::vector<double> ok;
            for (const auto& v : values[g][s]) {
                if (v) ok.push_back(*v);
            }
            const Summary sum = summarize(ok);
            table.rows.push_back(ResultRow{solver_name(spec.solvers[s]), sweep_param_name(grid.param), grid.values[g],
                                           sum.mean, sum.std_error, sum.count, spec.trials - sum.count});
        }
    }
    table.sort();
    return table;
}

}  // namespace l1tucker::harness
