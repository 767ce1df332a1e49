#pragma once

#include "l1tucker/linalg.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace l1tucker {

/// Named random streams. A trial's generator for a given purpose is seeded
/// from (master seed, trial index, stream id), so every consumer of the same
/// trial sees the same draws no matter which solver or grid point runs first.
enum class Stream : std::uint64_t {
    Data = 1,              ///< Tucker core and bases
    Noise = 2,             ///< dense AWGN
    OutlierPositions = 3,  ///< which entries receive outliers
    OutlierValues = 4,     ///< outlier magnitudes
    CorruptionMasks = 5,   ///< image / pixel corruption decisions and noise
    Sampling = 6,          ///< dataset sample selection
    Init = 7,              ///< random solver initializations
};

/// SplitMix64 finalizer.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x) noexcept;

[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial, Stream stream) noexcept;

/// mt19937_64 with portable conversions: uniforms take the top 53 bits,
/// Gaussians use the Box-Muller transform, bounded integers use rejection.
/// None of the std:: distributions are used, since their output is not
/// specified across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    static Rng for_stream(std::uint64_t seed, std::uint64_t trial, Stream stream) {
        return Rng(derive_seed(seed, trial, stream));
    }

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double gaussian();
    double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }
    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

/// i.i.d. N(0, 1) entries, filled column by column.
[[nodiscard]] Matrix gaussian_matrix(Index rows, Index cols, Rng& rng);

/// Orthonormalized Gaussian matrix (QR with positive R diagonal), which is
/// Haar-distributed on the Stiefel manifold.
[[nodiscard]] StiefelBasis random_stiefel(Index rows, Index cols, Rng& rng);

/// First k entries of a partial Fisher-Yates shuffle of 0..n-1. For a fixed
/// stream, the result for k is a prefix of the result for any k' > k.
[[nodiscard]] std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng);

}  // namespace l1tucker
