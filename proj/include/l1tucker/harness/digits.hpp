#pragma once

#include "l1tucker/harness/idx.hpp"
#include "l1tucker/rng.hpp"

#include <cstdint>

namespace l1tucker::harness {

/// Stand-in for handwritten digits when no MNIST files are available.
///
/// Classes 0..4 are stroke skeletons of the digits 0-4 drawn on a 28x28
/// canvas. Every sample perturbs the control points, applies a random
/// rotation/scale/shear/shift, varies the pen width, and renders with an
/// anti-aliased falloff, giving values in [0, 255] with a dark background.
struct SyntheticDigitsConfig {
    std::size_t classes = 5;
    std::size_t per_class = 600;
    std::size_t image_dim = 28;
    std::uint64_t seed = 1;
};

inline constexpr std::size_t kSyntheticDigitClasses = 5;

/// Samples are ordered class by class. Throws if classes exceeds
/// kSyntheticDigitClasses.
[[nodiscard]] LabeledImages synthetic_digits(const SyntheticDigitsConfig& cfg);

/// Renders one sample of `digit` with draws from `rng`.
[[nodiscard]] Matrix render_digit(int digit, std::size_t image_dim, Rng& rng);

}  // namespace l1tucker::harness
