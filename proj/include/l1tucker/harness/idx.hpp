#pragma once

#include "l1tucker/tensor.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace l1tucker::harness {

/// Grayscale images (values in [0, 255]) with integer class labels.
struct LabeledImages {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Matrix> images;
    std::vector<int> labels;
};

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

// IDX files: big-endian uint32 magic and counts, then raw unsigned bytes.
// Image bytes are row-major within each image.

[[nodiscard]] std::vector<Matrix> read_idx_images(std::istream& in);
[[nodiscard]] std::vector<int> read_idx_labels(std::istream& in);
[[nodiscard]] std::vector<Matrix> load_idx_images(const std::filesystem::path& path);
[[nodiscard]] std::vector<int> load_idx_labels(const std::filesystem::path& path);

/// Pixel values are rounded and clamped to [0, 255].
void write_idx_images(std::ostream& out, const std::vector<Matrix>& images);
void write_idx_labels(std::ostream& out, const std::vector<int>& labels);

/// Pairs an image file with its label file; counts must agree.
[[nodiscard]] LabeledImages load_labeled_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

/// Loads the MNIST training split from `dir` (train-images-idx3-ubyte and
/// train-labels-idx1-ubyte, with or without the '.'-separated variant names).
[[nodiscard]] LabeledImages load_mnist_dir(const std::filesystem::path& dir);

}  // namespace l1tucker::harness
