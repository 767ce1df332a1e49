#pragma once

#include "l1tucker/harness/idx.hpp"
#include "l1tucker/harness/results.hpp"
#include "l1tucker/rng.hpp"
#include "l1tucker/tucker.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace l1tucker::harness {

/// Compression front ends compared by the classification study. The four
/// Tucker methods decompose the D x D x M training tensor with ranks
/// (d, d, M); Pca / L1Pca project vectorized images onto min(d^2, M)
/// components; Nn classifies raw vectorized pixels.
enum class ClassMethod { Hosvd, Hooi, L1Hosvd, L1Hooi, Pca, L1Pca, Nn };

inline constexpr ClassMethod kAllClassMethods[] = {ClassMethod::Hosvd, ClassMethod::Hooi, ClassMethod::L1Hosvd,
                                                   ClassMethod::L1Hooi, ClassMethod::Pca, ClassMethod::L1Pca,
                                                   ClassMethod::Nn};

[[nodiscard]] std::string method_name(ClassMethod m);  // "hosvd", ..., "pca", "l1-pca", "nn"
[[nodiscard]] ClassMethod parse_method(const std::string& name);

/// Training images are corrupted (test images never are): each image with
/// probability alpha, then each of its pixels with probability beta, by
/// additive noise n ~ unif(0, v). With w^2 the mean squared pixel of the
/// clean training tensor, v is chosen so that w / sqrt(E[n^2]) equals
/// noise_ratio, i.e. v = sqrt(3) * w / noise_ratio.
struct ClassifyExperimentSpec {
    std::size_t classes = 5;
    std::size_t samples_per_class = 10;
    std::size_t image_dim = 28;
    std::size_t rank = 5;
    double alpha = 0.2;
    double beta = 0.8;
    double noise_ratio = 10.0;
    std::size_t test_per_class = 100;
    std::size_t trials = 50;
    std::uint64_t seed = 1;
    std::vector<ClassMethod> methods{std::begin(kAllClassMethods), std::end(kAllClassMethods)};
    HooiConfig solver_config{};

    void validate() const;
};

enum class ClassSweepParam { Alpha, Beta, Rank };

[[nodiscard]] std::string class_sweep_param_name(ClassSweepParam p);  // "alpha" / "beta" / "rank"
[[nodiscard]] ClassSweepParam parse_class_sweep_param(const std::string& name);

struct ClassSweep {
    ClassSweepParam param = ClassSweepParam::Alpha;
    std::vector<double> values;
};

/// v = sqrt(3) * w / noise_ratio with w^2 = ||X||_F^2 / size(X).
[[nodiscard]] double uniform_noise_amplitude(const DenseTensor& clean, double noise_ratio);

/// Corrupts the D x D x M training tensor. For every image the generator
/// yields one image draw followed by two draws per pixel (mask, noise) in
/// storage order, whether or not they are used, so corruption sets are
/// nested as alpha or beta grow.
[[nodiscard]] DenseTensor corrupt_training(const DenseTensor& x, double alpha, double beta, double amplitude, Rng& rng);

/// Label of the nearest training column (squared Euclidean). Ties go to the
/// earliest column; callers order columns by class, then sample.
[[nodiscard]] int nearest_neighbor(const Matrix& train, const std::vector<int>& labels, const Vector& z);

/// Feature extractor fitted on a training tensor.
struct Compressor {
    enum class Kind { Bilinear, Linear, Identity } kind = Kind::Identity;
    Matrix left;   ///< Bilinear: U1 (D x d)
    Matrix right;  ///< Bilinear: U2 (D x d); Linear: U (D^2 x k)

    [[nodiscard]] Vector features(const Matrix& image) const;
};

/// Fits the compressor of `method` on `train` (D x D x M).
[[nodiscard]] Compressor fit_compressor(ClassMethod method, const DenseTensor& train, std::size_t rank,
                                        const HooiConfig& cfg);

/// Accuracy of 1-NN on compressed features. Test images are D x D.
[[nodiscard]] double classify_accuracy(const Compressor& compressor, const DenseTensor& train,
                                       const std::vector<int>& train_labels, const std::vector<Matrix>& test,
                                       const std::vector<int>& test_labels);

/// Monte-Carlo classification study over the sweep. Each trial draws
/// disjoint training and test samples per class from `dataset` (classes are
/// labels 0..C-1), corrupts the training tensor per grid point with the
/// trial's CorruptionMasks stream, and scores every method.
[[nodiscard]] ResultTable run_classification(const ClassifyExperimentSpec& spec, const ClassSweep& sweep,
                                             const LabeledImages& dataset, unsigned threads = 1);

}  // namespace l1tucker::harness
