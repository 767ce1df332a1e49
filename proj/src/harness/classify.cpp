#include "l1tucker/harness/classify.hpp"

#include "l1tucker/error.hpp"
#include "l1tucker/harness/parallel.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace l1tucker::harness {

std::string method_name(ClassMethod m) {
    switch (m) {
        case ClassMethod::Hosvd: return "hosvd";
        case ClassMethod::Hooi: return "hooi";
        case ClassMethod::L1Hosvd: return "l1-hosvd";
        case ClassMethod::L1Hooi: return "l1-hooi";
        case ClassMethod::Pca: return "pca";
        case ClassMethod::L1Pca: return "l1-pca";
        case ClassMethod::Nn: return "nn";
    }
    return "unknown";
}

ClassMethod parse_method(const std::string& name) {
    for (ClassMethod m : kAllClassMethods) {
        if (method_name(m) == name) return m;
    }
    throw ArgumentError("unknown classification method '" + name + "'");
}

std::string class_sweep_param_name(ClassSweepParam p) {
    switch (p) {
        case ClassSweepParam::Alpha: return "alpha";
        case ClassSweepParam::Beta: return "beta";
        case ClassSweepParam::Rank: return "rank";
    }
    return "unknown";
}

ClassSweepParam parse_class_sweep_param(const std::string& name) {
    if (name == "alpha") return ClassSweepParam::Alpha;
    if (name == "beta") return ClassSweepParam::Beta;
    if (name == "rank") return ClassSweepParam::Rank;
    throw ArgumentError("unknown sweep parameter '" + name + "' (expected alpha, beta or rank)");
}

void ClassifyExperimentSpec::validate() const {
    if (classes == 0 || samples_per_class == 0 || test_per_class == 0 || trials == 0) {
        throw ArgumentError("classify spec: counts must be positive");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0)) {
        throw ArgumentError("classify spec: alpha and beta must lie in [0, 1]");
    }
    if (!(noise_ratio > 0.0)) throw ArgumentError("classify spec: noise_ratio must be positive");
    if (rank == 0 || rank > image_dim) throw ArgumentError("classify spec: rank must lie in [1, image_dim]");
    if (methods.empty()) throw ArgumentError("classify spec: no methods selected");
    solver_config.validate();
}

double uniform_noise_amplitude(const DenseTensor& clean, double noise_ratio) {
    if (!(noise_ratio > 0.0)) throw ArgumentError("noise_ratio must be positive");
    const double f = frobenius_norm(clean);
    const double w = std::sqrt(f * f / static_cast<double>(clean.size()));
    return std::sqrt(3.0) * w / noise_ratio;
}

DenseTensor corrupt_training(const DenseTensor& x, double alpha, double beta, double amplitude, Rng& rng) {
    if (x.order() != 3) throw ArgumentError("corrupt_training: expected a D x D x M tensor");
    const std::size_t pixels = x.dim(0) * x.dim(1);
    std::vector<double> data = x.data();
    for (std::size_t j = 0; j < x.dim(2); ++j) {
        const bool hit = rng.uniform() < alpha;
        double* img = data.data() + j * pixels;
        for (std::size_t p = 0; p < pixels; ++p) {
            const double mask = rng.uniform();
            const double noise = amplitude * rng.uniform();
            if (hit && mask < beta) img[p] += noise;
        }
    }
    return DenseTensor(x.shape(), std::move(data));
}

int nearest_neighbor(const Matrix& train, const std::vector<int>& labels, const Vector& z) {
    if (train.cols() == 0 || static_cast<std::size_t>(train.cols()) != labels.size() || train.rows() != z.size()) {
        throw ArgumentError("nearest_neighbor: inconsistent training data");
    }
    double best = std::numeric_limits<double>::infinity();
    Index pick = 0;
    for (Index j = 0; j < train.cols(); ++j) {
        const double d = (train.col(j) - z).squaredNorm();
        if (d < best) {
            best = d;
            pick = j;
        }
    }
    return labels[static_cast<std::size_t>(pick)];
}

Vector Compressor::features(const Matrix& image) const {
    switch (kind) {
        case Kind::Bilinear: {
            const Matrix z = left.transpose() * image * right;
            return Eigen::Map<const Vector>(z.data(), z.size());
        }
        case Kind::Linear: return right.transpose() * Eigen::Map<const Vector>(image.data(), image.size());
        case Kind::Identity: return Eigen::Map<const Vector>(image.data(), image.size());
    }
    return {};
}

namespace {

Matrix vectorized_samples(const DenseTensor& train) {
    const auto pixels = static_cast<Index>(train.dim(0) * train.dim(1));
    return Eigen::Map<const Matrix>(train.data().data(), pixels, static_cast<Index>(train.dim(2)));
}

Matrix image_at(const DenseTensor& train, std::size_t j) {
    const auto rows = static_cast<Index>(train.dim(0));
    const auto cols = static_cast<Index>(train.dim(1));
    return Eigen::Map<const Matrix>(train.data().data() + j * train.dim(0) * train.dim(1), rows, cols);
}

}  // namespace

Compressor fit_compressor(ClassMethod method, const DenseTensor& train, std::size_t rank, const HooiConfig& cfg) {
    if (train.order() != 3) throw ArgumentError("fit_compressor: expected a D x D x M tensor");
    Compressor c;
    auto bilinear = [&](Solver solver) {
        const Ranks ranks{rank, rank, train.dim(2)};
        const Decomposition d = decompose(solver, train, ranks, cfg);
        c.kind = Compressor::Kind::Bilinear;
        c.left = d.model.bases[0].matrix();
        c.right = d.model.bases[1].matrix();
    };
    const auto components = static_cast<Index>(std::min(rank * rank, train.dim(2)));
    switch (method) {
        case ClassMethod::Hosvd: bilinear(Solver::Hosvd); break;
        case ClassMethod::Hooi: bilinear(Solver::Hooi); break;
        case ClassMethod::L1Hosvd: bilinear(Solver::L1Hosvd); break;
        case ClassMethod::L1Hooi: bilinear(Solver::L1Hooi); break;
        case ClassMethod::Pca:
            c.kind = Compressor::Kind::Linear;
            c.right = top_d_left_basis(vectorized_samples(train), components).matrix();
            break;
        case ClassMethod::L1Pca: {
            const Matrix v = vectorized_samples(train);
            c.kind = Compressor::Kind::Linear;
            c.right = l1pca_ao(v, top_d_left_basis(v, components), cfg.inner).basis.matrix();
            break;
        }
        case ClassMethod::Nn: c.kind = Compressor::Kind::Identity; break;
    }
    return c;
}

double classify_accuracy(const Compressor& compressor, const DenseTensor& train, const std::vector<int>& train_labels,
                         const std::vector<Matrix>& test, const std::vector<int>& test_labels) {
    if (test.size() != test_labels.size() || test.empty()) throw ArgumentError("classify: test labels do not match");
    const std::size_t m = train.dim(2);
    Matrix features;
    for (std::size_t j = 0; j < m; ++j) {
        const Vector f = compressor.features(image_at(train, j));
        if (j == 0) features.resize(f.size(), static_cast<Index>(m));
        features.col(static_cast<Index>(j)) = f;
    }
    std::size_t correct = 0;
    for (std::size_t k = 0; k < test.size(); ++k) {
        if (nearest_neighbor(features, train_labels, compressor.features(test[k])) == test_labels[k]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(test.size());
}

ResultTable run_classification(const ClassifyExperimentSpec& spec, const ClassSweep& sweep,
                               const LabeledImages& dataset, unsigned threads) {
    spec.validate();
    if (sweep.values.empty()) throw ArgumentError("sweep grid is empty");
    if (dataset.rows != spec.image_dim || dataset.cols != spec.image_dim) {
        throw ArgumentError("dataset images are " + std::to_string(dataset.rows) + "x" + std::to_string(dataset.cols) +
                            ", spec expects " + std::to_string(spec.image_dim) + "x" + std::to_string(spec.image_dim));
    }
    std::vector<std::vector<std::size_t>> by_class(spec.classes);
    for (std::size_t i = 0; i < dataset.labels.size(); ++i) {
        const int l = dataset.labels[i];
        if (l >= 0 && static_cast<std::size_t>(l) < spec.classes) by_class[static_cast<std::size_t>(l)].push_back(i);
    }
    const std::size_t need = spec.samples_per_class + spec.test_per_class;
    for (std::size_t c = 0; c < spec.classes; ++c) {
        if (by_class[c].size() < need) {
            throw ArgumentError("class " + std::to_string(c) + " has " + std::to_string(by_class[c].size()) +
                                " images, need " + std::to_string(need));
        }
    }

    std::vector<ClassifyExperimentSpec> points;
    for (double v : sweep.values) {
        ClassifyExperimentSpec p = spec;
        switch (sweep.param) {
            case ClassSweepParam::Alpha: p.alpha = v; break;
            case ClassSweepParam::Beta: p.beta = v; break;
            case ClassSweepParam::Rank:
                if (!(v >= 1.0) || v != std::floor(v)) throw ArgumentError("rank values must be positive integers");
                p.rank = static_cast<std::size_t>(v);
                break;
        }
        p.validate();
        points.push_back(std::move(p));
    }

    const std::size_t n_methods = spec.methods.size();
    std::vector<std::vector<std::vector<std::optional<double>>>> acc(
        points.size(), std::vector<std::vector<std::optional<double>>>(n_methods, std::vector<std::optional<double>>(spec.trials)));

    const std::size_t d = spec.image_dim;
    const std::size_t m_total = spec.classes * spec.samples_per_class;

    parallel_for(spec.trials, threads, [&](std::size_t trial) {
        Rng sampling = Rng::for_stream(spec.seed, trial, Stream::Sampling);
        std::vector<double> train_data;
        train_data.reserve(d * d * m_total);
        std::vector<int> train_labels;
        std::vector<Matrix> test;
        std::vector<int> test_labels;
        for (std::size_t c = 0; c < spec.classes; ++c) {
            const auto pick = sample_without_replacement(by_class[c].size(), need, sampling);
            for (std::size_t k = 0; k < need; ++k) {
                const Matrix& img = dataset.images[by_class[c][pick[k]]];
                if (k < spec.samples_per_class) {
                    train_data.insert(train_data.end(), img.data(), img.data() + img.size());
                    train_labels.push_back(static_cast<int>(c));
                } else {
                    test.push_back(img);
                    test_labels.push_back(static_cast<int>(c));
                }
            }
        }
        const DenseTensor clean({d, d, m_total}, std::move(train_data));
        const double amplitude = uniform_noise_amplitude(clean, spec.noise_ratio);

        for (std::size_t g = 0; g < points.size(); ++g) {
            Rng masks = Rng::for_stream(spec.seed, trial, Stream::CorruptionMasks);
            const DenseTensor train = corrupt_training(clean, points[g].alpha, points[g].beta, amplitude, masks);
            for (std::size_t k = 0; k < n_methods; ++k) {
                try {
                    const Compressor comp = fit_compressor(spec.methods[k], train, points[g].rank, spec.solver_config);
                    acc[g][k][trial] = classify_accuracy(comp, train, train_labels, test, test_labels);
                } catch (const Error&) {
                    acc[g][k][trial].reset();
                }
            }
        }
    });

    ResultTable table;
    for (std::size_t g = 0; g < points.size(); ++g) {
        for (std::size_t k = 0; k < n_methods; ++k) {
            std::vector<double> ok;
            for (const auto& v : acc[g][k]) {
                if (v) ok.push_back(*v);
            }
            const Summary s = summarize(ok);
            table.rows.push_back(ResultRow{method_name(spec.methods[k]), class_sweep_param_name(sweep.param),
                                           sweep.values[g], s.mean, s.std_error, s.count, spec.trials - s.count});
        }
    }
    table.sort();
    return table;
}

}  // namespace l1tucker::harness
