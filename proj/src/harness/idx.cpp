#include "l1tucker/harness/idx.hpp"

#include "l1tucker/error.hpp"
#include "l1tucker/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace l1tucker::harness {

namespace {

class ByteReader {
public:
    explicit ByteReader(std::istream& in) : in_(in) {}

    std::uint32_t u32(const char* what) {
        std::array<unsigned char, 4> b{};
        read(reinterpret_cast<char*>(b.data()), 4, what);
        return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
    }

    void read(char* dst, std::size_t n, const char* what) {
        in_.read(dst, static_cast<std::streamsize>(n));
        const auto got = static_cast<std::size_t>(in_.gcount());
        if (got != n) throw FormatError(std::string("IDX: truncated ") + what, offset_ + got);
        offset_ += n;
    }

    [[nodiscard]] std::uint64_t offset() const { return offset_; }

private:
    std::istream& in_;
    std::uint64_t offset_ = 0;
};

void put_u32_be(std::ostream& out, std::uint32_t v) {
    const std::array<char, 4> b{static_cast<char>(v >> 24), static_cast<char>((v >> 16) & 0xff),
                                static_cast<char>((v >> 8) & 0xff), static_cast<char>(v & 0xff)};
    out.write(b.data(), 4);
}

}  // namespace

std::vector<Matrix> read_idx_images(std::istream& in) {
    ByteReader r(in);
    const auto magic = r.u32("magic");
    if (magic != kIdxImagesMagic) throw FormatError("IDX: bad image-file magic", 0);
    const auto count = r.u32("image count");
    const auto rows = r.u32("row count");
    const auto cols = r.u32("column count");
    if (rows == 0 || cols == 0) throw FormatError("IDX: zero image dimension", 8);
    if (std::uint64_t{rows} * cols > (1u << 24)) throw FormatError("IDX: image dimensions too large", 8);

    std::vector<Matrix> images;
    images.reserve(std::min<std::uint32_t>(count, 1u << 20));
    std::vector<unsigned char> buf(std::size_t{rows} * cols);
    for (std::uint32_t k = 0; k < count; ++k) {
        r.read(reinterpret_cast<char*>(buf.data()), buf.size(), "pixel data");
        Matrix m(rows, cols);
        for (std::uint32_t i = 0; i < rows; ++i) {
            for (std::uint32_t j = 0; j < cols; ++j) m(i, j) = buf[std::size_t{i} * cols + j];
        }
        images.push_back(std::move(m));
    }
    return images;
}

std::vector<int> read_idx_labels(std::istream& in) {
    ByteReader r(in);
    const auto magic = r.u32("magic");
    if (magic != kIdxLabelsMagic) throw FormatError("IDX: bad label-file magic", 0);
    const auto count = r.u32("label count");
    std::vector<int> labels;
    labels.reserve(std::min<std::uint32_t>(count, 1u << 20));
    for (std::uint32_t k = 0; k < count; ++k) {
        unsigned char b = 0;
        r.read(reinterpret_cast<char*>(&b), 1, "labels");
        labels.push_back(b);
    }
    return labels;
}

std::vector<Matrix> load_idx_images(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_idx_images(in);
}

std::vector<int> load_idx_labels(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_idx_labels(in);
}

void write_idx_images(std::ostream& out, const std::vector<Matrix>& images) {
    const auto rows = images.empty() ? 0 : static_cast<std::uint32_t>(images.front().rows());
    const auto cols = images.empty() ? 0 : static_cast<std::uint32_t>(images.front().cols());
    put_u32_be(out, kIdxImagesMagic);
    put_u32_be(out, static_cast<std::uint32_t>(images.size()));
    put_u32_be(out, rows);
    put_u32_be(out, cols);
    for (const auto& m : images) {
        if (m.rows() != rows || m.cols() != cols) throw ArgumentError("IDX: images must share one size");
        for (Index i = 0; i < m.rows(); ++i) {
            for (Index j = 0; j < m.cols(); ++j) {
                const double v = std::clamp(std::round(m(i, j)), 0.0, 255.0);
                out.put(static_cast<char>(static_cast<unsigned char>(v)));
            }
        }
    }
}

void write_idx_labels(std::ostream& out, const std::vector<int>& labels) {
    put_u32_be(out, kIdxLabelsMagic);
    put_u32_be(out, static_cast<std::uint32_t>(labels.size()));
    for (int l : labels) {
        if (l < 0 || l > 255) throw ArgumentError("IDX: labels must fit in a byte");
        out.put(static_cast<char>(static_cast<unsigned char>(l)));
    }
}

LabeledImages load_labeled_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
    LabeledImages out;
    out.images = load_idx_images(images);
    out.labels = load_idx_labels(labels);
    if (out.images.size() != out.labels.size()) {
        throw FormatError("IDX: " + std::to_string(out.images.size()) + " images but " +
                          std::to_string(out.labels.size()) + " labels");
    }
    if (!out.images.empty()) {
        out.rows = static_cast<std::size_t>(out.images.front().rows());
        out.cols = static_cast<std::size_t>(out.images.front().cols());
    }
    return out;
}

LabeledImages load_mnist_dir(const std::filesystem::path& dir) {
    for (const auto& [img, lbl] : {std::pair{"train-images-idx3-ubyte", "train-labels-idx1-ubyte"},
                                   std::pair{"train-images.idx3-ubyte", "train-labels.idx1-ubyte"}}) {
        if (std::filesystem::exists(dir / img) && std::filesystem::exists(dir / lbl)) {
            return load_labeled_idx(dir / img, dir / lbl);
        }
    }
    throw IoError("no MNIST training files (train-images-idx3-ubyte, train-labels-idx1-ubyte) in " + dir.string());
}

}  // namespace l1tucker::harness
