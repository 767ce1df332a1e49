#include "l1tucker/model_io.hpp"

#include "l1tucker/error.hpp"
#include "l1tucker/lt1_io.hpp"

#include <cmath>
#include <fstream>
#include <string>

namespace l1tucker {

void write_model(std::ostream& out, const TuckerModel& model) {
    if (model.ranks.size() != model.bases.size()) throw ArgumentError("model ranks do not match bases");
    const std::size_t n = model.ranks.size();
    write_lt1(out, DenseTensor({n}, std::vector<double>(model.ranks.begin(), model.ranks.end())));
    for (const auto& b : model.bases) {
        const Matrix& m = b.matrix();
        write_lt1(out, DenseTensor({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())},
                                   std::vector<double>(m.data(), m.data() + m.size())));
    }
    if (model.core) write_lt1(out, *model.core);
}

TuckerModel read_model(std::istream& in) {
    std::vector<DenseTensor> records = read_lt1_records(in);
    if (records.empty()) throw FormatError("model: empty file", 0);
    const DenseTensor& header = records.front();
    if (header.order() != 1) throw FormatError("model: first record must hold the ranks");

    TuckerModel model;
    for (double r : header.data()) {
        if (!(r >= 1.0) || r != std::floor(r)) throw FormatError("model: ranks must be positive integers");
        model.ranks.push_back(static_cast<std::size_t>(r));
    }
    const std::size_t n = model.ranks.size();
    if (records.size() != n + 1 && records.size() != n + 2) {
        throw FormatError("model: expected " + std::to_string(n) + " basis records and an optional core, found " +
                          std::to_string(records.size() - 1) + " records");
    }
    for (std::size_t k = 0; k < n; ++k) {
        const DenseTensor& rec = records[k + 1];
        if (rec.order() != 2 || rec.dim(1) != model.ranks[k]) {
            throw FormatError("model: basis record " + std::to_string(k) + " does not match rank");
        }
        Matrix m = Eigen::Map<const Matrix>(rec.data().data(), static_cast<Index>(rec.dim(0)),
                                            static_cast<Index>(rec.dim(1)));
        try {
            model.bases.emplace_back(std::move(m));
        } catch (const ArgumentError& e) {
            throw FormatError("model: basis " + std::to_string(k) + ": " + e.what());
        }
    }
    if (records.size() == n + 2) {
        const DenseTensor& core = records.back();
        if (core.shape() != Shape(model.ranks.begin(), model.ranks.end())) {
            throw FormatError("model: core shape does not match ranks");
        }
        model.core = core;
    }
    return model;
}

void save_model(const std::filesystem::path& path, const TuckerModel& model) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_model(out, model);
}

TuckerModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_model(in);
}

}  // namespace l1tucker
