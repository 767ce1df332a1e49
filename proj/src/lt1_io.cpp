#include "l1tucker/lt1_io.hpp"

#include "l1tucker/error.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace l1tucker {

namespace {

constexpr std::array<char, 4> kMagic{'L', 'T', '1', '\0'};
// Refuse headers that would allocate more than 2^31 values.
constexpr std::uint64_t kMaxValues = std::uint64_t{1} << 31;

void put_u32(std::ostream& out, std::uint32_t v) {
    std::array<char, 4> b{};
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    out.write(b.data(), b.size());
}

void put_f64(std::ostream& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    std::array<char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
    out.write(b.data(), b.size());
}

class Reader {
public:
    Reader(std::istream& in, std::uint64_t base) : in_(in), offset_(base) {}

    void bytes(char* dst, std::size_t n, const char* what) {
        in_.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) {
            throw FormatError(std::string("LT1: truncated ") + what, offset_ + static_cast<std::uint64_t>(in_.gcount()));
        }
        offset_ += n;
    }

    std::uint32_t u32(const char* what) {
        std::array<unsigned char, 4> b{};
        bytes(reinterpret_cast<char*>(b.data()), 4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
        return v;
    }

    double f64(const char* what) {
        std::array<unsigned char, 8> b{};
        bytes(reinterpret_cast<char*>(b.data()), 8, what);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        return std::bit_cast<double>(v);
    }

    [[nodiscard]] std::uint64_t offset() const { return offset_; }

private:
    std::istream& in_;
    std::uint64_t offset_;
};

}  // namespace

void write_lt1(std::ostream& out, const DenseTensor& x) {
    out.write(kMagic.data(), kMagic.size());
    put_u32(out, static_cast<std::uint32_t>(x.order()));
    for (auto d : x.shape()) {
        if (d > std::numeric_limits<std::uint32_t>::max()) throw ArgumentError("LT1: dimension exceeds uint32");
        put_u32(out, static_cast<std::uint32_t>(d));
    }
    for (double v : x.data()) put_f64(out, v);
    if (!out) throw IoError("LT1: write failed");
}

DenseTensor read_lt1(std::istream& in, std::uint64_t base_offset) {
    Reader r(in, base_offset);
    std::array<char, 4> magic{};
    r.bytes(magic.data(), magic.size(), "magic");
    if (magic != kMagic) throw FormatError("LT1: bad magic", base_offset);

    const auto order_offset = r.offset();
    const std::uint32_t order = r.u32("order");
    if (order == 0 || order > 64) throw FormatError("LT1: unsupported order " + std::to_string(order), order_offset);

    Shape shape(order);
    std::uint64_t volume = 1;
    for (auto& d : shape) {
        const auto at = r.offset();
        const std::uint32_t v = r.u32("dimension");
        if (v == 0) throw FormatError("LT1: zero dimension", at);
        volume *= v;
        if (volume > kMaxValues) throw FormatError("LT1: tensor too large", at);
        d = v;
    }
    std::vector<double> data(static_cast<std::size_t>(volume));
    for (auto& v : data) v = r.f64("values");
    return DenseTensor(std::move(shape), std::move(data));
}

std::vector<DenseTensor> read_lt1_records(std::istream& in) {
    std::vector<DenseTensor> out;
    std::uint64_t offset = 0;
    while (in.peek() != std::char_traits<char>::eof()) {
        out.push_back(read_lt1(in, offset));
        const auto& t = out.back();
        offset += 8 + 4 * t.order() + 8 * t.size();
    }
    return out;
}

void save_lt1(const std::filesystem::path& path, const DenseTensor& x) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_lt1(out, x);
}

DenseTensor load_lt1(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_lt1(in);
}

}  // namespace l1tucker
