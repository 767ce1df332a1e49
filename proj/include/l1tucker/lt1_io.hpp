#pragma once

#include "l1tucker/tensor.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace l1tucker {

// LT1 tensor container:
//   bytes 0..3   magic "LT1\0"
//   uint32 LE    order N
//   N x uint32   dimensions D_1..D_N
//   P x float64  values, first index fastest (P = prod D_n)
// Everything is little-endian regardless of host byte order.

void write_lt1(std::ostream& out, const DenseTensor& x);

/// Reads exactly one record. Throws FormatError (with byte offset relative to
/// `base_offset`) on bad magic or truncation.
[[nodiscard]] DenseTensor read_lt1(std::istream& in, std::uint64_t base_offset = 0);

/// Reads records back to back until end of stream. Used for model files.
[[nodiscard]] std::vector<DenseTensor> read_lt1_records(std::istream& in);

void save_lt1(const std::filesystem::path& path, const DenseTensor& x);
[[nodiscard]] DenseTensor load_lt1(const std::filesystem::path& path);

}  // namespace l1tucker
