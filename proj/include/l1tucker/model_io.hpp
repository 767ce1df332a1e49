#pragma once

#include "l1tucker/tucker.hpp"

#include <filesystem>
#include <iosfwd>

namespace l1tucker {

// A model file is a run of LT1 records:
//   1. ranks: order-1 tensor of length N holding d_1..d_N as float64
//   2. N bases: order-2 tensors D_n x d_n (column-major, like Eigen)
//   3. optional core: order-N tensor d_1 x ... x d_N

void write_model(std::ostream& out, const TuckerModel& model);
[[nodiscard]] TuckerModel read_model(std::istream& in);

void save_model(const std::filesystem::path& path, const TuckerModel& model);
[[nodiscard]] TuckerModel load_model(const std::filesystem::path& path);

}  // namespace l1tucker
