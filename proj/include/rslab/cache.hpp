#pragma once

#include <filesystem>

#include "rslab/coefficients.hpp"
#include "rslab/d4.hpp"

namespace rslab {

// Binary caches, all little-endian:
//   "RST1" + u64 limit + limit x two's-complement 128-bit tau values
//   "RSC1" + u64 limit + limit doubles lambda + limit c + limit prefix
//   "RSD4" + u64 limit + limit u64 d4 values + limit doubles prefix
// Loads validate magic bytes and payload length and throw cache_error on
// mismatch so corruption is distinguishable from build failures.

void save_tau(const std::filesystem::path& path, const tau_table& table);
tau_table load_tau(const std::filesystem::path& path);

void save_coefficients(const std::filesystem::path& path, const coefficient_table& table);
coefficient_table load_coefficients(const std::filesystem::path& path);

void save_d4(const std::filesystem::path& path, const d4_table& table);
d4_table load_d4(const std::filesystem::path& path);

}  // namespace rslab
