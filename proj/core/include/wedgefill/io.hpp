#pragma once

#include <string>

#include "wedgefill/array2.hpp"
#include "wedgefill/types.hpp"

namespace wedgefill {

// Binary field format: 16-byte header (magic "TOMO", u32 rows, u32 cols,
// u32 dtype tag) followed by row-major little-endian float32 samples.
// dtype tag 0 = float32.

void write_binary(const std::string& path, const Array2& a);
Array2 read_binary(const std::string& path);

void write_csv(const std::string& path, const Array2& a);
Array2 read_csv(const std::string& path);

/// Masks serialize as CSV of 0/1.
void write_mask_csv(const std::string& path, const SampleMask& m);

/// 8-bit PGM render with linear scaling; records the scaling window so
/// the render stays invertible.
void write_pgm(const std::string& path, const Array2& a, double* recorded_min = nullptr,
               double* recorded_max = nullptr);

}  // namespace wedgefill
