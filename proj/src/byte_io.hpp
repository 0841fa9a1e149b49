// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Little-endian scalar I/O shared by the file formats.

#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "specinv/error.hpp"

namespace specinv::internal {

template <typename UInt>
void PutLe(std::ostream& out, UInt value) {
  char bytes[sizeof(UInt)];
  for (std::size_t i = 0; i < sizeof(UInt); ++i)
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  out.write(bytes, sizeof(UInt));
}

template <typename UInt>
UInt GetLe(std::istream& in, const char* what) {
  unsigned char bytes[sizeof(UInt)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(UInt)))
    throw DataError(std::string("unexpected end of file reading ") + what);
  UInt value = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) value |= UInt(bytes[i]) << (8 * i);
  return value;
}

inline void PutF32(std::ostream& out, float v) { PutLe(out, std::bit_cast<std::uint32_t>(v)); }
inline void PutF64(std::ostream& out, double v) { PutLe(out, std::bit_cast<std::uint64_t>(v)); }
inline float GetF32(std::istream& in, const char* what) {
  return std::bit_cast<float>(GetLe<std::uint32_t>(in, what));
}
inline double GetF64(std::istream& in, const char* what) {
  return std::bit_cast<double>(GetLe<std::uint64_t>(in, what));
}

}  // namespace specinv::internal
