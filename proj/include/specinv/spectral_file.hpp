// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "specinv/inversion.hpp"
#include "specinv/stft.hpp"

namespace specinv {

// Magnitude file, little-endian:
//   "MSPC" | u32 version (1) | u32 F | u32 T | u32 J
//   J * T * F float32 values, source by source, frame by frame.
inline constexpr char kMagnitudeMagic[4] = {'M', 'S', 'P', 'C'};
inline constexpr std::uint32_t kMagnitudeVersion = 1;

void WriteMagnitudes(std::ostream& out, const MagnitudeSet& magnitudes);
void WriteMagnitudes(const std::filesystem::path& path, const MagnitudeSet& magnitudes);
/// Throws DataError on a bad header, a short payload or negative values.
MagnitudeSet ReadMagnitudes(std::istream& in);
MagnitudeSet ReadMagnitudes(const std::filesystem::path& path);

// Complex spectrogram file, little-endian:
//   "CSPC" | u32 version (1) | u32 F | u32 T | u32 J
//   | u32 win_len | u32 hop | u32 dft_size | u32 window (0 Hann, 1 sqrt-Hann)
//   | f64 sample_rate
//   J * T * F pairs of float64 (re, im), source by source, frame by frame.
inline constexpr char kComplexMagic[4] = {'C', 'S', 'P', 'C'};
inline constexpr std::uint32_t kComplexVersion = 1;

void WriteSpectrograms(std::ostream& out, const std::vector<Spectrogram>& spectra);
void WriteSpectrograms(const std::filesystem::path& path,
                       const std::vector<Spectrogram>& spectra);
std::vector<Spectrogram> ReadSpectrograms(std::istream& in);
std::vector<Spectrogram> ReadSpectrograms(const std::filesystem::path& path);

}  // namespace specinv
