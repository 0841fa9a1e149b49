// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "specinv/spectral_file.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "byte_io.hpp"
#include "specinv/error.hpp"

namespace specinv {
namespace {

using internal::GetLe;
using internal::PutLe;

std::uint32_t Narrow(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max())
    throw ShapeError(std::string(what) + " does not fit the file header");
  return static_cast<std::uint32_t>(v);
}

void ReadHeader(std::istream& in, const char (&magic)[4], std::uint32_t version) {
  char got[4];
  if (!in.read(got, 4)) throw DataError("file too short for a header");
  if (std::memcmp(got, magic, 4) != 0)
    throw DataError("bad magic, expected '" + std::string(magic, 4) + "'");
  const std::uint32_t v = GetLe<std::uint32_t>(in, "version");
  if (v != version) throw DataError("unsupported file version " + std::to_string(v));
}

template <typename Fn>
auto OpenAndRead(const std::filesystem::path& path, Fn read) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return read(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

template <typename Fn>
void OpenAndWrite(const std::filesystem::path& path, Fn write) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write(out);
  if (!out) throw DataError("write failed for " + path.string());
}

void ExpectEnd(std::istream& in) {
  if (in.peek() != std::char_traits<char>::eof()) throw DataError("trailing bytes after payload");
}

}  // namespace

void WriteMagnitudes(std::ostream& out, const MagnitudeSet& magnitudes) {
  out.write(kMagnitudeMagic, 4);
  PutLe(out, kMagnitudeVersion);
  PutLe(out, Narrow(magnitudes.num_bins(), "bin count"));
  PutLe(out, Narrow(magnitudes.num_frames(), "frame count"));
  PutLe(out, Narrow(magnitudes.num_sources(), "source count"));
  for (const RealMatrix& m : magnitudes.sources())
    for (double v : m.data()) internal::PutF32(out, static_cast<float>(v));
}

MagnitudeSet ReadMagnitudes(std::istream& in) {
  ReadHeader(in, kMagnitudeMagic, kMagnitudeVersion);
  const std::uint32_t bins = GetLe<std::uint32_t>(in, "F");
  const std::uint32_t frames = GetLe<std::uint32_t>(in, "T");
  const std::uint32_t sources = GetLe<std::uint32_t>(in, "J");
  if (bins == 0 || frames == 0 || sources == 0) throw DataError("empty magnitude file");
  std::vector<RealMatrix> matrices;
  for (std::uint32_t j = 0; j < sources; ++j) {
    RealMatrix m(bins, frames);
    for (double& v : m.data()) v = internal::GetF32(in, "magnitude payload");
    matrices.push_back(std::move(m));
  }
  ExpectEnd(in);
  return MagnitudeSet(std::move(matrices));
}

void WriteMagnitudes(const std::filesystem::path& path, const MagnitudeSet& magnitudes) {
  OpenAndWrite(path, [&](std::ostream& out) { WriteMagnitudes(out, magnitudes); });
}

MagnitudeSet ReadMagnitudes(const std::filesystem::path& path) {
  return OpenAndRead(path, [](std::istream& in) { return ReadMagnitudes(in); });
}

void WriteSpectrograms(std::ostream& out, const std::vector<Spectrogram>& spectra) {
  if (spectra.empty()) throw ShapeError("no spectrograms to write");
  const Spectrogram& first = spectra.front();
  for (const auto& s : spectra)
    if (s.config() != first.config() || s.num_frames() != first.num_frames())
      throw ShapeError("spectrograms in one file must share config and frame count");
  const StftConfig& c = first.config();
  out.write(kComplexMagic, 4);
  PutLe(out, kComplexVersion);
  PutLe(out, Narrow(first.num_bins(), "bin count"));
  PutLe(out, Narrow(first.num_frames(), "frame count"));
  PutLe(out, Narrow(spectra.size(), "source count"));
  PutLe(out, Narrow(c.win_len, "win_len"));
  PutLe(out, Narrow(c.hop, "hop"));
  PutLe(out, Narrow(c.dft_size, "dft_size"));
  PutLe<std::uint32_t>(out, c.window_kind == WindowKind::kHannPeriodic ? 0 : 1);
  internal::PutF64(out, c.sample_rate);
  for (const auto& s : spectra)
    for (const Complex& v : s.data()) {
      internal::PutF64(out, v.real());
      internal::PutF64(out, v.imag());
    }
}

std::vector<Spectrogram> ReadSpectrograms(std::istream& in) {
  ReadHeader(in, kComplexMagic, kComplexVersion);
  const std::uint32_t bins = GetLe<std::uint32_t>(in, "F");
  const std::uint32_t frames = GetLe<std::uint32_t>(in, "T");
  const std::uint32_t sources = GetLe<std::uint32_t>(in, "J");
  StftConfig config;
  config.win_len = GetLe<std::uint32_t>(in, "win_len");
  config.hop = GetLe<std::uint32_t>(in, "hop");
  config.dft_size = GetLe<std::uint32_t>(in, "dft_size");
  const std::uint32_t window = GetLe<std::uint32_t>(in, "window");
  if (window > 1) throw DataError("unknown window id " + std::to_string(window));
  config.window_kind = window == 0 ? WindowKind::kHannPeriodic : WindowKind::kSqrtHannPeriodic;
  config.sample_rate = internal::GetF64(in, "sample rate");
  try {
    config.Validate();
  } catch (const ConfigError& e) {
    throw DataError(std::string("invalid STFT config in header: ") + e.what());
  }
  if (bins != config.num_bins()) throw DataError("bin count does not match dft_size");
  if (frames == 0 || sources == 0) throw DataError("empty spectrogram file");
  std::vector<Spectrogram> spectra;
  for (std::uint32_t j = 0; j < sources; ++j) {
    Spectrogram s(config, frames);
    for (Complex& v : s.data()) {
      const double re = internal::GetF64(in, "spectrogram payload");
      const double im = internal::GetF64(in, "spectrogram payload");
      if (!std::isfinite(re) || !std::isfinite(im)) throw DataError("non-finite spectrogram value");
      v = {re, im};
    }
    spectra.push_back(std::move(s));
  }
  ExpectEnd(in);
  return spectra;
}

void WriteSpectrograms(const std::filesystem::path& path,
                       const std::vector<Spectrogram>& spectra) {
  OpenAndWrite(path, [&](std::ostream& out) { WriteSpectrograms(out, spectra); });
}

std::vector<Spectrogram> ReadSpectrograms(const std::filesystem::path& path) {
  return OpenAndRead(path, [](std::istream& in) { return ReadSpectrograms(in); });
}

}  // namespace specinv
