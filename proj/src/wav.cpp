// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "specinv/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "byte_io.hpp"
#include "specinv/error.hpp"

namespace specinv {
namespace {

using internal::GetLe;
using internal::PutLe;

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xfffe;

std::string ReadTag(std::istream& in) {
  char tag[4];
  if (!in.read(tag, 4)) throw DataError("unexpected end of file reading a chunk id");
  return std::string(tag, 4);
}

}  // namespace

WavAudio ReadWav(std::istream& in) {
  if (ReadTag(in) != "RIFF") throw DataError("not a RIFF file");
  GetLe<std::uint32_t>(in, "RIFF size");
  if (ReadTag(in) != "WAVE") throw DataError("not a WAVE file");

  bool have_format = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  for (;;) {
    const std::string id = ReadTag(in);
    const std::uint32_t size = GetLe<std::uint32_t>(in, "chunk size");
    if (id == "fmt ") {
      if (size < 16) throw DataError("fmt chunk too short");
      format = GetLe<std::uint16_t>(in, "format tag");
      channels = GetLe<std::uint16_t>(in, "channel count");
      rate = GetLe<std::uint32_t>(in, "sample rate");
      GetLe<std::uint32_t>(in, "byte rate");
      GetLe<std::uint16_t>(in, "block align");
      bits = GetLe<std::uint16_t>(in, "bits per sample");
      std::uint32_t consumed = 16;
      if (format == kFormatExtensible && size >= 40) {
        GetLe<std::uint16_t>(in, "extension size");
        GetLe<std::uint16_t>(in, "valid bits");
        GetLe<std::uint32_t>(in, "channel mask");
        // The first two bytes of the subformat GUID carry the format tag.
        format = GetLe<std::uint16_t>(in, "subformat");
        consumed = 26;
      }
      in.ignore(size - consumed + (size & 1));
      have_format = true;
      continue;
    }
    if (id != "data") {
      in.ignore(size + (size & 1));
      if (!in) throw DataError("truncated chunk '" + id + "'");
      continue;
    }
    if (!have_format) throw DataError("data chunk before fmt chunk");
    if (channels != 1)
      throw DataError("only mono WAV is supported (file has " + std::to_string(channels) +
                      " channels)");
    if (rate == 0) throw DataError("WAV sample rate is zero");

    WavAudio audio;
    std::vector<double> samples;
    if (format == kFormatPcm && bits == 16) {
      audio.format = SampleFormat::kPcm16;
      samples.resize(size / 2);
      for (double& s : samples)
        s = static_cast<std::int16_t>(GetLe<std::uint16_t>(in, "PCM sample")) / 32768.0;
    } else if (format == kFormatFloat && bits == 32) {
      audio.format = SampleFormat::kFloat32;
      samples.resize(size / 4);
      for (double& s : samples) s = internal::GetF32(in, "float sample");
    } else {
      throw DataError("unsupported WAV encoding (format " + std::to_string(format) + ", " +
                      std::to_string(bits) + " bits); use PCM16 or float32");
    }
    audio.signal = TimeSignal(std::move(samples), rate);
    return audio;
  }
}

WavAudio ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return ReadWav(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void WriteWav(std::ostream& out, const TimeSignal& signal, SampleFormat format) {
  const double rate = signal.sample_rate();
  if (!(rate > 0) || rate != std::round(rate) || rate > 4294967295.0)
    throw DataError("WAV needs a positive integer sample rate");
  const std::uint16_t bits = format == SampleFormat::kPcm16 ? 16 : 32;
  const std::uint16_t block = bits / 8;
  const std::uint32_t data_size = static_cast<std::uint32_t>(signal.size() * block);
  out.write("RIFF", 4);
  PutLe<std::uint32_t>(out, 36 + data_size);
  out.write("WAVEfmt ", 8);
  PutLe<std::uint32_t>(out, 16);
  PutLe<std::uint16_t>(out, format == SampleFormat::kPcm16 ? kFormatPcm : kFormatFloat);
  PutLe<std::uint16_t>(out, 1);
  PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(rate));
  PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(rate) * block);
  PutLe<std::uint16_t>(out, block);
  PutLe<std::uint16_t>(out, bits);
  out.write("data", 4);
  PutLe<std::uint32_t>(out, data_size);
  for (double s : signal.samples()) {
    if (format == SampleFormat::kPcm16) {
      const double q = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
      PutLe<std::uint16_t>(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    } else {
      internal::PutF32(out, static_cast<float>(s));
    }
  }
}

void WriteWav(const std::filesystem::path& path, const TimeSignal& signal,
              SampleFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  WriteWav(out, signal, format);
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace specinv
