// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>
#include <iosfwd>

#include "specinv/stft.hpp"

namespace specinv {

enum class SampleFormat {
  kPcm16,
  kFloat32,
};

struct WavAudio {
  TimeSignal signal;
  SampleFormat format = SampleFormat::kFloat32;
};

/// Reads a mono RIFF/WAVE file with 16-bit PCM or 32-bit float samples.
/// PCM samples are scaled by 1 / 32768. Throws DataError on anything else,
/// including multichannel files.
WavAudio ReadWav(std::istream& in);
WavAudio ReadWav(const std::filesystem::path& path);

/// Writes a mono WAV. PCM16 output is rounded and clipped to the 16-bit range.
void WriteWav(std::ostream& out, const TimeSignal& signal,
              SampleFormat format = SampleFormat::kFloat32);
void WriteWav(const std::filesystem::path& path, const TimeSignal& signal,
              SampleFormat format = SampleFormat::kFloat32);

}  // namespace specinv
