// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "specinv/stft.hpp"

namespace specinv {

/// Voiced, speech-like test signal: a harmonic series on a wandering pitch
/// contour, shaped by moving formant resonances and a syllable-rate
/// envelope, plus a little breath noise. Deterministic in `seed`.
struct SpeechLikeVoice {
  double mean_pitch_hz = 120.0;
  double pitch_depth = 0.12;       // relative vibrato / intonation depth
  double syllable_rate_hz = 4.0;
  double noise_level = 0.02;       // relative to the voiced part
  double rms = 0.1;
};

TimeSignal SynthesizeSpeechLike(const SpeechLikeVoice& voice, std::size_t length,
                                double sample_rate, std::uint64_t seed);

/// `count` voices with pitches drawn from the usual male/female ranges.
std::vector<TimeSignal> SynthesizeSpeakers(std::size_t count, std::size_t length,
                                           double sample_rate, std::uint64_t seed);

}  // namespace specinv
