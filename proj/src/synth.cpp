// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "specinv/synth.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "specinv/error.hpp"

namespace specinv {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Formant {
  double center;
  double width;
  double drift;  // Hz of slow movement
  double phase;
};

}  // namespace

TimeSignal SynthesizeSpeechLike(const SpeechLikeVoice& voice, std::size_t length,
                                double sample_rate, std::uint64_t seed) {
  if (!(sample_rate > 0) || !(voice.mean_pitch_hz > 0))
    throw ConfigError("speech-like voice needs positive pitch and sample rate");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const double nyquist = 0.5 * sample_rate;
  const std::array<Formant, 3> formants{{
      {500.0 + 300.0 * unit(rng), 120.0, 150.0, kTwoPi * unit(rng)},
      {1200.0 + 800.0 * unit(rng), 180.0, 300.0, kTwoPi * unit(rng)},
      {2400.0 + 600.0 * unit(rng), 250.0, 200.0, kTwoPi * unit(rng)},
  }};
  const double intonation_rate = 0.5 + unit(rng);
  const double intonation_phase = kTwoPi * unit(rng);
  const double syllable_phase = kTwoPi * unit(rng);
  const std::size_t max_harmonics =
      static_cast<std::size_t>(std::min(4000.0, 0.45 * sample_rate) / voice.mean_pitch_hz);
  std::vector<double> harmonic_phase(max_harmonics);
  for (double& p : harmonic_phase) p = kTwoPi * unit(rng);

  std::vector<double> out(length);
  double pitch_phase = 0.0;
  double breath = 0.0;
  for (std::size_t n = 0; n < length; ++n) {
    const double t = static_cast<double>(n) / sample_rate;
    const double f0 = voice.mean_pitch_hz *
                      (1.0 + voice.pitch_depth * std::sin(kTwoPi * intonation_rate * t +
                                                          intonation_phase));
    pitch_phase += kTwoPi * f0 / sample_rate;

    double voiced = 0.0;
    for (std::size_t h = 1; h <= max_harmonics; ++h) {
      const double freq = static_cast<double>(h) * f0;
      if (freq >= nyquist) break;
      double gain = 0.0;
      for (const auto& fm : formants) {
        const double center = fm.center + fm.drift * std::sin(kTwoPi * 0.7 * t + fm.phase);
        const double d = (freq - center) / fm.width;
        gain += std::exp(-0.5 * d * d);
      }
      gain = (gain + 0.05) / static_cast<double>(h);
      voiced += gain * std::sin(static_cast<double>(h) * pitch_phase + harmonic_phase[h - 1]);
    }
    const double syllable = std::sin(kTwoPi * voice.syllable_rate_hz * t + syllable_phase);
    const double envelope = 0.15 + 0.85 * std::max(0.0, syllable);
    breath = 0.7 * breath + gauss(rng);  // mildly low-passed noise
    out[n] = envelope * (voiced + voice.noise_level * breath);
  }

  double energy = 0.0;
  for (double v : out) energy += v * v;
  const double rms = std::sqrt(energy / static_cast<double>(std::max<std::size_t>(length, 1)));
  if (rms > 0.0)
    for (double& v : out) v *= voice.rms / rms;
  return TimeSignal(std::move(out), sample_rate);
}

std::vector<TimeSignal> SynthesizeSpeakers(std::size_t count, std::size_t length,
                                           double sample_rate, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<TimeSignal> voices;
  for (std::size_t j = 0; j < count; ++j) {
    SpeechLikeVoice voice;
    const bool low = (j % 2 == 0) == (unit(rng) < 0.5);
    voice.mean_pitch_hz = low ? 95.0 + 50.0 * unit(rng) : 180.0 + 70.0 * unit(rng);
    voice.syllable_rate_hz = 3.0 + 2.5 * unit(rng);
    voices.push_back(SynthesizeSpeechLike(voice, length, sample_rate, rng()));
  }
  return voices;
}

}  // namespace specinv
