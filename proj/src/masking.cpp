// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "specinv/masking.hpp"

#include "specinv/error.hpp"

namespace specinv {

std::vector<Spectrogram> AmplitudeMask(const MagnitudeSet& target,
                                       const Spectrogram& mixture) {
  target.CheckShape(mixture.num_bins(), mixture.num_frames());
  const std::size_t size = mixture.data().size();
  std::vector<double> total(size, kMaskFloor);
  for (const auto& v : target.sources())
    for (std::size_t i = 0; i < size; ++i) total[i] += v.data()[i];

  std::vector<Spectrogram> out;
  for (const auto& v : target.sources()) {
    Spectrogram s(mixture.config(), mixture.num_frames());
    for (std::size_t i = 0; i < size; ++i)
      s.data()[i] = mixture.data()[i] * (v.data()[i] / total[i]);
    out.push_back(std::move(s));
  }
  return out;
}

MagnitudeSet OracleMagnitudes(std::span<const TimeSignal> sources,
                              const StftContext& stft) {
  if (sources.empty()) throw ShapeError("no sources");
  std::vector<RealMatrix> mags;
  for (const auto& s : sources) {
    if (s.size() != sources.front().size()) throw ShapeError("sources differ in length");
    mags.push_back(stft.Forward(s).Magnitude());
  }
  return MagnitudeSet(std::move(mags));
}

TimeSignal MixSignals(std::span<const TimeSignal> sources) {
  if (sources.empty()) throw ShapeError("no sources");
  std::vector<double> mix(sources.front().size(), 0.0);
  for (const auto& s : sources) {
    if (s.size() != mix.size()) throw ShapeError("sources differ in length");
    for (std::size_t n = 0; n < mix.size(); ++n) mix[n] += s[n];
  }
  return TimeSignal(std::move(mix), sources.front().sample_rate());
}

}  // namespace specinv
