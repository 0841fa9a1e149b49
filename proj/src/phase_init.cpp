// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "specinv/phase_init.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "specinv/error.hpp"

namespace specinv {

double WrapPhase(double phase) {
  double wrapped = std::remainder(phase, 2.0 * std::numbers::pi);
  if (wrapped <= -std::numbers::pi) wrapped += 2.0 * std::numbers::pi;
  return wrapped;
}

std::vector<double> MixturePhase(std::span<const Complex> frame) {
  std::vector<double> phase(frame.size());
  for (std::size_t f = 0; f < frame.size(); ++f)
    phase[f] = frame[f] == Complex(0.0, 0.0) ? 0.0 : WrapPhase(std::arg(frame[f]));
  return phase;
}

std::vector<std::size_t> FindPeaks(std::span<const double> mag) {
  std::vector<std::size_t> peaks;
  if (mag.size() < 3) return peaks;
  const double floor = kPeakFloor * *std::max_element(mag.begin(), mag.end());
  for (std::size_t f = 1; f + 1 < mag.size(); ++f)
    if (mag[f] > mag[f - 1] && mag[f] >= mag[f + 1] && mag[f] > floor) peaks.push_back(f);
  return peaks;
}

double RefineFrequency(std::span<const double> mag, std::size_t peak,
                       const StftConfig& config) {
  if (peak == 0 || peak + 1 >= mag.size() || !(mag[peak] > 0.0))
    throw ShapeError("RefineFrequency needs an interior peak with positive magnitude");
  double delta = 0.0;
  if (mag[peak - 1] > 0.0 && mag[peak + 1] > 0.0) {
    const double alpha = std::log(mag[peak - 1]);
    const double beta = std::log(mag[peak]);
    const double gamma = std::log(mag[peak + 1]);
    const double curvature = alpha - 2.0 * beta + gamma;
    if (curvature < 0.0) delta = std::clamp(0.5 * (alpha - gamma) / curvature, -0.5, 0.5);
  }
  return (static_cast<double>(peak) + delta) / static_cast<double>(config.dft_size);
}

std::vector<std::size_t> AssignRegions(std::span<const std::size_t> peaks,
                                       std::size_t num_bins) {
  std::vector<std::size_t> region(num_bins);
  if (peaks.empty()) {
    for (std::size_t f = 0; f < num_bins; ++f) region[f] = f;
    return region;
  }
  std::size_t next = 0;  // first peak with bin >= f
  for (std::size_t f = 0; f < num_bins; ++f) {
    while (next < peaks.size() && peaks[next] < f) ++next;
    if (next == peaks.size()) {
      region[f] = peaks.back();
    } else if (next == 0) {
      region[f] = peaks.front();
    } else {
      const std::size_t below = peaks[next - 1];
      const std::size_t above = peaks[next];
      region[f] = (f - below) <= (above - f) ? below : above;
    }
  }
  return region;
}

PeakSet AnalyzePeaks(std::span<const double> mag, const StftConfig& config) {
  PeakSet set;
  const std::vector<std::size_t> bins = FindPeaks(mag);
  set.peaks.reserve(bins.size());
  for (std::size_t b : bins) set.peaks.push_back({b, RefineFrequency(mag, b, config)});
  set.region = AssignRegions(bins, mag.size());
  set.frequency.resize(mag.size());
  std::size_t k = 0;
  for (std::size_t f = 0; f < mag.size(); ++f) {
    const std::size_t governing = set.region[f];
    if (set.peaks.empty()) {
      set.frequency[f] = static_cast<double>(governing) / static_cast<double>(config.dft_size);
      continue;
    }
    while (set.peaks[k].bin < governing) ++k;
    set.frequency[f] = set.peaks[k].frequency;
  }
  return set;
}

std::vector<double> SinusoidalPhase(std::span<const double> previous,
                                    std::span<const double> mag,
                                    const StftConfig& config) {
  if (previous.size() != mag.size()) throw ShapeError("SinusoidalPhase: size mismatch");
  const PeakSet peaks = AnalyzePeaks(mag, config);
  const double advance = 2.0 * std::numbers::pi * static_cast<double>(config.hop);
  std::vector<double> phase(mag.size());
  for (std::size_t f = 0; f < mag.size(); ++f)
    phase[f] = WrapPhase(previous[f] + advance * peaks.frequency[f]);
  return phase;
}

RealMatrix InitialPhases(const Spectrogram& mixture, const RealMatrix& magnitude,
                         PhaseInit scheme) {
  if (magnitude.num_bins() != mixture.num_bins() ||
      magnitude.num_frames() != mixture.num_frames())
    throw ShapeError("magnitude and mixture shapes differ");
  RealMatrix phases(mixture.num_bins(), mixture.num_frames());
  for (std::size_t t = 0; t < mixture.num_frames(); ++t) {
    std::vector<double> frame;
    if (scheme == PhaseInit::kMixture || t == 0)
      frame = MixturePhase(mixture.frame(t));
    else
      frame = SinusoidalPhase(phases.frame(t - 1), magnitude.frame(t), mixture.config());
    std::copy(frame.begin(), frame.end(), phases.frame(t).begin());
  }
  return phases;
}

}  // namespace specinv
