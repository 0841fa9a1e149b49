// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "specinv/stft.hpp"

namespace specinv {

/// How the phase of a frame is initialized before inversion.
enum class PhaseInit {
  kMixture,     ///< copy the mixture phase
  kSinusoidal,  ///< advance the previous frame's phase by 2 pi hop nu
};

/// Relative peak floor: peaks below this fraction of the frame maximum are
/// ignored.
inline constexpr double kPeakFloor = 1e-8;

struct SpectralPeak {
  std::size_t bin = 0;
  double frequency = 0.0;  // cycles per sample
};

struct PeakSet {
  std::vector<SpectralPeak> peaks;   // sorted by bin
  std::vector<std::size_t> region;   // governing bin of each bin
  std::vector<double> frequency;     // per-bin frequency of the governing peak
};

/// Wraps an angle to (-pi, pi].
double WrapPhase(double phase);

/// angle(x) per bin, with angle(0) = 0.
std::vector<double> MixturePhase(std::span<const Complex> frame);

/// Interior local maxima: mag(f) > mag(f-1), mag(f) >= mag(f+1) and
/// mag(f) > kPeakFloor * max(mag).
std::vector<std::size_t> FindPeaks(std::span<const double> mag);

/// Quadratic interpolation of the log-magnitude around `peak`; returns the
/// refined frequency (peak + delta) / dft_size with delta in [-0.5, 0.5].
/// Falls back to delta = 0 when the three points are not strictly concave.
double RefineFrequency(std::span<const double> mag, std::size_t peak,
                       const StftConfig& config);

/// Nearest peak for each bin (ties go to the lower peak). Without peaks every
/// bin governs itself.
std::vector<std::size_t> AssignRegions(std::span<const std::size_t> peaks,
                                       std::size_t num_bins);

PeakSet AnalyzePeaks(std::span<const double> mag, const StftConfig& config);

/// phi_t(f) = wrap(phi_{t-1}(f) + 2 pi hop nu_t(f)), nu_t from the peaks of
/// the current frame's magnitude.
std::vector<double> SinusoidalPhase(std::span<const double> previous,
                                    std::span<const double> mag,
                                    const StftConfig& config);

/// Initial phases for a whole source: the mixture phase everywhere, or for
/// the sinusoidal scheme the mixture phase of frame 0 unwrapped forward with
/// the source magnitude.
RealMatrix InitialPhases(const Spectrogram& mixture, const RealMatrix& magnitude,
                         PhaseInit scheme);

}  // namespace specinv
