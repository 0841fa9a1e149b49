// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <span>
#include <vector>

#include "specinv/inversion.hpp"
#include "specinv/stft.hpp"

namespace specinv {

/// Floor added to the mask denominator so silent bins do not divide by zero.
inline constexpr double kMaskFloor = 1e-12;

/// S_j = V_j / (sum_p V_p + kMaskFloor) * X.
std::vector<Spectrogram> AmplitudeMask(const MagnitudeSet& target,
                                       const Spectrogram& mixture);

/// V_j = |stft(s_j)|. All sources must have the same length.
MagnitudeSet OracleMagnitudes(std::span<const TimeSignal> sources,
                              const StftContext& stft);

/// Sample-wise sum of equally long signals.
TimeSignal MixSignals(std::span<const TimeSignal> sources);

}  // namespace specinv
