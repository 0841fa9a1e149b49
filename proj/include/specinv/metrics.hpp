// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "specinv/stft.hpp"

namespace specinv {

/// Degenerate SI-SDR values are clamped to +/- this many dB.
inline constexpr double kSiSdrCap = 300.0;

/// Scale-invariant signal-to-distortion ratio in dB. Signals are trimmed to
/// the shorter length. Throws DataError if the reference is all zeros.
double SiSdr(std::span<const double> estimate, std::span<const double> reference);
double SiSdr(const TimeSignal& estimate, const TimeSignal& reference);

/// SiSdr(estimate, reference) - SiSdr(mixture, reference), both over the
/// length of the shortest of the three signals.
double SiSdrImprovement(const TimeSignal& estimate, const TimeSignal& reference,
                        const TimeSignal& mixture);

struct SeparationReport {
  std::string algorithm;
  std::size_t latency_samples = 0;
  std::vector<double> si_sdr;
  std::vector<double> si_sdri;
  double mean_si_sdri = 0.0;
  std::vector<double> loss_trace;
};

/// Scores index-aligned estimates against references.
SeparationReport Evaluate(std::string algorithm, std::span<const TimeSignal> estimates,
                          std::span<const TimeSignal> references,
                          const TimeSignal& mixture);

}  // namespace specinv
