// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "specinv/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "specinv/error.hpp"

namespace specinv {

double SiSdr(std::span<const double> estimate, std::span<const double> reference) {
  const std::size_t n = std::min(estimate.size(), reference.size());
  double ref_energy = 0.0;
  double cross = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ref_energy += reference[i] * reference[i];
    cross += estimate[i] * reference[i];
  }
  if (ref_energy == 0.0) throw DataError("SI-SDR reference is all zeros");
  const double alpha = cross / ref_energy;
  double target = 0.0;
  double noise = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double projected = alpha * reference[i];
    target += projected * projected;
    noise += (projected - estimate[i]) * (projected - estimate[i]);
  }
  if (target == 0.0) return -kSiSdrCap;
  if (noise < 1e-30) return kSiSdrCap;
  return std::clamp(10.0 * std::log10(target / noise), -kSiSdrCap, kSiSdrCap);
}

double SiSdr(const TimeSignal& estimate, const TimeSignal& reference) {
  return SiSdr(estimate.samples(), reference.samples());
}

double SiSdrImprovement(const TimeSignal& estimate, const TimeSignal& reference,
                        const TimeSignal& mixture) {
  // Both scores use the same support, the shortest of the three signals.
  const std::size_t n = std::min({estimate.size(), reference.size(), mixture.size()});
  const auto ref = reference.samples().first(n);
  return SiSdr(estimate.samples().first(n), ref) - SiSdr(mixture.samples().first(n), ref);
}

SeparationReport Evaluate(std::string algorithm, std::span<const TimeSignal> estimates,
                          std::span<const TimeSignal> references,
                          const TimeSignal& mixture) {
  if (estimates.size() != references.size())
    throw ShapeError("estimate and reference counts differ");
  SeparationReport report;
  report.algorithm = std::move(algorithm);
  double total = 0.0;
  for (std::size_t j = 0; j < estimates.size(); ++j) {
    report.si_sdr.push_back(SiSdr(estimates[j], references[j]));
    report.si_sdri.push_back(SiSdrImprovement(estimates[j], references[j], mixture));
    total += report.si_sdri.back();
  }
  if (!estimates.empty()) report.mean_si_sdri = total / static_cast<double>(estimates.size());
  return report;
}

}  // namespace specinv
