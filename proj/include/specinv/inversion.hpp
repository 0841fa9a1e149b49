// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "specinv/phase_init.hpp"
#include "specinv/stft.hpp"

namespace specinv {

/// Below this magnitude a bin's phase is taken as 0 by the projection.
inline constexpr double kZeroMagnitude = 1e-12;

/// Target STFT magnitudes V_j, one F x T matrix per source.
class MagnitudeSet {
 public:
  MagnitudeSet() = default;
  /// Throws ShapeError if the matrices disagree in shape or the set is empty,
  /// DataError on negative or non-finite entries.
  explicit MagnitudeSet(std::vector<RealMatrix> sources);

  std::size_t num_sources() const { return sources_.size(); }
  std::size_t num_bins() const { return sources_.front().num_bins(); }
  std::size_t num_frames() const { return sources_.front().num_frames(); }
  const RealMatrix& operator[](std::size_t j) const { return sources_[j]; }
  std::span<const RealMatrix> sources() const { return sources_; }

  /// Throws ShapeError unless every matrix is num_bins x num_frames.
  void CheckShape(std::size_t num_bins, std::size_t num_frames) const;

 private:
  std::vector<RealMatrix> sources_;
};

/// How the one-sided bins are weighted in the spectral loss.
enum class LossWeighting {
  kOneSided,      ///< every stored bin counts once
  kFullSpectrum,  ///< interior bins count twice, matching the two-sided norm
};

/// sum_j || |Z_j| - V_j ||^2 over every bin and frame.
double SpectralLoss(std::span<const Spectrogram> spectra, const MagnitudeSet& target,
                    LossWeighting weighting = LossWeighting::kOneSided);

/// Loss of time-domain sources: the spectra are stft(s_j).
double SpectralLoss(std::span<const TimeSignal> sources, const MagnitudeSet& target,
                    const StftContext& stft,
                    LossWeighting weighting = LossWeighting::kOneSided);

/// Y = V exp(i angle(Z)), bin by bin (angle taken as 0 where |Z| is ~0).
void ProjectFrame(std::span<const Complex> z, std::span<const double> magnitude,
                  std::span<Complex> out);
Spectrogram MagnitudeProjection(const Spectrogram& z, const RealMatrix& magnitude);

/// Adds (X - sum_p Y_p) / J to every source so the frames sum to X. `frames`
/// holds one span per source and is updated in place.
void DistributeFrame(std::span<const std::span<Complex>> frames,
                     std::span<const Complex> mixture);
std::vector<Spectrogram> MixErrorDistribute(std::vector<Spectrogram> estimates,
                                            const Spectrogram& mixture);

/// Time-domain counterpart: s_j += (x - sum_p s_p) / J.
void DistributeSignal(std::vector<TimeSignal>& sources, const TimeSignal& mixture);

struct InversionResult {
  std::vector<Spectrogram> spectra;
  std::vector<TimeSignal> signals;
  /// Loss of the consistent spectrograms stft(istft(S_j)) after
  /// initialization (entry 0) and after each iteration.
  std::vector<double> loss_trace;
};

struct MisiOptions {
  std::size_t iterations = 15;
  PhaseInit init = PhaseInit::kMixture;
  LossWeighting weighting = LossWeighting::kOneSided;
};

/// Multiple input spectrogram inversion starting from the given source
/// spectra. The initial spectra are made to sum to the mixture, then each
/// iteration re-analyzes every source, projects on its target magnitude and
/// redistributes the mixing error. The returned signals are the inverse STFTs
/// with the time-domain mixing error redistributed, so they sum to
/// istft(mixture).
InversionResult Misi(const Spectrogram& mixture, const MagnitudeSet& target,
                     const StftContext& stft, std::vector<Spectrogram> initial,
                     std::size_t iterations,
                     LossWeighting weighting = LossWeighting::kOneSided);

/// Same, with the initial spectra V_j exp(i phi_j) built by `options.init`.
InversionResult Misi(const Spectrogram& mixture, const MagnitudeSet& target,
                     const StftContext& stft, const MisiOptions& options = {});

/// Time-domain entry point. The returned signals sum to `mixture` itself
/// (truncated to the istft length), edges included.
InversionResult Misi(const TimeSignal& mixture, const MagnitudeSet& target,
                     const StftContext& stft, const MisiOptions& options = {});

/// V_j exp(i phi_j) for every source.
std::vector<Spectrogram> ApplyPhases(const MagnitudeSet& target,
                                     std::span<const RealMatrix> phases,
                                     const StftConfig& config);

}  // namespace specinv
