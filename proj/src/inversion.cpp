// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "specinv/inversion.hpp"

#include <cmath>
#include <string>

#include "specinv/error.hpp"

namespace specinv {

MagnitudeSet::MagnitudeSet(std::vector<RealMatrix> sources) : sources_(std::move(sources)) {
  if (sources_.empty()) throw ShapeError("magnitude set needs at least one source");
  CheckShape(sources_.front().num_bins(), sources_.front().num_frames());
  for (const auto& m : sources_)
    for (double v : m.data())
      if (!std::isfinite(v) || v < 0.0)
        throw DataError("magnitudes must be finite and nonnegative");
}

void MagnitudeSet::CheckShape(std::size_t num_bins, std::size_t num_frames) const {
  for (const auto& m : sources_)
    if (m.num_bins() != num_bins || m.num_frames() != num_frames)
      throw ShapeError("magnitude shape " + std::to_string(m.num_bins()) + "x" +
                       std::to_string(m.num_frames()) + " does not match " +
                       std::to_string(num_bins) + "x" + std::to_string(num_frames));
}

double SpectralLoss(std::span<const Spectrogram> spectra, const MagnitudeSet& target,
                    LossWeighting weighting) {
  if (spectra.size() != target.num_sources())
    throw ShapeError("source count differs from the magnitude set");
  double loss = 0.0;
  for (std::size_t j = 0; j < spectra.size(); ++j) {
    const Spectrogram& z = spectra[j];
    target.CheckShape(z.num_bins(), z.num_frames());
    const std::size_t dft_size = z.config().dft_size;
    for (std::size_t t = 0; t < z.num_frames(); ++t) {
      const auto frame = z.frame(t);
      const auto v = target[j].frame(t);
      for (std::size_t f = 0; f < frame.size(); ++f) {
        const double d = std::abs(frame[f]) - v[f];
        const double w = weighting == LossWeighting::kOneSided
                             ? 1.0
                             : FullSpectrumBinWeight(f, dft_size);
        loss += w * d * d;
      }
    }
  }
  return loss;
}

double SpectralLoss(std::span<const TimeSignal> sources, const MagnitudeSet& target,
                    const StftContext& stft, LossWeighting weighting) {
  std::vector<Spectrogram> spectra;
  spectra.reserve(sources.size());
  for (const auto& s : sources) spectra.push_back(stft.Forward(s));
  return SpectralLoss(spectra, target, weighting);
}

void ProjectFrame(std::span<const Complex> z, std::span<const double> magnitude,
                  std::span<Complex> out) {
  for (std::size_t f = 0; f < z.size(); ++f) {
    const double r = std::abs(z[f]);
    out[f] = r < kZeroMagnitude ? Complex(magnitude[f], 0.0) : z[f] * (magnitude[f] / r);
  }
}

Spectrogram MagnitudeProjection(const Spectrogram& z, const RealMatrix& magnitude) {
  if (magnitude.num_bins() != z.num_bins() || magnitude.num_frames() != z.num_frames())
    throw ShapeError("projection operands differ in shape");
  Spectrogram y(z.config(), z.num_frames());
  ProjectFrame(z.data(), magnitude.data(), y.data());
  return y;
}

void DistributeFrame(std::span<const std::span<Complex>> frames,
                     std::span<const Complex> mixture) {
  const double share = 1.0 / static_cast<double>(frames.size());
  for (std::size_t f = 0; f < mixture.size(); ++f) {
    Complex sum = 0.0;
    for (const auto& s : frames) sum += s[f];
    const Complex correction = (mixture[f] - sum) * share;
    for (const auto& s : frames) s[f] += correction;
  }
}

std::vector<Spectrogram> MixErrorDistribute(std::vector<Spectrogram> estimates,
                                            const Spectrogram& mixture) {
  if (estimates.empty()) throw ShapeError("no sources to distribute over");
  std::vector<std::span<Complex>> views;
  for (auto& s : estimates) {
    if (s.num_bins() != mixture.num_bins() || s.num_frames() != mixture.num_frames())
      throw ShapeError("source and mixture spectrograms differ in shape");
    views.push_back(s.data());
  }
  DistributeFrame(views, mixture.data());
  return estimates;
}

void DistributeSignal(std::vector<TimeSignal>& sources, const TimeSignal& mixture) {
  if (sources.empty()) throw ShapeError("no sources to distribute over");
  const double share = 1.0 / static_cast<double>(sources.size());
  for (const auto& s : sources)
    if (s.size() != mixture.size()) throw ShapeError("source and mixture lengths differ");
  for (std::size_t n = 0; n < mixture.size(); ++n) {
    double sum = 0.0;
    for (const auto& s : sources) sum += s[n];
    const double correction = (mixture[n] - sum) * share;
    for (auto& s : sources) s[n] += correction;
  }
}

std::vector<Spectrogram> ApplyPhases(const MagnitudeSet& target,
                                     std::span<const RealMatrix> phases,
                                     const StftConfig& config) {
  std::vector<Spectrogram> out;
  for (std::size_t j = 0; j < target.num_sources(); ++j) {
    Spectrogram s(config, target.num_frames());
    const auto v = target[j].data();
    const auto phi = phases[j].data();
    auto dst = s.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = std::polar(v[i], phi[i]);
    out.push_back(std::move(s));
  }
  return out;
}

InversionResult Misi(const Spectrogram& mixture, const MagnitudeSet& target,
                     const StftContext& stft, std::vector<Spectrogram> initial,
                     std::size_t iterations, LossWeighting weighting) {
  if (mixture.config() != stft.config())
    throw ShapeError("mixture spectrogram was computed with a different config");
  target.CheckShape(mixture.num_bins(), mixture.num_frames());
  if (initial.size() != target.num_sources())
    throw ShapeError("initial spectra and magnitude set differ in source count");

  InversionResult result;
  result.spectra = MixErrorDistribute(std::move(initial), mixture);
  std::vector<Spectrogram> consistent(result.spectra.size());
  auto reanalyze = [&] {
    for (std::size_t j = 0; j < result.spectra.size(); ++j)
      consistent[j] = stft.Reanalyze(result.spectra[j]);
    result.loss_trace.push_back(SpectralLoss(consistent, target, weighting));
  };
  reanalyze();
  for (std::size_t k = 0; k < iterations; ++k) {
    for (std::size_t j = 0; j < consistent.size(); ++j)
      ProjectFrame(consistent[j].data(), target[j].data(), result.spectra[j].data());
    result.spectra = MixErrorDistribute(std::move(result.spectra), mixture);
    reanalyze();
  }

  for (const auto& s : result.spectra) result.signals.push_back(stft.Inverse(s));
  DistributeSignal(result.signals, stft.Inverse(mixture));
  return result;
}

InversionResult Misi(const Spectrogram& mixture, const MagnitudeSet& target,
                     const StftContext& stft, const MisiOptions& options) {
  target.CheckShape(mixture.num_bins(), mixture.num_frames());
  std::vector<RealMatrix> phases;
  for (std::size_t j = 0; j < target.num_sources(); ++j)
    phases.push_back(InitialPhases(mixture, target[j], options.init));
  return Misi(mixture, target, stft, ApplyPhases(target, phases, stft.config()),
              options.iterations, options.weighting);
}

InversionResult Misi(const TimeSignal& mixture, const MagnitudeSet& target,
                     const StftContext& stft, const MisiOptions& options) {
  InversionResult result = Misi(stft.Forward(mixture), target, stft, options);
  // The outputs already sum to istft(X); this only moves the edge samples
  // that overlap-add attenuates (and a trailing partial frame is dropped).
  const std::size_t n = result.signals.front().size();
  DistributeSignal(result.signals,
                   TimeSignal({mixture.samples().begin(), mixture.samples().begin() + n},
                              mixture.sample_rate()));
  return result;
}

}  // namespace specinv
