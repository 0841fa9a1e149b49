// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "specinv/stft.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "specinv/error.hpp"

namespace specinv {
namespace {

constexpr double kInfeasibleEnergy = 1e-12;

// Periodic part of the window energy: sum_k w(m + k hop)^2, m in [0, hop).
std::vector<double> PeriodicEnergy(const Window& analysis, std::size_t hop) {
  std::vector<double> energy(hop, 0.0);
  for (std::size_t n = 0; n < analysis.size(); ++n)
    energy[n % hop] += analysis[n] * analysis[n];
  return energy;
}

}  // namespace

StftConfig StftConfig::FromDuration(double sample_rate, double win_ms,
                                    double hop_ratio, std::size_t zpf,
                                    WindowKind kind) {
  if (!(sample_rate > 0) || !(win_ms > 0) || !(hop_ratio > 0) || zpf == 0)
    throw ConfigError("window duration, hop ratio, zpf and sample rate must be positive");
  StftConfig config;
  config.sample_rate = sample_rate;
  config.win_len = static_cast<std::size_t>(std::lround(win_ms * 1e-3 * sample_rate));
  config.hop = static_cast<std::size_t>(std::lround(config.win_len * hop_ratio));
  config.dft_size = config.win_len * zpf;
  config.window_kind = kind;
  config.Validate();
  return config;
}

void StftConfig::Validate() const {
  if (hop == 0 || hop > win_len || win_len > dft_size)
    throw ConfigError("STFT config requires 0 < hop <= win_len <= dft_size (got hop=" +
                      std::to_string(hop) + ", win_len=" + std::to_string(win_len) +
                      ", dft_size=" + std::to_string(dft_size) + ")");
  if (win_len % hop != 0)
    throw ConfigError("win_len must be an integer multiple of hop");
  if (!(sample_rate > 0)) throw ConfigError("sample rate must be positive");
}

std::size_t StftConfig::NumFrames(std::size_t num_samples) const {
  if (num_samples < win_len) return 0;
  return (num_samples - win_len) / hop + 1;
}

std::size_t StftConfig::SignalLength(std::size_t num_frames) const {
  if (num_frames == 0) return 0;
  return (num_frames - 1) * hop + win_len;
}

TimeSignal::TimeSignal(std::vector<double> samples, double sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  for (double v : samples_)
    if (!std::isfinite(v)) throw DataError("signal contains non-finite samples");
}

Spectrogram::Spectrogram(const StftConfig& config, std::size_t num_frames)
    : config_(config),
      num_bins_(config.num_bins()),
      num_frames_(num_frames),
      data_(num_bins_ * num_frames) {}

RealMatrix Spectrogram::Magnitude() const {
  RealMatrix out(num_bins_, num_frames_);
  auto dst = out.data();
  for (std::size_t i = 0; i < data_.size(); ++i) dst[i] = std::abs(data_[i]);
  return out;
}

Window MakeAnalysisWindow(const StftConfig& config) {
  const std::size_t n_w = config.win_len;
  std::vector<double> w(n_w);
  for (std::size_t n = 0; n < n_w; ++n) {
    const double hann =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                             static_cast<double>(n_w));
    w[n] = config.window_kind == WindowKind::kSqrtHannPeriodic ? std::sqrt(hann) : hann;
  }
  // cos(pi) rounding leaves the midpoint a few ulps off 1.
  if (n_w % 2 == 0) w[n_w / 2] = 1.0;
  return Window(std::move(w));
}

Window MakeSynthesisWindow(const Window& analysis, std::size_t hop) {
  if (hop == 0 || analysis.size() % hop != 0)
    throw ConfigError("window length must be a multiple of hop");
  const std::vector<double> energy = PeriodicEnergy(analysis, hop);
  std::vector<double> dual(analysis.size());
  for (std::size_t n = 0; n < analysis.size(); ++n) {
    const double denom = energy[n % hop];
    if (denom < kInfeasibleEnergy)
      throw ReconstructionInfeasible("window energy vanishes at offset " +
                                     std::to_string(n % hop));
    dual[n] = analysis[n] / denom;
  }
  return Window(std::move(dual));
}

std::vector<double> FrameEnergy(const Window& analysis, std::size_t hop,
                                std::size_t num_frames) {
  const std::size_t n_w = analysis.size();
  const std::size_t length = num_frames == 0 ? 0 : (num_frames - 1) * hop + n_w;
  std::vector<double> energy(length, 0.0);
  for (std::size_t t = 0; t < num_frames; ++t)
    for (std::size_t m = 0; m < n_w; ++m)
      energy[t * hop + m] += analysis[m] * analysis[m];
  return energy;
}

void FrameDft(std::span<const double> frame, const StftConfig& config,
              const Window& analysis, std::span<Complex> out) {
  if (frame.size() != config.win_len || analysis.size() != config.win_len)
    throw ShapeError("frame/window length differs from win_len");
  if (out.size() != config.num_bins()) throw ShapeError("FrameDft: wrong bin count");
  std::vector<double> padded(config.dft_size, 0.0);
  for (std::size_t m = 0; m < config.win_len; ++m) padded[m] = frame[m] * analysis[m];
  internal::RealForward(padded, out);
}

Spectrogram Stft(const TimeSignal& signal, const StftConfig& config,
                 const Window& analysis) {
  config.Validate();
  if (signal.size() < config.win_len)
    throw ShapeError("signal of " + std::to_string(signal.size()) +
                     " samples is shorter than one window (" +
                     std::to_string(config.win_len) + ")");
  const std::size_t num_frames = config.NumFrames(signal.size());
  Spectrogram spec(config, num_frames);
  const auto x = signal.samples();
  for (std::size_t t = 0; t < num_frames; ++t)
    FrameDft(x.subspan(t * config.hop, config.win_len), config, analysis, spec.frame(t));
  return spec;
}

void FrameIdft(std::span<const Complex> frame, const StftConfig& config,
               const Window& synthesis, std::span<double> out) {
  if (frame.size() != config.num_bins()) throw ShapeError("FrameIdft: wrong bin count");
  if (out.size() != config.win_len || synthesis.size() != config.win_len)
    throw ShapeError("FrameIdft: output/window length differs from win_len");
  std::vector<double> full(config.dft_size);
  internal::RealInverse(frame, full);
  for (std::size_t m = 0; m < config.win_len; ++m) out[m] = full[m] * synthesis[m];
}

std::vector<double> FrameIdft(std::span<const Complex> frame,
                              const StftConfig& config, const Window& synthesis) {
  std::vector<double> out(config.win_len);
  FrameIdft(frame, config, synthesis, out);
  return out;
}

TimeSignal Istft(const Spectrogram& spec, const Window& synthesis) {
  const StftConfig& config = spec.config();
  std::vector<double> out(config.SignalLength(spec.num_frames()), 0.0);
  std::vector<double> frame(config.win_len);
  for (std::size_t t = 0; t < spec.num_frames(); ++t) {
    FrameIdft(spec.frame(t), config, synthesis, frame);
    double* dst = out.data() + t * config.hop;
    for (std::size_t m = 0; m < config.win_len; ++m) dst[m] += frame[m];
  }
  return TimeSignal(std::move(out), config.sample_rate);
}

TimeSignal IstftExactEdges(const Spectrogram& spec, const Window& analysis,
                           const Window& synthesis) {
  const StftConfig& config = spec.config();
  TimeSignal out = Istft(spec, synthesis);
  if (spec.num_frames() == 0) return out;
  // Only the first and last win_len - hop samples miss overlapping frames.
  const std::vector<double> periodic = PeriodicEnergy(analysis, config.hop);
  const std::size_t edge = std::min(config.overlap(), out.size());
  auto samples = out.mutable_samples();
  auto renormalize = [&](std::size_t n) {
    double present = 0.0;
    const std::size_t first = n < config.win_len ? 0 : (n - config.win_len) / config.hop + 1;
    const std::size_t last = std::min(n / config.hop, spec.num_frames() - 1);
    for (std::size_t t = first; t <= last; ++t) {
      const std::size_t m = n - t * config.hop;
      if (m < config.win_len) present += analysis[m] * analysis[m];
    }
    samples[n] = present < kInfeasibleEnergy
                     ? 0.0
                     : samples[n] * periodic[n % config.hop] / present;
  };
  for (std::size_t n = 0; n < edge; ++n) renormalize(n);
  for (std::size_t n = out.size() - edge; n < out.size(); ++n)
    if (n >= edge) renormalize(n);
  return out;
}

Spectrogram ProjectConsistent(const Spectrogram& spec, const Window& analysis,
                              const Window& synthesis) {
  return Stft(IstftExactEdges(spec, analysis, synthesis), spec.config(), analysis);
}

StftContext::StftContext(const StftConfig& config)
    : config_(config),
      analysis_((config.Validate(), MakeAnalysisWindow(config))),
      synthesis_(MakeSynthesisWindow(analysis_, config.hop)) {}

double FullSpectrumBinWeight(std::size_t bin, std::size_t dft_size) {
  if (bin == 0) return 1.0;
  if (dft_size % 2 == 0 && bin == dft_size / 2) return 1.0;
  return 2.0;
}

}  // namespace specinv
