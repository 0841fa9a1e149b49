// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace specinv {

using Complex = std::complex<double>;

enum class WindowKind { kHannPeriodic, kSqrtHannPeriodic };

/// Analysis/synthesis parameters shared by every transform in the library.
/// Frame t covers samples [t * hop, t * hop + win_len); each frame is
/// zero-padded to dft_size before the DFT.
struct StftConfig {
  std::size_t win_len = 256;
  std::size_t hop = 128;
  std::size_t dft_size = 512;
  double sample_rate = 16000.0;
  WindowKind window_kind = WindowKind::kHannPeriodic;

  /// Builds a config from a window duration, an overlap ratio
  /// (hop = win_len * hop_ratio) and a zero-padding factor.
  static StftConfig FromDuration(double sample_rate, double win_ms,
                                 double hop_ratio, std::size_t zpf,
                                 WindowKind kind = WindowKind::kHannPeriodic);

  /// 16 kHz, 16 ms Hann window, 50% overlap, zero-padding factor 2.
  static StftConfig Default() { return StftConfig{}; }

  /// Throws ConfigError unless 0 < hop <= win_len <= dft_size and
  /// win_len is a multiple of hop.
  void Validate() const;

  std::size_t num_bins() const { return dft_size / 2 + 1; }
  std::size_t overlap() const { return win_len - hop; }
  /// Number of complete frames in a signal of the given length (0 if shorter
  /// than one window).
  std::size_t NumFrames(std::size_t num_samples) const;
  /// Length of the overlap-add of `num_frames` frames.
  std::size_t SignalLength(std::size_t num_frames) const;

  bool operator==(const StftConfig&) const = default;
};

class Window {
 public:
  Window() = default;
  explicit Window(std::vector<double> coefficients)
      : coefficients_(std::move(coefficients)) {}

  std::size_t size() const { return coefficients_.size(); }
  double operator[](std::size_t n) const { return coefficients_[n]; }
  std::span<const double> coefficients() const { return coefficients_; }

 private:
  std::vector<double> coefficients_;
};

/// Real mono signal. All samples are finite.
class TimeSignal {
 public:
  TimeSignal() = default;
  /// Throws DataError on NaN/Inf samples.
  TimeSignal(std::vector<double> samples, double sample_rate);

  static TimeSignal Zeros(std::size_t length, double sample_rate) {
    return TimeSignal(std::vector<double>(length, 0.0), sample_rate);
  }

  std::size_t size() const { return samples_.size(); }
  double sample_rate() const { return sample_rate_; }
  std::span<const double> samples() const { return samples_; }
  std::span<double> mutable_samples() { return samples_; }
  double operator[](std::size_t n) const { return samples_[n]; }
  double& operator[](std::size_t n) { return samples_[n]; }

 private:
  std::vector<double> samples_;
  double sample_rate_ = 0.0;
};

/// Nonnegative real F x T matrix, stored frame by frame.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t num_bins, std::size_t num_frames, double fill = 0.0)
      : num_bins_(num_bins),
        num_frames_(num_frames),
        data_(num_bins * num_frames, fill) {}

  std::size_t num_bins() const { return num_bins_; }
  std::size_t num_frames() const { return num_frames_; }
  double operator()(std::size_t f, std::size_t t) const {
    return data_[t * num_bins_ + f];
  }
  double& operator()(std::size_t f, std::size_t t) {
    return data_[t * num_bins_ + f];
  }
  std::span<const double> frame(std::size_t t) const {
    return {data_.data() + t * num_bins_, num_bins_};
  }
  std::span<double> frame(std::size_t t) {
    return {data_.data() + t * num_bins_, num_bins_};
  }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

 private:
  std::size_t num_bins_ = 0;
  std::size_t num_frames_ = 0;
  std::vector<double> data_;
};

/// One-sided complex STFT: F = dft_size / 2 + 1 bins by T frames, stored
/// frame by frame so a column is contiguous.
class Spectrogram {
 public:
  Spectrogram() = default;
  Spectrogram(const StftConfig& config, std::size_t num_frames);

  const StftConfig& config() const { return config_; }
  std::size_t num_bins() const { return num_bins_; }
  std::size_t num_frames() const { return num_frames_; }

  Complex operator()(std::size_t f, std::size_t t) const {
    return data_[t * num_bins_ + f];
  }
  Complex& operator()(std::size_t f, std::size_t t) {
    return data_[t * num_bins_ + f];
  }
  std::span<const Complex> frame(std::size_t t) const {
    return {data_.data() + t * num_bins_, num_bins_};
  }
  std::span<Complex> frame(std::size_t t) {
    return {data_.data() + t * num_bins_, num_bins_};
  }
  std::span<const Complex> data() const { return data_; }
  std::span<Complex> data() { return data_; }

  /// Elementwise magnitude.
  RealMatrix Magnitude() const;

 private:
  StftConfig config_;
  std::size_t num_bins_ = 0;
  std::size_t num_frames_ = 0;
  std::vector<Complex> data_;
};

/// Periodic Hann w(n) = 0.5 - 0.5 cos(2 pi n / N_w), or its square root.
Window MakeAnalysisWindow(const StftConfig& config);

/// Canonical dual window w(n) / sum_k w(n - k hop)^2 over the shifts that
/// overlap n. Throws ReconstructionInfeasible if that sum vanishes.
Window MakeSynthesisWindow(const Window& analysis, std::size_t hop);

/// Sum over frames t of w(n - t hop)^2 for a signal made of `num_frames`
/// frames. Zero where no window covers n (including n = 0 for Hann).
std::vector<double> FrameEnergy(const Window& analysis, std::size_t hop,
                                std::size_t num_frames);

Spectrogram Stft(const TimeSignal& signal, const StftConfig& config,
                 const Window& analysis);

/// Windowed DFT of one length-win_len frame, written to `out` (F bins).
void FrameDft(std::span<const double> frame, const StftConfig& config,
              const Window& analysis, std::span<Complex> out);

/// Inverse DFT of one one-sided frame (Hermitian extension), truncated to
/// win_len samples and multiplied by the synthesis window.
void FrameIdft(std::span<const Complex> frame, const StftConfig& config,
               const Window& synthesis, std::span<double> out);
std::vector<double> FrameIdft(std::span<const Complex> frame,
                              const StftConfig& config,
                              const Window& synthesis);

/// Inverse STFT: overlap-add of FrameIdft outputs at stride hop, output
/// length (T - 1) * hop + win_len. Exact on samples covered by win_len / hop
/// frames; the first and last win_len - hop samples are attenuated by the
/// missing neighbours. With a tight frame (sqrt-Hann at 50% overlap) this is
/// the adjoint of Stft up to a factor 1 / dft_size.
TimeSignal Istft(const Spectrogram& spec, const Window& synthesis);

/// Least-squares inverse STFT: every sample is divided by the window energy of
/// the frames that actually cover it, so istft(stft(x)) == x on every sample
/// some window observes, including the edges. Samples no window observes
/// (n = 0 for Hann) come out as 0. Near the edges the gain grows like
/// 1 / w(n), so use it only on (nearly) consistent spectrograms.
TimeSignal IstftExactEdges(const Spectrogram& spec, const Window& analysis,
                           const Window& synthesis);

/// stft(IstftExactEdges(spec)): the orthogonal projection of `spec` onto the
/// set of consistent spectrograms.
Spectrogram ProjectConsistent(const Spectrogram& spec, const Window& analysis,
                              const Window& synthesis);

/// Convenience bundle of a config with its analysis and synthesis windows.
class StftContext {
 public:
  explicit StftContext(const StftConfig& config);

  const StftConfig& config() const { return config_; }
  const Window& analysis() const { return analysis_; }
  const Window& synthesis() const { return synthesis_; }

  Spectrogram Forward(const TimeSignal& signal) const {
    return Stft(signal, config_, analysis_);
  }
  TimeSignal Inverse(const Spectrogram& spec) const { return Istft(spec, synthesis_); }
  TimeSignal InverseExactEdges(const Spectrogram& spec) const {
    return IstftExactEdges(spec, analysis_, synthesis_);
  }
  Spectrogram Reanalyze(const Spectrogram& spec) const {
    return ProjectConsistent(spec, analysis_, synthesis_);
  }

 private:
  StftConfig config_;
  Window analysis_;
  Window synthesis_;
};

/// Weight of bin f when a one-sided spectrum stands for the full one:
/// 1 for DC and Nyquist, 2 otherwise.
double FullSpectrumBinWeight(std::size_t bin, std::size_t dft_size);

}  // namespace specinv
