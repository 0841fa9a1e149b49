// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "specinv/inversion.hpp"
#include "specinv/phase_init.hpp"
#include "specinv/stft.hpp"

namespace specinv {

struct StreamConfig {
  StftConfig stft;
  std::size_t num_sources = 2;
  std::size_t lookahead = 0;        // K future frames
  std::size_t iters_per_frame = 15;
  PhaseInit phase_init = PhaseInit::kMixture;
  /// Record the windowed loss before every iteration and after the last one.
  bool record_loss = false;

  /// round(budget / (K + 1)), at least 1: each frame is revisited K + 1
  /// times, so a frame sees about as many updates as `budget` offline
  /// iterations.
  static std::size_t DefaultIterations(std::size_t lookahead, std::size_t budget = 15);

  void Validate() const;
};

/// Algorithmic latency N_w + K * hop in samples.
std::size_t LatencySamples(const StreamConfig& config);

/// Per-source blocks of samples, blocks[j] for source j.
using SourceBlocks = std::vector<std::vector<double>>;

/// Frame-synchronous online MISI. Frames of the mixture STFT and of the target
/// magnitudes are pushed one at a time; once K + 1 frames are buffered every
/// push runs the update on the window of in-flight frames, commits the oldest
/// one and emits hop samples per source. The committed frames' overlap is
/// kept as a time-domain tail and is never revised.
///
/// During the update the window is re-synthesized as past tail plus the
/// in-flight frames, with samples that frames before the stream start or
/// after the newest frame would overlap renormalized by the window energy of
/// the frames present (the least-squares synthesis of the received frames).
/// Emitted samples are plain overlap-add, like Istft.
///
/// Not thread-safe: a stream has a single owner.
class OnlineMisi {
 public:
  explicit OnlineMisi(const StreamConfig& config);

  /// Pushes frame t + K. Returns hop samples per source once the window is
  /// full, nothing while it is still filling.
  std::optional<SourceBlocks> Push(std::span<const Complex> mixture_frame,
                                   std::span<const std::span<const double>> magnitudes);
  std::optional<SourceBlocks> Push(std::span<const Complex> mixture_frame,
                                   const std::vector<std::vector<double>>& magnitudes);

  /// Flushes the in-flight frames and the final tail. Frames that never went
  /// through an update are iterated once on the remaining window first.
  SourceBlocks Close();

  const StreamConfig& config() const { return config_; }
  std::size_t frame_index() const { return committed_; }
  std::size_t frames_received() const { return received_; }
  std::size_t window_size() const { return window_.size(); }
  std::size_t window_capacity() const { return config_.lookahead + 1; }
  bool closed() const { return closed_; }
  std::span<const double> past_tail(std::size_t source) const { return past_tail_[source]; }
  /// Windowed loss trace of the most recent update (empty unless
  /// record_loss is set).
  std::span<const double> last_loss_trace() const { return loss_trace_; }

 private:
  struct Slot {
    std::vector<Complex> mixture;
    std::vector<std::vector<Complex>> sources;
    std::vector<std::vector<double>> magnitudes;
  };

  std::vector<double> InitialPhase(std::size_t source, const Slot& slot) const;
  void Iterate();
  double AnalyzeWindow(std::vector<std::vector<std::vector<Complex>>>& analyzed) const;
  std::vector<double> SynthesizeWindow(std::size_t source) const;
  double EdgeGain(std::size_t sample) const;
  SourceBlocks CommitOldest();

  StreamConfig config_;
  StftContext stft_;
  std::vector<double> periodic_energy_;
  std::deque<Slot> window_;
  std::vector<std::vector<double>> past_tail_;
  std::vector<std::vector<double>> last_committed_phase_;
  std::vector<double> loss_trace_;
  std::size_t received_ = 0;
  std::size_t committed_ = 0;
  std::size_t updated_through_ = 0;  // frames received at the last update
  bool closed_ = false;
};

/// Streams a whole precomputed mixture spectrogram through OnlineMisi and
/// concatenates the emitted blocks: (T - 1) * hop + win_len samples per
/// source. If `frame_loss` is given, the windowed loss trace of every push is
/// appended to it.
std::vector<TimeSignal> StreamSeparate(const StreamConfig& config,
                                       const Spectrogram& mixture,
                                       const MagnitudeSet& target,
                                       std::vector<std::vector<double>>* frame_loss = nullptr);

/// Same, analyzing the time-domain mixture frame by frame as its samples
/// arrive. Every emitted block is made to sum to the mixture samples it
/// covers, so the outputs sum to `mixture` (truncated to the istft length).
std::vector<TimeSignal> StreamSeparate(const StreamConfig& config,
                                       const TimeSignal& mixture,
                                       const MagnitudeSet& target,
                                       std::vector<std::vector<double>>* frame_loss = nullptr);

/// Adds (x - sum_j b_j) / J to every block, sample by sample.
void DistributeBlocks(SourceBlocks& blocks, std::span<const double> mixture);

}  // namespace specinv
