// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "specinv/streaming.hpp"

#include <algorithm>
#include <cmath>

#include "specinv/error.hpp"

namespace specinv {

std::size_t StreamConfig::DefaultIterations(std::size_t lookahead, std::size_t budget) {
  const long iters = std::lround(static_cast<double>(budget) / static_cast<double>(lookahead + 1));
  return static_cast<std::size_t>(std::max(iters, 1L));
}

void StreamConfig::Validate() const {
  stft.Validate();
  if (num_sources == 0) throw ConfigError("stream needs at least one source");
  if (iters_per_frame == 0) throw ConfigError("iters_per_frame must be at least 1");
}

std::size_t LatencySamples(const StreamConfig& config) {
  return config.stft.win_len + config.lookahead * config.stft.hop;
}

OnlineMisi::OnlineMisi(const StreamConfig& config)
    : config_((config.Validate(), config)),
      stft_(config.stft),
      periodic_energy_(config.stft.hop, 0.0),
      past_tail_(config.num_sources, std::vector<double>(config.stft.overlap(), 0.0)),
      last_committed_phase_(config.num_sources) {
  for (std::size_t m = 0; m < config_.stft.win_len; ++m)
    periodic_energy_[m % config_.stft.hop] += stft_.analysis()[m] * stft_.analysis()[m];
}

std::optional<SourceBlocks> OnlineMisi::Push(
    std::span<const Complex> mixture_frame,
    const std::vector<std::vector<double>>& magnitudes) {
  std::vector<std::span<const double>> views(magnitudes.begin(), magnitudes.end());
  return Push(mixture_frame, views);
}

std::optional<SourceBlocks> OnlineMisi::Push(
    std::span<const Complex> mixture_frame,
    std::span<const std::span<const double>> magnitudes) {
  if (closed_) throw StreamError("push after close");
  const std::size_t bins = config_.stft.num_bins();
  if (mixture_frame.size() != bins) throw ShapeError("mixture frame has the wrong bin count");
  if (magnitudes.size() != config_.num_sources)
    throw ShapeError("expected one magnitude frame per source");
  for (const auto& v : magnitudes) {
    if (v.size() != bins) throw ShapeError("magnitude frame has the wrong bin count");
    for (double x : v)
      if (!std::isfinite(x) || x < 0.0)
        throw DataError("magnitudes must be finite and nonnegative");
  }

  Slot slot;
  slot.mixture.assign(mixture_frame.begin(), mixture_frame.end());
  for (const auto& v : magnitudes) slot.magnitudes.emplace_back(v.begin(), v.end());
  std::vector<std::span<Complex>> views;
  slot.sources.resize(config_.num_sources);
  for (std::size_t j = 0; j < config_.num_sources; ++j) {
    const std::vector<double> phase = InitialPhase(j, slot);
    slot.sources[j].resize(bins);
    for (std::size_t f = 0; f < bins; ++f)
      slot.sources[j][f] = std::polar(slot.magnitudes[j][f], phase[f]);
    views.push_back(slot.sources[j]);
  }
  DistributeFrame(views, slot.mixture);
  window_.push_back(std::move(slot));
  ++received_;

  if (window_.size() < window_capacity()) return std::nullopt;
  Iterate();
  return CommitOldest();
}

SourceBlocks OnlineMisi::Close() {
  if (closed_) throw StreamError("stream already closed");
  closed_ = true;
  SourceBlocks out(config_.num_sources);
  if (received_ == 0) return out;
  if (updated_through_ < received_) Iterate();
  while (!window_.empty()) {
    SourceBlocks block = CommitOldest();
    for (std::size_t j = 0; j < out.size(); ++j)
      out[j].insert(out[j].end(), block[j].begin(), block[j].end());
  }
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j].insert(out[j].end(), past_tail_[j].begin(), past_tail_[j].end());
  return out;
}

std::vector<double> OnlineMisi::InitialPhase(std::size_t source, const Slot& slot) const {
  if (config_.phase_init == PhaseInit::kMixture || received_ == 0)
    return MixturePhase(slot.mixture);
  // Previous frame: the newest in-flight one, else the last committed one.
  const std::vector<double> previous =
      window_.empty() ? last_committed_phase_[source] : MixturePhase(window_.back().sources[source]);
  return SinusoidalPhase(previous, slot.magnitudes[source], config_.stft);
}

double OnlineMisi::EdgeGain(std::size_t n) const {
  // Energy a sample sees when every overlapping frame exists, relative to the
  // energy of the frames received so far.
  const StftConfig& c = config_.stft;
  double present = 0.0;
  const std::size_t first = n < c.win_len ? 0 : (n - c.win_len) / c.hop + 1;
  const std::size_t last = std::min(n / c.hop + 1, received_);
  for (std::size_t k = first; k < last; ++k) {
    const double w = stft_.analysis()[n - k * c.hop];
    present += w * w;
  }
  if (present < 1e-12) return 0.0;
  return periodic_energy_[n % c.hop] / present;
}

std::vector<double> OnlineMisi::SynthesizeWindow(std::size_t source) const {
  const StftConfig& c = config_.stft;
  std::vector<double> segment((window_.size() - 1) * c.hop + c.win_len, 0.0);
  std::copy(past_tail_[source].begin(), past_tail_[source].end(), segment.begin());
  std::vector<double> frame(c.win_len);
  for (std::size_t i = 0; i < window_.size(); ++i) {
    FrameIdft(window_[i].sources[source], c, stft_.synthesis(), frame);
    for (std::size_t m = 0; m < c.win_len; ++m) segment[i * c.hop + m] += frame[m];
  }
  const std::size_t start = committed_ * c.hop;
  for (std::size_t n = 0; n < segment.size(); ++n) {
    const std::size_t absolute = start + n;
    if (absolute < c.overlap() || absolute >= received_ * c.hop)
      segment[n] *= EdgeGain(absolute);
  }
  return segment;
}

double OnlineMisi::AnalyzeWindow(
    std::vector<std::vector<std::vector<Complex>>>& analyzed) const {
  const StftConfig& c = config_.stft;
  analyzed.assign(config_.num_sources, {});
  double loss = 0.0;
  for (std::size_t j = 0; j < config_.num_sources; ++j) {
    const std::vector<double> segment = SynthesizeWindow(j);
    analyzed[j].assign(window_.size(), std::vector<Complex>(c.num_bins()));
    for (std::size_t i = 0; i < window_.size(); ++i) {
      FrameDft(std::span<const double>(segment).subspan(i * c.hop, c.win_len), c,
               stft_.analysis(), analyzed[j][i]);
      const auto& v = window_[i].magnitudes[j];
      for (std::size_t f = 0; f < v.size(); ++f) {
        const double d = std::abs(analyzed[j][i][f]) - v[f];
        loss += d * d;
      }
    }
  }
  return loss;
}

void OnlineMisi::Iterate() {
  loss_trace_.clear();
  std::vector<std::vector<std::vector<Complex>>> analyzed;
  for (std::size_t iter = 0; iter < config_.iters_per_frame; ++iter) {
    const double loss = AnalyzeWindow(analyzed);
    if (config_.record_loss) loss_trace_.push_back(loss);
    for (std::size_t i = 0; i < window_.size(); ++i) {
      Slot& slot = window_[i];
      std::vector<std::span<Complex>> views;
      for (std::size_t j = 0; j < config_.num_sources; ++j) {
        ProjectFrame(analyzed[j][i], slot.magnitudes[j], slot.sources[j]);
        views.push_back(slot.sources[j]);
      }
      DistributeFrame(views, slot.mixture);
    }
  }
  if (config_.record_loss) loss_trace_.push_back(AnalyzeWindow(analyzed));
  updated_through_ = received_;
}

SourceBlocks OnlineMisi::CommitOldest() {
  const StftConfig& c = config_.stft;
  Slot& oldest = window_.front();
  SourceBlocks blocks(config_.num_sources, std::vector<double>(c.hop));
  std::vector<double> frame(c.win_len);
  for (std::size_t j = 0; j < config_.num_sources; ++j) {
    FrameIdft(oldest.sources[j], c, stft_.synthesis(), frame);
    auto& tail = past_tail_[j];
    for (std::size_t n = 0; n < tail.size(); ++n) frame[n] += tail[n];
    std::copy(frame.begin(), frame.begin() + c.hop, blocks[j].begin());
    for (std::size_t n = 0; n < tail.size(); ++n) tail[n] = frame[n + c.hop];
    last_committed_phase_[j] = MixturePhase(oldest.sources[j]);
  }
  window_.pop_front();
  ++committed_;
  return blocks;
}

void DistributeBlocks(SourceBlocks& blocks, std::span<const double> mixture) {
  if (blocks.empty()) throw ShapeError("no blocks to distribute over");
  for (const auto& b : blocks)
    if (b.size() != mixture.size()) throw ShapeError("block and mixture lengths differ");
  const double share = 1.0 / static_cast<double>(blocks.size());
  for (std::size_t n = 0; n < mixture.size(); ++n) {
    double sum = 0.0;
    for (const auto& b : blocks) sum += b[n];
    const double correction = (mixture[n] - sum) * share;
    for (auto& b : blocks) b[n] += correction;
  }
}

std::vector<TimeSignal> StreamSeparate(const StreamConfig& config,
                                       const Spectrogram& mixture,
                                       const MagnitudeSet& target,
                                       std::vector<std::vector<double>>* frame_loss) {
  if (mixture.config() != config.stft)
    throw ShapeError("mixture spectrogram was computed with a different config");
  if (target.num_sources() != config.num_sources)
    throw ShapeError("magnitude set and stream disagree on the source count");
  target.CheckShape(mixture.num_bins(), mixture.num_frames());

  OnlineMisi stream(config);
  SourceBlocks out(config.num_sources);
  auto append = [&out](const SourceBlocks& blocks) {
    for (std::size_t j = 0; j < out.size(); ++j)
      out[j].insert(out[j].end(), blocks[j].begin(), blocks[j].end());
  };
  std::vector<std::span<const double>> mags(config.num_sources);
  for (std::size_t t = 0; t < mixture.num_frames(); ++t) {
    for (std::size_t j = 0; j < mags.size(); ++j) mags[j] = target[j].frame(t);
    const auto blocks = stream.Push(mixture.frame(t), mags);
    if (blocks) append(*blocks);
    if (frame_loss && blocks) frame_loss->emplace_back(stream.last_loss_trace().begin(),
                                                       stream.last_loss_trace().end());
  }
  append(stream.Close());
  // A stream shorter than the window is only updated inside Close().
  if (frame_loss && mixture.num_frames() < stream.window_capacity())
    frame_loss->emplace_back(stream.last_loss_trace().begin(), stream.last_loss_trace().end());
  std::vector<TimeSignal> signals;
  for (auto& o : out) signals.emplace_back(std::move(o), config.stft.sample_rate);
  return signals;
}

std::vector<TimeSignal> StreamSeparate(const StreamConfig& config,
                                       const TimeSignal& mixture,
                                       const MagnitudeSet& target,
                                       std::vector<std::vector<double>>* frame_loss) {
  const StftConfig& c = config.stft;
  const std::size_t frames = c.NumFrames(mixture.size());
  if (target.num_sources() != config.num_sources)
    throw ShapeError("magnitude set and stream disagree on the source count");
  target.CheckShape(c.num_bins(), frames);

  const StftContext stft(c);
  OnlineMisi stream(config);
  SourceBlocks out(config.num_sources);
  std::size_t emitted = 0;
  auto append = [&](SourceBlocks blocks) {
    DistributeBlocks(blocks, mixture.samples().subspan(emitted, blocks.front().size()));
    emitted += blocks.front().size();
    for (std::size_t j = 0; j < out.size(); ++j)
      out[j].insert(out[j].end(), blocks[j].begin(), blocks[j].end());
  };
  std::vector<Complex> bins(c.num_bins());
  std::vector<std::span<const double>> mags(config.num_sources);
  for (std::size_t t = 0; t < frames; ++t) {
    FrameDft(mixture.samples().subspan(t * c.hop, c.win_len), c, stft.analysis(), bins);
    for (std::size_t j = 0; j < mags.size(); ++j) mags[j] = target[j].frame(t);
    auto blocks = stream.Push(bins, mags);
    if (blocks) append(std::move(*blocks));
    if (frame_loss && blocks) frame_loss->emplace_back(stream.last_loss_trace().begin(),
                                                       stream.last_loss_trace().end());
  }
  append(stream.Close());
  if (frame_loss && frames < stream.window_capacity())
    frame_loss->emplace_back(stream.last_loss_trace().begin(), stream.last_loss_trace().end());
  std::vector<TimeSignal> signals;
  for (auto& o : out) signals.emplace_back(std::move(o), c.sample_rate);
  return signals;
}

}  // namespace specinv
