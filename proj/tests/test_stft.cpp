// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "specinv/error.hpp"
#include "specinv/stft.hpp"

using namespace specinv;

namespace {

StftConfig MakeConfig(std::size_t win, std::size_t hop, std::size_t zpf,
                      WindowKind kind = WindowKind::kHannPeriodic) {
  StftConfig c;
  c.win_len = win;
  c.hop = hop;
  c.dft_size = win * zpf;
  c.window_kind = kind;
  return c;
}

std::vector<double> ToVector(const Window& w) {
  return {w.coefficients().begin(), w.coefficients().end()};
}

Spectrogram RandomSpectrogram(std::mt19937_64& rng, const StftConfig& config,
                              std::size_t frames) {
  std::normal_distribution<double> dist;
  Spectrogram spec(config, frames);
  for (auto& v : spec.data()) v = {dist(rng), dist(rng)};
  return spec;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(StftConfig::Default().Validate());
  CHECK_THROWS_AS(MakeConfig(256, 0, 2).Validate(), ConfigError);
  CHECK_THROWS_AS(MakeConfig(256, 300, 2).Validate(), ConfigError);
  CHECK_THROWS_AS(MakeConfig(256, 100, 2).Validate(), ConfigError);
  auto c = MakeConfig(256, 128, 1);
  c.dft_size = 200;
  CHECK_THROWS_AS(c.Validate(), ConfigError);

  const auto d = StftConfig::FromDuration(16000, 16, 0.5, 2);
  CHECK(d.win_len == 256);
  CHECK(d.hop == 128);
  CHECK(d.dft_size == 512);
  CHECK(d.num_bins() == 257);
  CHECK(d == StftConfig::Default());
  CHECK(d.NumFrames(16000) == (16000 - 256) / 128 + 1);
  CHECK(d.NumFrames(255) == 0);
  CHECK(d.SignalLength(3) == 512);
}

TEST_CASE("analysis window closed forms") {
  auto close_to = [](const Window& w, std::vector<double> expected) {
    REQUIRE(w.size() == expected.size());
    for (std::size_t n = 0; n < w.size(); ++n) CHECK(std::abs(w[n] - expected[n]) < 1e-15);
  };
  close_to(MakeAnalysisWindow(MakeConfig(4, 2, 1)), {0.0, 0.5, 1.0, 0.5});
  close_to(MakeAnalysisWindow(MakeConfig(2, 1, 1)), {0.0, 1.0});
  const Window w = MakeAnalysisWindow(StftConfig::Default());
  CHECK(w.size() == 256);
  CHECK(w[128] == 1.0);
  CHECK(w[0] == 0.0);
  const Window s = MakeAnalysisWindow(MakeConfig(8, 4, 1, WindowKind::kSqrtHannPeriodic));
  for (std::size_t n = 0; n < 8; ++n)
    CHECK(s[n] == doctest::Approx(std::sqrt(oracle::PeriodicHann(n, 8))).epsilon(1e-15));
}

TEST_CASE("synthesis window") {
  SUBCASE("sqrt-Hann at 50% overlap is self-dual") {
    const auto c = MakeConfig(256, 128, 2, WindowKind::kSqrtHannPeriodic);
    const Window a = MakeAnalysisWindow(c);
    const Window s = MakeSynthesisWindow(a, c.hop);
    for (std::size_t n = 0; n < a.size(); ++n) CHECK(s[n] == doctest::Approx(a[n]).epsilon(1e-12));
  }
  SUBCASE("Hann N_w=4, hop=2 against direct evaluation") {
    const Window a = MakeAnalysisWindow(MakeConfig(4, 2, 1));
    const Window s = MakeSynthesisWindow(a, 2);
    // w / (w(n)^2 + w(n +- 2)^2) with w = [0, .5, 1, .5]:
    // n=0: 0 / (0 + 1), n=1: .5 / (.25 + .25), n=2: 1 / (1 + 0), n=3: .5 / .5
    const std::vector<double> expected{0.0, 1.0, 1.0, 1.0};
    for (std::size_t n = 0; n < 4; ++n) CHECK(s[n] == doctest::Approx(expected[n]).epsilon(1e-15));
  }
  SUBCASE("hop == win_len gives the reciprocal window") {
    const Window s = MakeSynthesisWindow(Window({2.0, 4.0, 0.5}), 3);
    CHECK(ToVector(s) == std::vector<double>{0.5, 0.25, 2.0});
  }
  SUBCASE("vanishing energy is infeasible") {
    CHECK_THROWS_AS(MakeSynthesisWindow(Window({1.0, 0.0, 1.0, 0.0}), 2),
                    ReconstructionInfeasible);
    CHECK_THROWS_AS(MakeSynthesisWindow(Window({1.0, 1.0, 1.0}), 2), ConfigError);
  }
  SUBCASE("dual identity sum_t w_s w = 1") {
    for (auto kind : {WindowKind::kHannPeriodic, WindowKind::kSqrtHannPeriodic}) {
      for (std::size_t hop : {64, 128}) {
        const Window a = MakeAnalysisWindow(MakeConfig(256, hop, 1, kind));
        const Window s = MakeSynthesisWindow(a, hop);
        for (std::size_t m = 0; m < hop; ++m) {
          double acc = 0.0;
          for (std::size_t n = m; n < 256; n += hop) acc += a[n] * s[n];
          CHECK(acc == doctest::Approx(1.0).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("stft") {
  const StftConfig config = StftConfig::Default();
  const StftContext ctx(config);

  SUBCASE("zero signal") {
    const auto spec = ctx.Forward(TimeSignal::Zeros(1000, 16000));
    CHECK(spec.num_frames() == 6);
    CHECK(spec.num_bins() == 257);
    for (auto v : spec.data()) CHECK(v == Complex(0.0, 0.0));
  }
  SUBCASE("too short") {
    CHECK_THROWS_AS(ctx.Forward(TimeSignal::Zeros(255, 16000)), ShapeError);
  }
  SUBCASE("on-bin cosine with a rectangular window") {
    const auto c = MakeConfig(64, 64, 1);
    const std::size_t k = 5;
    std::vector<double> x(64);
    for (std::size_t n = 0; n < 64; ++n) x[n] = std::cos(2 * std::numbers::pi * k * n / 64.0);
    const auto spec = Stft(TimeSignal(x, 16000), c, Window(std::vector<double>(64, 1.0)));
    REQUIRE(spec.num_frames() == 1);
    for (std::size_t f = 0; f < spec.num_bins(); ++f) {
      const double expected = f == k ? 32.0 : 0.0;
      CHECK(std::abs(spec(f, 0) - Complex(expected, 0.0)) < 1e-10);
    }
  }
  SUBCASE("matches a brute-force DFT matrix") {
    std::mt19937_64 rng(7);
    const auto x = oracle::RandomSignal(rng, 1024);
    const auto spec = ctx.Forward(TimeSignal(x, 16000));
    const auto ref = oracle::NaiveStft(x, ToVector(ctx.analysis()), 128, 512);
    REQUIRE(ref.size() == spec.num_frames());
    double err = 0.0;
    for (std::size_t t = 0; t < ref.size(); ++t)
      for (std::size_t f = 0; f < 257; ++f) err = std::max(err, std::abs(spec(f, t) - ref[t][f]));
    CHECK(err < 1e-10);
  }
  SUBCASE("trailing partial frame is dropped") {
    const auto spec = ctx.Forward(TimeSignal::Zeros(256 + 128 + 100, 16000));
    CHECK(spec.num_frames() == 2);
  }
}

TEST_CASE("frame idft") {
  const StftConfig config = StftConfig::Default();
  const StftContext ctx(config);
  std::mt19937_64 rng(11);

  SUBCASE("zero frame") {
    std::vector<Complex> zero(257);
    for (double v : FrameIdft(zero, config, ctx.synthesis())) CHECK(v == 0.0);
  }
  SUBCASE("unmodified analysis frame returns w_s * w * x") {
    const auto x = oracle::RandomSignal(rng, 256);
    std::vector<Complex> bins(257);
    FrameDft(x, config, ctx.analysis(), bins);
    const auto y = FrameIdft(bins, config, ctx.synthesis());
    for (std::size_t n = 0; n < 256; ++n)
      CHECK(std::abs(y[n] - ctx.synthesis()[n] * ctx.analysis()[n] * x[n]) < 1e-12);
  }
  SUBCASE("random frame matches the brute-force inverse DFT") {
    std::normal_distribution<double> dist;
    std::vector<Complex> bins(257);
    for (auto& b : bins) b = {dist(rng), dist(rng)};
    const auto y = FrameIdft(bins, config, ctx.synthesis());
    const auto full = oracle::NaiveIdft({bins.begin(), bins.end()}, 512);
    for (std::size_t n = 0; n < 256; ++n)
      CHECK(std::abs(y[n] - full[n] * ctx.synthesis()[n]) < 1e-12);
  }
  SUBCASE("odd dft size") {
    StftConfig c = MakeConfig(15, 5, 1);
    const StftContext odd(c);
    std::normal_distribution<double> dist;
    std::vector<Complex> bins(c.num_bins());
    for (auto& b : bins) b = {dist(rng), dist(rng)};
    const auto y = FrameIdft(bins, c, odd.synthesis());
    const auto full = oracle::NaiveIdft({bins.begin(), bins.end()}, 15);
    for (std::size_t n = 0; n < 15; ++n) CHECK(std::abs(y[n] - full[n] * odd.synthesis()[n]) < 1e-12);
  }
}

TEST_CASE("istft") {
  std::mt19937_64 rng(3);

  SUBCASE("all-zero spectrogram") {
    const StftContext ctx(StftConfig::Default());
    const auto y = ctx.Inverse(Spectrogram(ctx.config(), 5));
    CHECK(y.size() == 4 * 128 + 256);
    for (double v : y.samples()) CHECK(v == 0.0);
  }
  SUBCASE("overlap-add matches the literal double loop") {
    const StftContext ctx(StftConfig::Default());
    const auto spec = RandomSpectrogram(rng, ctx.config(), 6);
    std::vector<std::vector<oracle::cd>> frames;
    for (std::size_t t = 0; t < 6; ++t) frames.emplace_back(spec.frame(t).begin(), spec.frame(t).end());
    const auto ref = oracle::NaiveOla(frames, ToVector(ctx.synthesis()), 128, 512);
    const auto ola = Istft(spec, ctx.synthesis());
    REQUIRE(ola.size() == ref.size());
    for (std::size_t n = 0; n < ref.size(); ++n) CHECK(std::abs(ola[n] - ref[n]) < 1e-10);
  }
  SUBCASE("exact-edge istft equals the per-sample least-squares synthesis") {
    for (auto kind : {WindowKind::kHannPeriodic, WindowKind::kSqrtHannPeriodic}) {
      const StftContext ctx(MakeConfig(64, 16, 2, kind));
      const auto spec = RandomSpectrogram(rng, ctx.config(), 7);
      std::vector<std::vector<oracle::cd>> frames;
      for (std::size_t t = 0; t < 7; ++t) frames.emplace_back(spec.frame(t).begin(), spec.frame(t).end());
      const auto w = ToVector(ctx.analysis());
      const auto num = oracle::NaiveOla(frames, w, 16, 128);
      const auto y = ctx.InverseExactEdges(spec);
      REQUIRE(y.size() == num.size());
      for (std::size_t n = 0; n < num.size(); ++n) {
        double energy = 0.0;
        for (std::size_t t = 0; t < 7; ++t)
          if (n >= t * 16 && n - t * 16 < 64) energy += w[n - t * 16] * w[n - t * 16];
        const double expected = energy > 1e-12 ? num[n] / energy : 0.0;
        CHECK(std::abs(y[n] - expected) < 1e-10);
      }
    }
  }
  SUBCASE("single nonzero frame stays on its support") {
    const StftContext ctx(StftConfig::Default());
    auto spec = RandomSpectrogram(rng, ctx.config(), 5);
    for (std::size_t t = 0; t < 5; ++t)
      if (t != 2)
        for (auto& v : spec.frame(t)) v = 0.0;
    const auto y = ctx.Inverse(spec);
    for (std::size_t n = 0; n < y.size(); ++n)
      if (n < 256 || n >= 512) CHECK(y[n] == 0.0);
  }
}

TEST_CASE("perfect reconstruction") {
  std::mt19937_64 rng(5);
  for (auto kind : {WindowKind::kHannPeriodic, WindowKind::kSqrtHannPeriodic}) {
    for (std::size_t zpf : {1, 2}) {
      for (std::size_t hop : {64, 128}) {
        const StftContext ctx(MakeConfig(256, hop, zpf, kind));
        std::uniform_int_distribution<std::size_t> len(256, 4000);
        const auto x = oracle::RandomSignal(rng, len(rng));
        const auto y = ctx.InverseExactEdges(ctx.Forward(TimeSignal(x, 16000)));
        const auto energy = FrameEnergy(ctx.analysis(), hop, ctx.config().NumFrames(x.size()));
        REQUIRE(y.size() == energy.size());
        double err = 0.0;
        for (std::size_t n = 0; n < y.size(); ++n) {
          if (energy[n] > 1e-12) err = std::max(err, std::abs(y[n] - x[n]));
          else CHECK(y[n] == 0.0);
        }
        CHECK(err < 1e-10);
        // Plain overlap-add is exact once every overlapping frame exists.
        const auto plain = ctx.Inverse(ctx.Forward(TimeSignal(x, 16000)));
        const std::size_t overlap = ctx.config().overlap();
        double interior = 0.0;
        for (std::size_t n = overlap; n + overlap < plain.size(); ++n)
          interior = std::max(interior, std::abs(plain[n] - x[n]));
        CHECK(interior < 1e-10);
        // Only sample 0 (where every window is zero) is unobserved.
        CHECK(energy[0] == 0.0);
        for (std::size_t n = 1; n < energy.size(); ++n) REQUIRE(energy[n] > 1e-12);
      }
    }
  }
}

TEST_CASE("adjointness and linearity") {
  std::mt19937_64 rng(9);
  const StftContext ctx(MakeConfig(256, 128, 2, WindowKind::kSqrtHannPeriodic));
  const auto& c = ctx.config();
  for (int trial = 0; trial < 5; ++trial) {
    const auto x = oracle::RandomSignal(rng, 256 + 128 * 9);
    const auto sx = ctx.Forward(TimeSignal(x, 16000));
    const auto y = RandomSpectrogram(rng, c, sx.num_frames());
    double lhs = 0.0;
    for (std::size_t t = 0; t < y.num_frames(); ++t)
      for (std::size_t f = 0; f < y.num_bins(); ++f)
        lhs += FullSpectrumBinWeight(f, c.dft_size) * std::real(std::conj(sx(f, t)) * y(f, t));
    lhs /= double(c.dft_size);
    const auto adj = Istft(y, ctx.synthesis());
    double rhs = 0.0;
    for (std::size_t n = 0; n < adj.size(); ++n) rhs += x[n] * adj[n];
    CHECK(std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1.0) < 1e-10);

    // istft and the adjoint differ only in the first/last win_len - hop samples.
    const auto inv = ctx.InverseExactEdges(y);
    for (std::size_t n = c.overlap(); n + c.overlap() < inv.size(); ++n)
      CHECK(std::abs(inv[n] - adj[n]) < 1e-12);
  }

  const auto a = oracle::RandomSignal(rng, 2000);
  const auto b = oracle::RandomSignal(rng, 2000);
  std::vector<double> mix(2000);
  for (std::size_t n = 0; n < 2000; ++n) mix[n] = 2.5 * a[n] - 0.75 * b[n];
  const auto sa = ctx.Forward(TimeSignal(a, 16000));
  const auto sb = ctx.Forward(TimeSignal(b, 16000));
  const auto sm = ctx.Forward(TimeSignal(mix, 16000));
  for (std::size_t i = 0; i < sm.data().size(); ++i)
    CHECK(std::abs(sm.data()[i] - (2.5 * sa.data()[i] - 0.75 * sb.data()[i])) < 1e-10);
}
