// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "specinv/phase_init.hpp"

using namespace specinv;
using std::numbers::pi;

namespace {

// Magnitude spectrum (default config) of one frame of a Hann-windowed cosine.
std::vector<double> SinusoidFrame(double nu, double phase, const StftContext& ctx) {
  std::vector<double> x(ctx.config().win_len);
  for (std::size_t n = 0; n < x.size(); ++n) x[n] = std::cos(2 * pi * nu * double(n) + phase);
  std::vector<Complex> bins(ctx.config().num_bins());
  FrameDft(x, ctx.config(), ctx.analysis(), bins);
  std::vector<double> mag(bins.size());
  for (std::size_t f = 0; f < bins.size(); ++f) mag[f] = std::abs(bins[f]);
  return mag;
}

}  // namespace

TEST_CASE("wrap and mixture phase") {
  CHECK(WrapPhase(pi) == doctest::Approx(pi));
  CHECK(WrapPhase(-pi) == doctest::Approx(pi));
  CHECK(WrapPhase(3 * pi) == doctest::Approx(pi));
  CHECK(WrapPhase(0.25 + 4 * pi) == doctest::Approx(0.25));

  const std::vector<Complex> frame{{2.0, 0.0}, {0.0, 1.0}, {-1.0, -1.0}, {0.0, 0.0}, {-1.0, 0.0}};
  const auto phase = MixturePhase(frame);
  CHECK(phase[0] == 0.0);
  CHECK(phase[1] == doctest::Approx(pi / 2));
  CHECK(phase[2] == doctest::Approx(-3 * pi / 4));
  CHECK(phase[3] == 0.0);
  CHECK(phase[4] == doctest::Approx(pi));
}

TEST_CASE("find peaks") {
  CHECK(FindPeaks(std::vector<double>{0, 1, 2, 3, 4, 5}).empty());
  CHECK(FindPeaks(std::vector<double>{0, 0, 1, 2, 3, 4, 3, 2, 1, 0}) == std::vector<std::size_t>{5});
  // Plateau: first bin of the plateau is the peak.
  CHECK(FindPeaks(std::vector<double>{0, 2, 2, 0}) == std::vector<std::size_t>{1});
  // Below the relative floor.
  CHECK(FindPeaks(std::vector<double>{0, 1e-10, 0, 0, 1, 0}) == std::vector<std::size_t>{4});
  CHECK(FindPeaks(std::vector<double>(10, 0.0)).empty());

  const StftContext ctx(StftConfig::Default());
  const auto mag = SinusoidFrame(0.1, 0.3, ctx);
  const auto peaks = FindPeaks(mag);
  REQUIRE(!peaks.empty());
  std::size_t best = peaks.front();
  for (std::size_t p : peaks)
    if (mag[p] > mag[best]) best = p;
  CHECK(best == 51);  // round(0.1 * 512)
  for (std::size_t p : peaks)
    if (p != best) CHECK(mag[p] < 0.05 * mag[best]);
}

TEST_CASE("refine frequency") {
  const StftConfig config = StftConfig::Default();
  const double e = std::exp(1.0);
  CHECK(RefineFrequency(std::vector<double>{1.0, e, 1.0}, 1, config) == doctest::Approx(1.0 / 512));
  // Flat or convex stencils fall back to the bin centre.
  CHECK(RefineFrequency(std::vector<double>{1.0, 1.0, 1.0}, 1, config) == doctest::Approx(1.0 / 512));
  CHECK(RefineFrequency(std::vector<double>{2.0, 1.0, 2.0}, 1, config) == doctest::Approx(1.0 / 512));
  // Zero neighbour: no log available.
  CHECK(RefineFrequency(std::vector<double>{0.0, 1.0, 0.5}, 1, config) == doctest::Approx(1.0 / 512));
  // Offset is clamped to half a bin.
  const double nu = RefineFrequency(std::vector<double>{1.0, 1.0 + 1e-9, 1e-3}, 1, config);
  CHECK(nu >= 0.5 / 512 - 1e-15);

  const StftContext ctx(config);
  SUBCASE("on-bin sinusoid gives delta = 0") {
    const auto mag = SinusoidFrame(40.0 / 512, 0.0, ctx);
    // The negative-frequency image skews the stencil very slightly.
    CHECK(std::abs(RefineFrequency(mag, 40, config) - 40.0 / 512) < 1e-3 / 512);
  }
  SUBCASE("off-bin sinusoid versus a 64x zero-padded DFT") {
    const double nu_true = 0.07 + 0.3 / 512;
    const auto mag = SinusoidFrame(nu_true, 1.0, ctx);
    const auto peaks = FindPeaks(mag);
    std::size_t best = peaks.front();
    for (std::size_t p : peaks)
      if (mag[p] > mag[best]) best = p;
    const double nu = RefineFrequency(mag, best, config);

    std::vector<double> frame(256);
    for (std::size_t n = 0; n < 256; ++n)
      frame[n] = std::cos(2 * pi * nu_true * double(n) + 1.0) * oracle::PeriodicHann(n, 256);
    const std::size_t fine = 256 * 64;
    double best_val = -1.0, argmax = 0.0;
    // Search the fine grid only near the coarse peak.
    for (std::size_t k = (best - 2) * 32; k <= (best + 2) * 32; ++k) {
      oracle::cd acc = 0.0;
      for (std::size_t n = 0; n < 256; ++n) acc += frame[n] * std::polar(1.0, -2 * pi * double(k * n) / double(fine));
      if (std::abs(acc) > best_val) { best_val = std::abs(acc); argmax = double(k) / double(fine); }
    }
    CHECK(std::abs(argmax - nu_true) < 1.0 / fine);
    CHECK(std::abs(nu - nu_true) < 0.3 / 512);
  }
}

TEST_CASE("assign regions") {
  const std::vector<std::size_t> one{10};
  for (std::size_t r : AssignRegions(one, 20)) CHECK(r == 10);
  const std::vector<std::size_t> two{4, 12};
  const auto region = AssignRegions(two, 20);
  CHECK(region[0] == 4);
  CHECK(region[8] == 4);
  CHECK(region[9] == 12);
  CHECK(region[19] == 12);
  const auto none = AssignRegions({}, 5);
  CHECK(none == std::vector<std::size_t>{0, 1, 2, 3, 4});

  const auto set = AnalyzePeaks(std::vector<double>{0, 1, 3, 1, 0, 0, 2, 0}, StftConfig::Default());
  REQUIRE(set.peaks.size() == 2);
  CHECK(set.frequency[0] == set.peaks[0].frequency);
  CHECK(set.frequency[7] == set.peaks[1].frequency);
}

TEST_CASE("sinusoidal phase") {
  const StftContext ctx(StftConfig::Default());
  const auto& config = ctx.config();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> angle(-pi, pi);
  std::vector<double> prev(config.num_bins());
  for (double& p : prev) p = angle(rng);

  SUBCASE("whole-cycle advance leaves the phase unchanged") {
    // Symmetric peak at bin 8: nu = 8 / 512, hop * nu = 2 cycles.
    std::vector<double> mag(config.num_bins(), 0.0);
    mag[7] = 0.5, mag[8] = 1.0, mag[9] = 0.5;
    const auto next = SinusoidalPhase(prev, mag, config);
    for (std::size_t f = 0; f < prev.size(); ++f)
      CHECK(std::abs(WrapPhase(next[f] - prev[f])) < 1e-12);
  }
  SUBCASE("no peaks: the DC bin does not advance") {
    const auto next = SinusoidalPhase(prev, std::vector<double>(config.num_bins(), 0.0), config);
    CHECK(next[0] == doctest::Approx(prev[0]));
  }
  SUBCASE("outputs are wrapped and shift-equivariant") {
    std::vector<double> mag(config.num_bins());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double& m : mag) m = unit(rng);
    const auto base = SinusoidalPhase(prev, mag, config);
    std::vector<double> shifted(prev);
    for (double& p : shifted) p = WrapPhase(p + 2.0);
    const auto moved = SinusoidalPhase(shifted, mag, config);
    for (std::size_t f = 0; f < base.size(); ++f) {
      CHECK(base[f] > -pi);
      CHECK(base[f] <= pi);
      CHECK(std::abs(WrapPhase(moved[f] - base[f] - 2.0)) < 1e-9);
    }
  }
  SUBCASE("tracks the STFT phase of a stationary sinusoid") {
    const double nu = 0.05;
    std::vector<double> x(256 + 128 * 10);
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = std::cos(2 * pi * nu * double(n) + 0.4);
    const auto spec = ctx.Forward(TimeSignal(x, 16000));
    const auto mag = spec.Magnitude();
    std::size_t peak = 0;
    for (std::size_t f = 1; f < spec.num_bins(); ++f)
      if (mag(f, 0) > mag(peak, 0)) peak = f;
    auto phase = MixturePhase(spec.frame(0));
    for (std::size_t t = 1; t <= 10; ++t) {
      phase = SinusoidalPhase(phase, mag.frame(t), config);
      CHECK(std::abs(WrapPhase(phase[peak] - std::arg(spec(peak, t)))) < 0.2);
    }
  }
}

TEST_CASE("initial phases for a whole source") {
  const StftContext ctx(StftConfig::Default());
  std::mt19937_64 rng(2);
  const auto x = oracle::RandomSignal(rng, 2000);
  const auto spec = ctx.Forward(TimeSignal(x, 16000));
  const auto mag = spec.Magnitude();
  const auto mixed = InitialPhases(spec, mag, PhaseInit::kMixture);
  const auto sinus = InitialPhases(spec, mag, PhaseInit::kSinusoidal);
  for (std::size_t t = 0; t < spec.num_frames(); ++t) {
    const auto expected = MixturePhase(spec.frame(t));
    for (std::size_t f = 0; f < spec.num_bins(); ++f) CHECK(mixed(f, t) == expected[f]);
  }
  for (std::size_t f = 0; f < spec.num_bins(); ++f) CHECK(sinus(f, 0) == mixed(f, 0));
  const auto step = SinusoidalPhase(sinus.frame(0), mag.frame(1), ctx.config());
  for (std::size_t f = 0; f < spec.num_bins(); ++f) CHECK(sinus(f, 1) == step[f]);
}
