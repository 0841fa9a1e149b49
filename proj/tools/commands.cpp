// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "specinv/error.hpp"
#include "specinv/inversion.hpp"
#include "specinv/masking.hpp"
#include "specinv/metrics.hpp"
#include "specinv/spectral_file.hpp"
#include "specinv/streaming.hpp"
#include "specinv/synth.hpp"
#include "specinv/wav.hpp"

namespace specinv::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// Flag combinations CLI11 cannot express; reported as usage errors.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StftFlags {
  double win_ms = 16.0;
  double hop_ratio = 0.5;
  std::size_t zpf = 2;
  std::string window = "hann";

  StftConfig Make(double sample_rate) const {
    return StftConfig::FromDuration(
        sample_rate, win_ms, hop_ratio, zpf,
        window == "hann" ? WindowKind::kHannPeriodic : WindowKind::kSqrtHannPeriodic);
  }
};

void AddStftFlags(CLI::App* cmd, StftFlags& flags) {
  cmd->add_option("--win-ms", flags.win_ms, "Window length in milliseconds")
      ->capture_default_str();
  cmd->add_option("--hop-ratio", flags.hop_ratio, "Hop as a fraction of the window")
      ->capture_default_str();
  cmd->add_option("--zpf", flags.zpf, "Zero-padding factor (DFT size / window length)")
      ->capture_default_str();
  cmd->add_option("--window", flags.window, "Analysis window")
      ->check(CLI::IsMember({"hann", "sqrt-hann"}))
      ->capture_default_str();
}

void AddPhaseInitFlag(CLI::App* cmd, std::string& phase_init) {
  cmd->add_option("--phase-init", phase_init, "Phase of new frames")
      ->check(CLI::IsMember({"mixture", "sinusoidal"}))
      ->capture_default_str();
}

PhaseInit ParsePhaseInit(const std::string& name) {
  return name == "sinusoidal" ? PhaseInit::kSinusoidal : PhaseInit::kMixture;
}

std::string WindowName(WindowKind kind) {
  return kind == WindowKind::kHannPeriodic ? "hann" : "sqrt-hann";
}

Json ConfigJson(const StftConfig& c) {
  return Json{{"sample_rate", c.sample_rate},
              {"win_len", c.win_len},
              {"hop", c.hop},
              {"dft_size", c.dft_size},
              {"window", WindowName(c.window_kind)}};
}

double Milliseconds(std::size_t samples, double sample_rate) {
  return 1e3 * static_cast<double>(samples) / sample_rate;
}

TimeSignal Truncated(const TimeSignal& signal, std::size_t length) {
  const auto s = signal.samples().first(std::min(length, signal.size()));
  return TimeSignal({s.begin(), s.end()}, signal.sample_rate());
}

std::vector<TimeSignal> ReadSignals(const std::vector<std::string>& paths) {
  std::vector<TimeSignal> out;
  for (const auto& p : paths) {
    out.push_back(ReadWav(fs::path(p)).signal);
    if (out.back().sample_rate() != out.front().sample_rate())
      throw DataError(p + ": sample rate " + std::to_string(out.back().sample_rate()) +
                      " differs from " + std::to_string(out.front().sample_rate()));
  }
  return out;
}

void RequireEqualLengths(const std::vector<TimeSignal>& signals, const std::string& what) {
  for (const auto& s : signals)
    if (s.size() != signals.front().size())
      throw ShapeError(what + " differ in length (" + std::to_string(s.size()) + " vs " +
                       std::to_string(signals.front().size()) + " samples)");
}

struct OutputFlags {
  bool normalize = false;
  bool pcm16 = false;
};

void AddOutputFlags(CLI::App* cmd, OutputFlags& flags) {
  cmd->add_flag("--normalize", flags.normalize, "Rescale stems whose peak exceeds 1");
  cmd->add_flag("--pcm16", flags.pcm16, "Write 16-bit PCM instead of float32");
}

void WriteStem(const fs::path& path, const TimeSignal& signal, const OutputFlags& flags,
               std::ostream& err) {
  double peak = 0.0;
  for (double v : signal.samples()) peak = std::max(peak, std::abs(v));
  if (peak <= 1.0) {
    WriteWav(path, signal, flags.pcm16 ? SampleFormat::kPcm16 : SampleFormat::kFloat32);
    return;
  }
  if (!flags.normalize) {
    err << "warning: " << path.string() << " peaks at " << peak
        << (flags.pcm16 ? " and will clip" : "") << "; pass --normalize to rescale\n";
    WriteWav(path, signal, flags.pcm16 ? SampleFormat::kPcm16 : SampleFormat::kFloat32);
    return;
  }
  std::vector<double> scaled(signal.samples().begin(), signal.samples().end());
  for (double& v : scaled) v /= peak;
  WriteWav(path, TimeSignal(std::move(scaled), signal.sample_rate()),
           flags.pcm16 ? SampleFormat::kPcm16 : SampleFormat::kFloat32);
}

void WriteJson(const fs::path& path, const Json& json) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << json.dump(2) << '\n';
}

void AddScores(Json& run, const std::vector<TimeSignal>& estimates,
               const std::vector<TimeSignal>& references, const TimeSignal& mixture) {
  if (references.empty()) {
    run["si_sdr"] = nullptr;
    run["si_sdri"] = nullptr;
    run["mean_si_sdri"] = nullptr;
    return;
  }
  const SeparationReport report = Evaluate("", estimates, references, mixture);
  run["si_sdr"] = report.si_sdr;
  run["si_sdri"] = report.si_sdri;
  run["mean_si_sdri"] = report.mean_si_sdri;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeOptions {
  std::vector<std::string> inputs;
  std::string out;
  std::string complex_out;
  StftFlags stft;
};

void Analyze(const AnalyzeOptions& opt, std::ostream& out) {
  const std::vector<TimeSignal> signals = ReadSignals(opt.inputs);
  RequireEqualLengths(signals, "inputs");
  const StftContext ctx(opt.stft.Make(signals.front().sample_rate()));
  std::vector<Spectrogram> spectra;
  std::vector<RealMatrix> magnitudes;
  for (const auto& s : signals) {
    spectra.push_back(ctx.Forward(s));
    magnitudes.push_back(spectra.back().Magnitude());
  }
  WriteMagnitudes(fs::path(opt.out), MagnitudeSet(std::move(magnitudes)));
  if (!opt.complex_out.empty()) WriteSpectrograms(fs::path(opt.complex_out), spectra);
  out << "F=" << spectra.front().num_bins() << " T=" << spectra.front().num_frames()
      << " J=" << spectra.size() << " (win_len " << ctx.config().win_len << ", hop "
      << ctx.config().hop << ", dft_size " << ctx.config().dft_size << ")\n";
}

// ------------------------------------------------------------- synthesize

struct SynthesizeOptions {
  std::string input;
  std::string out;
  bool exact_edges = false;
  OutputFlags output;
};

void Synthesize(const SynthesizeOptions& opt, std::ostream& out, std::ostream& err) {
  const std::vector<Spectrogram> spectra = ReadSpectrograms(fs::path(opt.input));
  const StftContext ctx(spectra.front().config());
  const fs::path target(opt.out);
  for (std::size_t j = 0; j < spectra.size(); ++j) {
    const TimeSignal signal =
        opt.exact_edges ? ctx.InverseExactEdges(spectra[j]) : ctx.Inverse(spectra[j]);
    fs::path path = target;
    if (spectra.size() > 1)
      path = target.parent_path() /
             (target.stem().string() + "_" + std::to_string(j) + target.extension().string());
    WriteStem(path, signal, opt.output, err);
    out << path.string() << ": " << signal.size() << " samples\n";
  }
}

// --------------------------------------------------------------- separate

struct SeparateOptions {
  std::string scenario = "oracle";
  std::vector<std::string> sources;
  std::size_t synthetic = 0;
  double duration = 1.0;
  double sample_rate = 16000.0;
  std::string mixture;
  std::string magnitudes;
  std::vector<std::string> algorithms{"am", "misi", "omisi"};
  std::vector<std::size_t> lookahead{0, 1, 2};
  std::size_t iters = 15;
  std::size_t omisi_iters = 0;
  std::string phase_init = "mixture";
  std::optional<double> snr;
  std::uint64_t seed = 0;
  std::string out;
  OutputFlags output;
  StftFlags stft;
};

// Scales sources 2.. so that source 1 is `snr_db` above each of them.
void ApplySnr(std::vector<TimeSignal>& sources, double snr_db) {
  auto energy = [](const TimeSignal& s) {
    double e = 0.0;
    for (double v : s.samples()) e += v * v;
    return e;
  };
  const double reference = energy(sources.front());
  for (std::size_t j = 1; j < sources.size(); ++j) {
    const double e = energy(sources[j]);
    if (e == 0.0 || reference == 0.0) continue;
    const double gain = std::sqrt(reference / e * std::pow(10.0, -snr_db / 10.0));
    for (double& v : sources[j].mutable_samples()) v *= gain;
  }
}

void WriteLossCsv(const fs::path& path, const std::string& header,
                  const std::function<void(std::ostream&)>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << std::setprecision(17) << header << '\n';
  rows(out);
}

void Separate(const SeparateOptions& opt, std::ostream& out, std::ostream& err) {
  const bool oracle = opt.scenario == "oracle";
  if (oracle) {
    if (opt.sources.empty() == (opt.synthetic == 0))
      throw UsageError("the oracle scenario needs exactly one of --sources or --synthetic");
    if (!opt.mixture.empty() || !opt.magnitudes.empty())
      throw UsageError("--mixture and --magnitudes belong to the external scenario");
  } else {
    if (opt.mixture.empty() || opt.magnitudes.empty())
      throw UsageError("the external scenario needs --mixture and --magnitudes");
    if (opt.synthetic != 0) throw UsageError("--synthetic needs the oracle scenario");
    if (opt.snr) throw UsageError("--snr needs the oracle scenario");
  }
  if (opt.algorithms.empty()) throw UsageError("no algorithms requested");
  if (opt.iters == 0 && std::count(opt.algorithms.begin(), opt.algorithms.end(), "omisi"))
    throw UsageError("--iters must be at least 1 when omisi is requested");

  // References (possibly empty in the external scenario) and the mixture.
  std::vector<TimeSignal> references;
  if (opt.synthetic != 0) {
    if (!(opt.duration > 0) || !(opt.sample_rate > 0))
      throw UsageError("--duration and --sample-rate must be positive");
    const auto length = static_cast<std::size_t>(std::lround(opt.duration * opt.sample_rate));
    references = SynthesizeSpeakers(opt.synthetic, length, opt.sample_rate, opt.seed);
  } else if (!opt.sources.empty()) {
    references = ReadSignals(opt.sources);
    RequireEqualLengths(references, "sources");
  }
  if (opt.snr) ApplySnr(references, *opt.snr);

  TimeSignal mixture;
  if (oracle) {
    mixture = MixSignals(references);
  } else {
    mixture = ReadWav(fs::path(opt.mixture)).signal;
    if (!references.empty()) {
      if (references.front().sample_rate() != mixture.sample_rate())
        throw DataError("references and mixture differ in sample rate");
      if (references.front().size() != mixture.size())
        throw ShapeError("references and mixture differ in length");
    }
  }

  const StftContext ctx(opt.stft.Make(mixture.sample_rate()));
  const Spectrogram x = ctx.Forward(mixture);
  const MagnitudeSet target =
      oracle ? OracleMagnitudes(references, ctx) : ReadMagnitudes(fs::path(opt.magnitudes));
  target.CheckShape(x.num_bins(), x.num_frames());
  if (!references.empty() && references.size() != target.num_sources())
    throw ShapeError("the magnitude file has " + std::to_string(target.num_sources()) +
                     " sources but " + std::to_string(references.size()) + " references were given");
  const std::size_t num_sources = target.num_sources();
  const PhaseInit init = ParsePhaseInit(opt.phase_init);

  const fs::path dir(opt.out);
  fs::create_directories(dir);
  WriteStem(dir / "mixture.wav", mixture, opt.output, err);
  if (opt.synthetic != 0)
    for (std::size_t j = 0; j < references.size(); ++j)
      WriteStem(dir / ("reference_" + std::to_string(j) + ".wav"), references[j], opt.output, err);

  Json report;
  report["schema"] = "specinv.separation";
  report["schema_version"] = kReportSchemaVersion;
  report["scenario"] = opt.scenario;
  report["seed"] = opt.synthetic != 0 ? Json(opt.seed) : Json(nullptr);
  report["inputs"] = Json{{"sources", opt.sources},
                          {"synthetic_sources", opt.synthetic},
                          {"mixture", opt.mixture},
                          {"magnitudes", opt.magnitudes}};
  report["stft"] = ConfigJson(ctx.config());
  report["num_sources"] = num_sources;
  report["num_samples"] = mixture.size();
  report["num_frames"] = x.num_frames();
  report["phase_init"] = opt.phase_init;
  report["runs"] = Json::array();

  auto finish = [&](Json run, const std::string& name, std::vector<TimeSignal> stems) {
    fs::create_directories(dir / name);
    Json files = Json::array();
    for (std::size_t j = 0; j < stems.size(); ++j) {
      const std::string file = name + "/source_" + std::to_string(j) + ".wav";
      WriteStem(dir / file, stems[j], opt.output, err);
      files.push_back(file);
    }
    AddScores(run, stems, references, mixture);
    run["stems"] = files;
    out << std::left << std::setw(10) << name << " latency " << std::setw(6)
        << run["latency_samples"].get<std::size_t>() << " samples";
    if (!run["mean_si_sdri"].is_null())
      out << "  mean SI-SDRi " << std::fixed << std::setprecision(2)
          << run["mean_si_sdri"].get<double>() << " dB" << std::defaultfloat;
    out << '\n';
    report["runs"].push_back(std::move(run));
  };

  for (const std::string& algorithm : opt.algorithms) {
    if (algorithm == "am") {
      std::vector<TimeSignal> stems;
      for (const auto& s : AmplitudeMask(target, x)) stems.push_back(ctx.Inverse(s));
      DistributeSignal(stems, Truncated(mixture, stems.front().size()));
      Json run{{"name", "am"}, {"algorithm", "am"}, {"lookahead", nullptr},
               {"iterations", 0}, {"latency_samples", ctx.config().win_len},
               {"latency_ms", Milliseconds(ctx.config().win_len, mixture.sample_rate())},
               {"loss_csv", nullptr}};
      finish(std::move(run), "am", std::move(stems));
    } else if (algorithm == "misi") {
      InversionResult result = Misi(mixture, target, ctx, {.iterations = opt.iters, .init = init});
      WriteLossCsv(dir / "misi_loss.csv", "iteration,loss", [&](std::ostream& csv) {
        for (std::size_t k = 0; k < result.loss_trace.size(); ++k)
          csv << k << ',' << result.loss_trace[k] << '\n';
      });
      // Offline: nothing can be emitted before the whole mixture is known.
      Json run{{"name", "misi"}, {"algorithm", "misi"}, {"lookahead", nullptr},
               {"iterations", opt.iters}, {"latency_samples", mixture.size()},
               {"latency_ms", Milliseconds(mixture.size(), mixture.sample_rate())},
               {"loss_csv", "misi_loss.csv"}, {"loss_trace", result.loss_trace}};
      finish(std::move(run), "misi", std::move(result.signals));
    } else if (algorithm == "omisi") {
      for (std::size_t k : opt.lookahead) {
        StreamConfig config;
        config.stft = ctx.config();
        config.num_sources = num_sources;
        config.lookahead = k;
        config.iters_per_frame =
            opt.omisi_iters != 0 ? opt.omisi_iters : StreamConfig::DefaultIterations(k, opt.iters);
        config.phase_init = init;
        config.record_loss = true;
        std::vector<std::vector<double>> traces;
        std::vector<TimeSignal> stems = StreamSeparate(config, mixture, target, &traces);
        const std::string name = "omisi_k" + std::to_string(k);
        WriteLossCsv(dir / (name + "_loss.csv"), "frame,iteration,loss", [&](std::ostream& csv) {
          for (std::size_t u = 0; u < traces.size(); ++u) {
            // Each update runs when its newest frame arrives.
            const std::size_t frame = std::min(u + k, x.num_frames() - 1);
            for (std::size_t i = 0; i < traces[u].size(); ++i)
              csv << frame << ',' << i << ',' << traces[u][i] << '\n';
          }
        });
        Json run{{"name", name}, {"algorithm", "omisi"}, {"lookahead", k},
                 {"iterations", config.iters_per_frame},
                 {"latency_samples", LatencySamples(config)},
                 {"latency_ms", Milliseconds(LatencySamples(config), mixture.sample_rate())},
                 {"loss_csv", name + "_loss.csv"}};
        finish(std::move(run), name, std::move(stems));
      }
    } else {
      throw UsageError("unknown algorithm '" + algorithm + "'");
    }
  }
  WriteJson(dir / "report.json", report);
}

// ----------------------------------------------------------------- stream

struct StreamOptions {
  std::string mixture;
  std::string magnitudes;
  std::vector<std::string> sources;
  std::size_t lookahead = 0;
  std::size_t iters = 0;
  std::string phase_init = "mixture";
  std::string out;
  OutputFlags output;
  StftFlags stft;
};

void Stream(const StreamOptions& opt, std::ostream& out, std::ostream& err) {
  const TimeSignal mixture = ReadWav(fs::path(opt.mixture)).signal;
  const MagnitudeSet target = ReadMagnitudes(fs::path(opt.magnitudes));
  const StftContext ctx(opt.stft.Make(mixture.sample_rate()));
  const StftConfig& c = ctx.config();
  const std::size_t frames = c.NumFrames(mixture.size());
  if (target.num_frames() != frames || target.num_bins() != c.num_bins())
    throw ShapeError("magnitude file is " + std::to_string(target.num_bins()) + "x" +
                     std::to_string(target.num_frames()) + " but the mixture gives " +
                     std::to_string(c.num_bins()) + "x" + std::to_string(frames));
  std::vector<TimeSignal> references;
  if (!opt.sources.empty()) {
    references = ReadSignals(opt.sources);
    if (references.size() != target.num_sources())
      throw ShapeError("reference count differs from the magnitude file");
  }

  StreamConfig config;
  config.stft = c;
  config.num_sources = target.num_sources();
  config.lookahead = opt.lookahead;
  config.iters_per_frame =
      opt.iters != 0 ? opt.iters : StreamConfig::DefaultIterations(opt.lookahead);
  config.phase_init = ParsePhaseInit(opt.phase_init);

  // Push frame by frame as the samples would arrive, timing each push.
  OnlineMisi stream(config);
  SourceBlocks stems(config.num_sources);
  std::size_t emitted = 0;
  auto append = [&](SourceBlocks blocks) {
    DistributeBlocks(blocks, mixture.samples().subspan(emitted, blocks.front().size()));
    emitted += blocks.front().size();
    for (std::size_t j = 0; j < stems.size(); ++j)
      stems[j].insert(stems[j].end(), blocks[j].begin(), blocks[j].end());
  };
  std::vector<double> seconds;
  std::vector<std::size_t> emitted_after;
  std::vector<Complex> bins(c.num_bins());
  std::vector<std::span<const double>> mags(config.num_sources);
  for (std::size_t t = 0; t < frames; ++t) {
    const auto start = std::chrono::steady_clock::now();
    FrameDft(mixture.samples().subspan(t * c.hop, c.win_len), c, ctx.analysis(), bins);
    for (std::size_t j = 0; j < mags.size(); ++j) mags[j] = target[j].frame(t);
    auto blocks = stream.Push(bins, mags);
    if (blocks) append(std::move(*blocks));
    seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    emitted_after.push_back(emitted);
  }
  append(stream.Close());

  const fs::path dir(opt.out);
  fs::create_directories(dir);
  std::vector<TimeSignal> signals;
  for (std::size_t j = 0; j < stems.size(); ++j) {
    signals.emplace_back(std::move(stems[j]), mixture.sample_rate());
    WriteStem(dir / ("source_" + std::to_string(j) + ".wav"), signals.back(), opt.output, err);
  }
  {
    std::ofstream log(dir / "frame_times.csv");
    if (!log) throw DataError("cannot write frame_times.csv");
    log << std::setprecision(9) << "frame,seconds,emitted_samples\n";
    for (std::size_t t = 0; t < seconds.size(); ++t)
      log << t << ',' << seconds[t] << ',' << emitted_after[t] << '\n';
  }

  Json report;
  report["schema"] = "specinv.stream";
  report["schema_version"] = kReportSchemaVersion;
  report["inputs"] = Json{{"mixture", opt.mixture}, {"magnitudes", opt.magnitudes},
                          {"sources", opt.sources}};
  report["stft"] = ConfigJson(c);
  report["num_sources"] = config.num_sources;
  report["num_frames"] = frames;
  report["lookahead"] = config.lookahead;
  report["iterations"] = config.iters_per_frame;
  report["phase_init"] = opt.phase_init;
  report["latency_samples"] = LatencySamples(config);
  report["latency_ms"] = Milliseconds(LatencySamples(config), mixture.sample_rate());
  AddScores(report, signals, references, mixture);
  WriteJson(dir / "stream_report.json", report);

  double total = 0.0, worst = 0.0;
  for (double s : seconds) total += s, worst = std::max(worst, s);
  const double hop_ms = Milliseconds(c.hop, mixture.sample_rate());
  const double mean_ms = frames ? 1e3 * total / static_cast<double>(frames) : 0.0;
  out << "frames " << frames << ", latency " << LatencySamples(config) << " samples ("
      << report["latency_ms"].get<double>() << " ms), " << config.iters_per_frame
      << " iterations per frame\n"
      << "per-frame time: mean " << mean_ms << " ms, max " << 1e3 * worst << " ms, hop "
      << hop_ms << " ms (real-time factor " << mean_ms / hop_ms << ")\n";
  if (!report["mean_si_sdri"].is_null())
    out << "mean SI-SDRi " << report["mean_si_sdri"].get<double>() << " dB\n";
}

// ---------------------------------------------------------------- metrics

struct MetricsOptions {
  std::vector<std::string> estimates;
  std::vector<std::string> references;
  std::string mixture;
  std::string out;
};

void Metrics(const MetricsOptions& opt, std::ostream& out) {
  if (opt.estimates.size() != opt.references.size())
    throw UsageError("give as many --reference files as --estimate files");
  const std::vector<TimeSignal> estimates = ReadSignals(opt.estimates);
  const std::vector<TimeSignal> references = ReadSignals(opt.references);
  if (estimates.front().sample_rate() != references.front().sample_rate())
    throw DataError("estimates and references differ in sample rate");
  Json report;
  report["schema"] = "specinv.metrics";
  report["schema_version"] = kReportSchemaVersion;
  report["estimates"] = opt.estimates;
  report["references"] = opt.references;
  if (opt.mixture.empty()) {
    std::vector<double> scores;
    for (std::size_t j = 0; j < estimates.size(); ++j)
      scores.push_back(SiSdr(estimates[j], references[j]));
    report["si_sdr"] = scores;
  } else {
    const TimeSignal mixture = ReadWav(fs::path(opt.mixture)).signal;
    if (mixture.sample_rate() != references.front().sample_rate())
      throw DataError("mixture and references differ in sample rate");
    report["mixture"] = opt.mixture;
    AddScores(report, estimates, references, mixture);
  }
  if (!opt.out.empty()) WriteJson(fs::path(opt.out), report);
  out << report.dump(2) << '\n';
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase recovery for source separation: offline and online MISI", "specinv"};
  app.require_subcommand(1);
  std::function<void()> action;

  AnalyzeOptions analyze;
  auto* a = app.add_subcommand("analyze", "Write STFT magnitudes (and optionally the complex STFT)");
  a->add_option("inputs", analyze.inputs, "Mono WAV files, one per source")->required();
  a->add_option("--out", analyze.out, "Magnitude file (MSPC)")->required();
  a->add_option("--complex", analyze.complex_out, "Complex spectrogram file (CSPC)");
  AddStftFlags(a, analyze.stft);
  a->callback([&] { action = [&] { Analyze(analyze, out); }; });

  SynthesizeOptions synth;
  auto* s = app.add_subcommand("synthesize", "Inverse STFT of a complex spectrogram file");
  s->add_option("input", synth.input, "Complex spectrogram file (CSPC)")->required();
  s->add_option("--out", synth.out, "Output WAV; several sources get _<j> suffixes")->required();
  s->add_flag("--exact-edges", synth.exact_edges,
              "Least-squares synthesis that also restores the first and last samples");
  AddOutputFlags(s, synth.output);
  s->callback([&] { action = [&] { Synthesize(synth, out, err); }; });

  SeparateOptions sep;
  auto* p = app.add_subcommand("separate", "Run AM / MISI / oMISI and score the results");
  p->add_option("--scenario", sep.scenario, "oracle: magnitudes of the sources; external: from file")
      ->check(CLI::IsMember({"oracle", "external"}))
      ->capture_default_str();
  p->add_option("--sources", sep.sources, "Source WAVs (oracle) or references to score against");
  p->add_option("--synthetic", sep.synthetic, "Generate this many speech-like sources");
  p->add_option("--duration", sep.duration, "Length of synthetic sources in seconds")
      ->capture_default_str();
  p->add_option("--sample-rate", sep.sample_rate, "Sample rate of synthetic sources")
      ->capture_default_str();
  p->add_option("--seed", sep.seed, "Seed for synthetic sources")->capture_default_str();
  p->add_option("--mixture", sep.mixture, "Mixture WAV (external scenario)");
  p->add_option("--magnitudes", sep.magnitudes, "Magnitude file (external scenario)");
  p->add_option("--algorithms", sep.algorithms, "Comma-separated subset of am,misi,omisi")
      ->delimiter(',')
      ->check(CLI::IsMember({"am", "misi", "omisi"}));
  p->add_option("--lookahead", sep.lookahead, "Comma-separated lookahead frames K for omisi")
      ->delimiter(',');
  p->add_option("--iters", sep.iters, "Offline iterations; omisi uses round(iters / (K + 1))")
      ->capture_default_str();
  p->add_option("--omisi-iters", sep.omisi_iters, "Override omisi iterations per frame");
  p->add_option("--snr", sep.snr, "Rescale sources 2.. to this many dB below source 1");
  p->add_option("--out", sep.out, "Output directory")->required();
  AddPhaseInitFlag(p, sep.phase_init);
  AddOutputFlags(p, sep.output);
  AddStftFlags(p, sep.stft);
  p->callback([&] { action = [&] { Separate(sep, out, err); }; });

  StreamOptions str;
  auto* t = app.add_subcommand("stream", "Online MISI, frame by frame, with timing");
  t->add_option("--mixture", str.mixture, "Mixture WAV")->required();
  t->add_option("--magnitudes", str.magnitudes, "Magnitude file (MSPC)")->required();
  t->add_option("--sources", str.sources, "Reference WAVs to score against");
  t->add_option("--lookahead", str.lookahead, "Lookahead frames K")->capture_default_str();
  t->add_option("--iters", str.iters, "Iterations per frame (default round(15 / (K + 1)))");
  t->add_option("--out", str.out, "Output directory")->required();
  AddPhaseInitFlag(t, str.phase_init);
  AddOutputFlags(t, str.output);
  AddStftFlags(t, str.stft);
  t->callback([&] { action = [&] { Stream(str, out, err); }; });

  MetricsOptions met;
  auto* m = app.add_subcommand("metrics", "SI-SDR (and SI-SDRi with --mixture) of WAV files");
  m->add_option("--estimate", met.estimates, "Estimated sources")->required();
  m->add_option("--reference", met.references, "Reference sources, index-aligned")->required();
  m->add_option("--mixture", met.mixture, "Mixture, for SI-SDRi");
  m->add_option("--out", met.out, "Also write the JSON report here");
  m->callback([&] { action = [&] { Metrics(met, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    action();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ReconstructionInfeasible& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace specinv::cli
