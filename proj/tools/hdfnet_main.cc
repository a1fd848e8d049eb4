// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Command-line front end. Every command prints a line-oriented key=value
// summary on success; every failure exits nonzero with one diagnostic line on
// stderr.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "hdfnet/fixture.h"
#include "hdfnet/layout.h"
#include "hdfnet/loss.h"
#include "hdfnet/model.h"
#include "hdfnet/run_config.h"
#include "hdfnet/verify/acceptance.h"
#include "hdfnet/wav.h"

namespace {

using hdf::RunConfig;

RunConfig load_run_config(const std::string& path) {
  return path.empty() ? RunConfig{} : RunConfig::load(path);
}

std::string shape_string(const std::vector<std::size_t>& shape) {
  std::string s;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    s += (i ? "x" : "") + std::to_string(shape[i]);
  }
  return s;
}

void print_structure(const hdf::ModelConfig& cfg) {
  std::printf("params_total=%zu\n", hdf::param_count(cfg));
  std::printf("macs_per_second=%.0f\n", hdf::macs_per_second(cfg));
  std::printf("config_digest=%016" PRIx64 "\n", cfg.digest());
}

std::string required(const std::string& flag, const std::string& cli,
                     const std::string& from_config) {
  if (!cli.empty()) return cli;
  if (!from_config.empty()) return from_config;
  throw hdf::InvalidArgument(flag + " is required (flag or config key)");
}

int cmd_enhance(const std::string& in, const std::string& out,
                const std::string& weights, const std::string& config,
                bool pcm16) {
  RunConfig run = load_run_config(config);
  const std::string in_path = required("--in", in, run.input_path);
  const std::string out_path = required("--out", out, run.output_path);
  const std::string w_path = required("--weights", weights, run.weights_path);

  const hdf::Waveform noisy = hdf::read_wav(in_path);
  const hdf::WeightBundle bundle = hdf::load_weights(w_path, run.model);
  const hdf::HdfNet net(bundle, run.model);
  const hdf::ComplexSpectrogram x = hdf::stft(noisy, run.model.stft);
  const hdf::ComplexSpectrogram s = net.enhance(x);
  const hdf::Waveform clean = hdf::istft(s, run.model.stft, noisy.size());
  hdf::write_wav(out_path, clean,
                 pcm16 ? hdf::WavEncoding::kPcm16 : hdf::WavEncoding::kFloat32);
  double peak = 0.0;
  for (double v : clean.samples) peak = std::max(peak, std::abs(v));
  std::printf("input=%s\noutput=%s\nsamples=%zu\nframes=%zu\nbins=%zu\n"
              "output_peak=%.6g\n",
              in_path.c_str(), out_path.c_str(), clean.size(), s.frames(),
              s.bins(), peak);
  return 0;
}

int cmd_inspect(const std::string& weights, const std::string& config) {
  RunConfig run = load_run_config(config);
  const std::string w_path = weights.empty() ? run.weights_path : weights;
  if (!w_path.empty()) {
    // Read first so a digest mismatch is reported by validate_bundle below
    // with both digests, after the table is known to parse.
    const hdf::WeightBundle bundle = hdf::read_weights(w_path);
    hdf::validate_bundle(bundle, run.model);
    std::printf("weights=%s\nformat_version=%u\ntensors=%zu\n", w_path.c_str(),
                hdf::kWeightFormatVersion, bundle.size());
    for (const hdf::TensorSpec& spec : hdf::expected_layout(run.model)) {
      std::printf("layer=%s shape=%s numel=%zu%s\n", spec.name.c_str(),
                  shape_string(spec.shape).c_str(), spec.numel(),
                  spec.trainable ? "" : " stat=1");
    }
  }
  print_structure(run.model);
  return 0;
}

int cmd_verify() {
  int failed = 0;
  for (const auto& c : hdf::verify::acceptance_criteria()) {
    const auto r = hdf::verify::run_criterion(c);
    std::printf("criterion=%s status=%s seconds=%.3f budget=%.0f detail=\"%s\"\n",
                r.id.c_str(), r.ok() ? "pass" : "fail", r.seconds,
                r.budget_seconds, r.detail.c_str());
    std::fflush(stdout);
    failed += r.ok() ? 0 : 1;
  }
  std::printf("failed=%d\n", failed);
  if (failed) {
    std::fprintf(stderr, "error: %d acceptance criteria failed\n", failed);
    return 1;
  }
  return 0;
}

int cmd_loss(const std::string& ref, const std::string& est,
             const std::string& config) {
  RunConfig run = load_run_config(config);
  const hdf::Waveform a = hdf::read_wav(ref);
  const hdf::Waveform b = hdf::read_wav(est);
  if (a.size() != b.size()) {
    throw hdf::ShapeError("reference has " + std::to_string(a.size()) +
                          " samples, estimate " + std::to_string(b.size()));
  }
  const hdf::ComplexSpectrogram sa = hdf::stft(a, run.model.stft);
  const hdf::ComplexSpectrogram sb = hdf::stft(b, run.model.stft);
  std::printf("mag_loss=%.10g\n", hdf::mag_loss(sa, sb, run.loss.c));
  std::printf("comp_loss=%.10g\n", hdf::comp_loss(sa, sb, run.loss.c));
  std::printf("total_loss=%.10g\n", hdf::total_loss(sa, sb, run.loss));
  std::printf("si_sdr_db=%.6f\n", hdf::si_sdr(a, b));
  return 0;
}

int cmd_init(const std::string& out, const std::string& config, bool zero,
             std::uint64_t seed) {
  RunConfig run = load_run_config(config);
  const hdf::WeightBundle w = hdf::init_weights(
      run.model, zero ? hdf::InitKind::kZero : hdf::InitKind::kRandom, seed);
  hdf::save_weights(w, out);
  std::printf("weights=%s\ninit=%s\ntensors=%zu\n", out.c_str(),
              zero ? "zero" : "random", w.size());
  print_structure(run.model);
  return 0;
}

int cmd_parity(const std::string& dir, double tol) {
  const hdf::ParityFixture fx = hdf::load_fixture(dir);
  const hdf::ParityReport r = hdf::replay_fixture(fx);
  std::printf("fixture=%s\nframes=%zu\nbins=%zu\nmax_relative_deviation=%.6g\n",
              dir.c_str(), r.frames, r.bins, r.max_relative_deviation);
  if (!(r.max_relative_deviation <= tol)) {
    std::fprintf(stderr, "error: parity deviation %.6g exceeds %.3g\n",
                 r.max_relative_deviation, tol);
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hdfnet: two-stage hierarchical deep filtering speech enhancer"};
  app.require_subcommand(1);

  std::string in, out, weights, config, ref, est, fixture;
  bool pcm16 = false, zero = false;
  std::uint64_t seed = 0;
  double tol = 1e-4;

  auto* enhance = app.add_subcommand("enhance", "Enhance a 16 kHz mono WAV file");
  enhance->add_option("--in", in, "Noisy input WAV");
  enhance->add_option("--out", out, "Enhanced output WAV");
  enhance->add_option("--weights", weights, "Weight bundle (.hdfw)");
  enhance->add_option("--config", config, "Run configuration file");
  enhance->add_flag("--pcm16", pcm16, "Write 16-bit PCM instead of float32");

  auto* inspect = app.add_subcommand("inspect", "Print layer table, parameter count and MACs");
  inspect->add_option("--weights", weights, "Weight bundle (.hdfw)");
  inspect->add_option("--config", config, "Run configuration file");

  auto* verify = app.add_subcommand("verify", "Run the oracle and property acceptance suite");

  auto* loss = app.add_subcommand("loss", "Compare two WAV files");
  loss->add_option("--ref", ref, "Reference WAV")->required();
  loss->add_option("--est", est, "Estimate WAV")->required();
  loss->add_option("--config", config, "Run configuration file");

  auto* init = app.add_subcommand("init", "Write a random or zero weight bundle");
  init->add_option("--out", out, "Output bundle (.hdfw)")->required();
  init->add_option("--config", config, "Run configuration file");
  init->add_flag("--zero", zero, "All-zero weights (batch-norm scale/var = 1)");
  init->add_option("--seed", seed, "Random seed");

  auto* parity = app.add_subcommand("parity", "Replay a forward-pass parity fixture");
  parity->add_option("--fixture", fixture, "Fixture directory")->required();
  parity->add_option("--tol", tol, "Maximum relative deviation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.get_exit_code() ? e.get_exit_code() : 2;
  }

  try {
    if (*enhance) return cmd_enhance(in, out, weights, config, pcm16);
    if (*inspect) return cmd_inspect(weights, config);
    if (*verify) return cmd_verify();
    if (*loss) return cmd_loss(ref, est, config);
    if (*init) return cmd_init(out, config, zero, seed);
    if (*parity) return cmd_parity(fixture, tol);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
