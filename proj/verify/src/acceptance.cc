// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "hdfnet/verify/acceptance.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <numbers>

#include "hdfnet/layout.h"
#include "hdfnet/loss.h"

namespace hdf::verify {
namespace {

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return buf;
}

bool frames_identical(const ComplexSpectrogram& a, const ComplexSpectrogram& b,
                      std::size_t upto) {
  const std::size_t n = (upto + 1) * a.bins();
  return std::memcmp(a.real().data(), b.real().data(), n * sizeof(double)) == 0 &&
         std::memcmp(a.imag().data(), b.imag().data(), n * sizeof(double)) == 0;
}

void fill_frame(ComplexSpectrogram& s, std::size_t t, oracle::Rng& rng) {
  for (std::size_t f = 0; f < s.bins(); ++f) {
    s.re(t, f) = oracle::uniform(rng);
    s.im(t, f) = oracle::uniform(rng);
  }
}

bool all_finite(const ComplexSpectrogram& s) {
  for (double v : s.real()) if (!std::isfinite(v)) return false;
  for (double v : s.imag()) if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

Outcome check_param_count() {
  const double n = static_cast<double>(param_count(ModelConfig::defaults()));
  return {n >= kParamsLow && n <= kParamsHigh,
          format("params=%.0f (%.3f M) band=[0.10 M, 0.40 M] reported=0.20 M",
                 n, n / 1e6)};
}

Outcome check_macs() {
  const double m = macs_per_second(ModelConfig::defaults());
  return {m >= kMacsLow && m <= kMacsHigh,
          format("macs=%.4f G/s band=[0.2, 0.9] reported=0.43", m / 1e9)};
}

Outcome check_filtering_oracles(std::uint64_t seed) {
  oracle::Rng rng(seed);
  double worst_oracle = 0.0, worst_lattice = 0.0;
  for (int n = 0; n < kFilterInstances; ++n) {
    const std::size_t frames = 1 + rng() % 6, bins = 1 + rng() % 8;
    const std::size_t taps = 1 + rng() % 4, half = rng() % 3;
    const ComplexSpectrogram x = oracle::random_spectrogram(rng, frames, bins);
    const FilterSpec specs[] = {FilterSpec::df(taps, half), FilterSpec::tdf(taps),
                                FilterSpec::fdf(half), FilterSpec::crm()};
    for (const FilterSpec& spec : specs) {
      const FilterCoeffs c = oracle::random_coeffs(rng, frames, bins, spec);
      ComplexSpectrogram got;
      switch (spec.mode) {
        case FilterMode::kDf: got = apply_df(x, c); break;
        case FilterMode::kTdf: got = apply_tdf(x, c); break;
        case FilterMode::kFdf: got = apply_fdf(x, c); break;
        case FilterMode::kCrm: got = apply_crm(x, c); break;
      }
      worst_oracle = std::max(worst_oracle,
                              oracle::max_abs_diff(got, oracle::deep_filter(x, c)));
      // Reduction lattice: the restricted geometry equals the general filter
      // with zero coefficients outside its support, both at its own window
      // and inside the largest window of this instance.
      const ComplexSpectrogram tight = apply_df(
          x, oracle::embed_as_df(c, spec.temporal_taps, spec.freq_halfwidth));
      const ComplexSpectrogram wide = apply_df(x, oracle::embed_as_df(c, taps, half));
      worst_lattice = std::max({worst_lattice, oracle::max_abs_diff(got, tight),
                                oracle::max_abs_diff(got, wide)});
    }
    // CRM is also the one-tap TDF and the J = 0 FDF.
    const FilterCoeffs m = oracle::random_coeffs(rng, frames, bins, FilterSpec::crm());
    FilterCoeffs as_tdf(frames, bins, FilterSpec::tdf(1));
    FilterCoeffs as_fdf(frames, bins, FilterSpec::fdf(0));
    as_tdf.real() = as_fdf.real() = m.real();
    as_tdf.imag() = as_fdf.imag() = m.imag();
    const ComplexSpectrogram crm = apply_crm(x, m);
    worst_lattice = std::max({worst_lattice,
                              oracle::max_abs_diff(crm, apply_tdf(x, as_tdf)),
                              oracle::max_abs_diff(crm, apply_fdf(x, as_fdf))});
  }
  return {worst_oracle <= kOracleTol && worst_lattice <= kOracleTol,
          format("instances=%d max_oracle_err=%.3g max_lattice_err=%.3g tol=1e-12",
                 kFilterInstances, worst_oracle, worst_lattice)};
}

CausalityProbe probe_causality(const HdfNet& net, oracle::Rng& rng,
                               std::size_t frames) {
  const std::size_t bins = net.config().linear_bins();
  const ComplexSpectrogram x = oracle::random_spectrogram(rng, frames, bins);
  const ComplexSpectrogram y = net.enhance(x);
  CausalityProbe probe;
  probe.t0 = rng() % (frames - 1);

  ComplexSpectrogram all = x;
  for (std::size_t t = probe.t0 + 1; t < frames; ++t) fill_frame(all, t, rng);
  const bool all_ok = frames_identical(y, net.enhance(all), probe.t0);

  ComplexSpectrogram one = x;
  const std::size_t k = probe.t0 + 1 + rng() % (frames - probe.t0 - 1);
  fill_frame(one, k, rng);
  const bool one_ok = frames_identical(y, net.enhance(one), probe.t0);

  // Control: the probe is only meaningful if the present frame matters.
  ComplexSpectrogram now = x;
  fill_frame(now, probe.t0, rng);
  const ComplexSpectrogram y_now = net.enhance(now);
  const bool sensitive = !frames_identical(y, y_now, probe.t0);

  probe.causal = all_ok && one_ok && sensitive && all_finite(y);
  probe.detail = format("t0=%zu all_future=%s frame_%zu=%s present_frame=%s",
                        probe.t0, all_ok ? "same" : "CHANGED", k,
                        one_ok ? "same" : "CHANGED",
                        sensitive ? "changes output" : "NO EFFECT");
  return probe;
}

Outcome check_causality(std::uint64_t seed) {
  const ModelConfig cfg = ModelConfig::defaults();
  oracle::Rng rng(seed);
  int violations = 0;
  std::string first;
  for (int d = 0; d < kCausalityDraws; ++d) {
    const WeightBundle w = init_weights(cfg, InitKind::kRandom, seed * 1000 + d);
    const HdfNet net(w, cfg);
    const CausalityProbe p = probe_causality(net, rng, 8);
    if (!p.causal) {
      if (violations++ == 0) first = format(" first_violation(draw=%d): %s", d, p.detail.c_str());
    }
  }
  return {violations == 0,
          format("draws=%d frames=8 violations=%d%s", kCausalityDraws, violations,
                 first.c_str())};
}

Outcome check_stft_erb(std::uint64_t seed) {
  oracle::Rng rng(seed);
  const StftParams p;
  // STFT round trip on 1 s of white noise, interior samples only.
  const Waveform w = oracle::random_waveform(rng, kSampleRate);
  const Waveform r = istft(stft(w, p), p, w.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = p.window_len; i + p.window_len < w.size(); ++i) {
    num += (r.samples[i] - w.samples[i]) * (r.samples[i] - w.samples[i]);
    den += w.samples[i] * w.samples[i];
  }
  const double rt = std::sqrt(num / den);

  // Low-band transparency, both compositions, bit-exact.
  const ErbFilterbank fb = ErbFilterbank::build(257, kSampleRate, 65, 64);
  const Tensor4 lin = oracle::random_tensor(rng, 1, 2, 3, fb.linear_bins());
  const Tensor4 band = oracle::random_tensor(rng, 1, 2, 3, fb.bands());
  const Tensor4 lin_rt = erb_synthesize(erb_analyze(lin, fb), fb);
  const Tensor4 band_rt = erb_analyze(erb_synthesize(band, fb), fb);
  std::size_t low_mismatch = 0;
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t t = 0; t < 3; ++t)
      for (std::size_t k = 0; k < fb.low_kept(); ++k) {
        low_mismatch += lin_rt(0, c, t, k) != lin(0, c, t, k);
        low_mismatch += band_rt(0, c, t, k) != band(0, c, t, k);
      }

  // Smooth envelope round trip.
  Tensor4 env(1, 1, 1, fb.linear_bins());
  for (std::size_t k = 0; k < fb.linear_bins(); ++k) {
    const double u = static_cast<double>(k) / static_cast<double>(fb.linear_bins() - 1);
    env(0, 0, 0, k) = 1.0 + 0.5 * std::cos(std::numbers::pi * u) +
                      0.25 * std::cos(2.0 * std::numbers::pi * u);
  }
  const Tensor4 env_rt = erb_synthesize(erb_analyze(env, fb), fb);
  double en = 0.0, ed = 0.0;
  for (std::size_t k = 0; k < fb.linear_bins(); ++k) {
    en += std::pow(env_rt(0, 0, 0, k) - env(0, 0, 0, k), 2);
    ed += std::pow(env(0, 0, 0, k), 2);
  }
  const double env_err = std::sqrt(en / ed);

  return {rt <= kRoundTripTol && low_mismatch == 0 && env_err <= kErbEnvelopeTol,
          format("stft_roundtrip_rel_l2=%.3g (tol 1e-6) low_band_mismatches=%zu "
                 "erb_envelope_rel_l2=%.4f (tol 0.05)",
                 rt, low_mismatch, env_err)};
}

CombResult comb_filter_demo(std::size_t period, std::size_t frames,
                            std::size_t bins, double noise_rms,
                            std::uint64_t seed) {
  oracle::Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, noise_rms / std::sqrt(2.0));
  ComplexSpectrogram clean(frames, bins), noisy(frames, bins);
  const ComplexSpectrogram cycle = oracle::random_spectrogram(rng, period, bins);
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t f = 0; f < bins; ++f) {
      clean.re(t, f) = cycle.re(t % period, f);
      clean.im(t, f) = cycle.im(t % period, f);
      noisy.re(t, f) = clean.re(t, f) + gauss(rng);
      noisy.im(t, f) = clean.im(t, f) + gauss(rng);
    }

  const std::size_t span = 4 * period + 1;
  FilterCoeffs c(frames, bins, FilterSpec::tdf(span));
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t f = 0; f < bins; ++f)
      for (std::size_t i = 0; i < span; i += period) c.re(t, f, i) = 0.2;
  const ComplexSpectrogram out = apply_tdf(noisy, c);

  CombResult res;
  res.min_gain_db = INFINITY;
  double sig_all = 0.0, nin_all = 0.0, nout_all = 0.0;
  for (std::size_t f = 0; f < bins; ++f) {
    double sig = 0.0, nin = 0.0, nout = 0.0;
    for (std::size_t t = span - 1; t < frames; ++t) {
      sig += std::norm(clean.at(t, f));
      nin += std::norm(noisy.at(t, f) - clean.at(t, f));
      nout += std::norm(out.at(t, f) - clean.at(t, f));
    }
    const double gain = 10.0 * std::log10(nin / nout);
    res.mean_gain_db += gain / static_cast<double>(bins);
    res.min_gain_db = std::min(res.min_gain_db, gain);
    sig_all += sig;
    nin_all += nin;
    nout_all += nout;
  }
  res.input_snr_db = 10.0 * std::log10(sig_all / nin_all);
  res.output_snr_db = 10.0 * std::log10(sig_all / nout_all);
  return res;
}

Outcome check_comb_filter(std::uint64_t seed) {
  // Period 1 is the plain order-5 temporal filter; period 3 spaces the five
  // taps like a comb.
  const CombResult p1 = comb_filter_demo(1, 600, 257, 0.5, seed);
  const CombResult p3 = comb_filter_demo(3, 600, 257, 0.5, seed + 1);
  const bool ok = std::min(p1.min_gain_db, p3.min_gain_db) >= kCombGainDb;
  return {ok, format("P=1 mean_gain=%.2f dB min_bin_gain=%.2f dB (snr %.2f -> %.2f); "
                     "P=3 mean_gain=%.2f dB min_bin_gain=%.2f dB; need >= 5 dB",
                     p1.mean_gain_db, p1.min_gain_db, p1.input_snr_db,
                     p1.output_snr_db, p3.mean_gain_db, p3.min_gain_db)};
}

std::vector<GridEntry> mode_grid() {
  using M = FilterMode;
  const std::pair<M, M> pairs[] = {{M::kCrm, M::kCrm}, {M::kCrm, M::kFdf},
                                   {M::kTdf, M::kCrm}, {M::kTdf, M::kTdf},
                                   {M::kFdf, M::kTdf}, {M::kTdf, M::kFdf}};
  std::vector<GridEntry> grid;
  for (const auto& [a, b] : pairs) {
    ModelConfig cfg;
    cfg.stage1_mode = a;
    cfg.stage2_mode = b;
    grid.push_back({std::string(to_string(a)) + "+" + std::string(to_string(b)), cfg});
  }
  grid.push_back({"single-stage-df", ModelConfig::single_stage_df()});
  return grid;
}

Outcome check_mode_grid(std::uint64_t seed) {
  oracle::Rng rng(seed);
  std::string detail;
  bool ok = true;
  std::uint64_t draw = 0;
  for (const GridEntry& e : mode_grid()) {
    const WeightBundle w = init_weights(e.config, InitKind::kRandom, seed * 100 + draw++);
    const HdfNet net(w, e.config);
    const ComplexSpectrogram x = oracle::random_spectrogram(rng, 6, e.config.linear_bins());
    const ComplexSpectrogram y = net.enhance(x);
    const bool shaped = y.same_shape(x) && all_finite(y);
    const CausalityProbe p = probe_causality(net, rng, 6);
    const bool entry_ok = shaped && p.causal;
    ok = ok && entry_ok;
    detail += format("%s%s=%s", detail.empty() ? "" : " ", e.name.c_str(),
                     entry_ok ? "ok" : (shaped ? "NONCAUSAL" : "BADOUTPUT"));
  }
  return {ok, detail};
}

Outcome check_losses(std::uint64_t seed) {
  oracle::Rng rng(seed);
  double worst = 0.0, zero = 0.0;
  LossConfig cfg;  // c = 0.3, alpha = beta = 0.5
  for (int n = 0; n < 50; ++n) {
    const std::size_t frames = 1 + rng() % 6, bins = 1 + rng() % 12;
    const ComplexSpectrogram s = oracle::random_spectrogram(rng, frames, bins, 2.0);
    ComplexSpectrogram e = oracle::random_spectrogram(rng, frames, bins, 2.0);
    if (n % 5 == 0) e.re(0, 0) = e.im(0, 0) = 0.0;  // exercise the zero guard
    const double m = oracle::mag_loss(s, e, cfg.c);
    const double k = oracle::comp_loss(s, e, cfg.c);
    worst = std::max({worst, std::abs(mag_loss(s, e, cfg.c) - m),
                      std::abs(comp_loss(s, e, cfg.c) - k),
                      std::abs(total_loss(s, e, cfg) - (0.5 * m + 0.5 * k))});
    zero = std::max({zero, std::abs(mag_loss(s, s, cfg.c)),
                     std::abs(comp_loss(s, s, cfg.c)),
                     std::abs(total_loss(s, s, cfg))});
  }
  return {worst <= kOracleTol && zero == 0.0,
          format("pairs=50 max_oracle_err=%.3g (tol 1e-12) loss_at_identity=%.3g",
                 worst, zero)};
}

const std::vector<Criterion>& acceptance_criteria() {
  static const std::vector<Criterion> list = {
      {"params", "structural parameter count", 1.0, [] { return check_param_count(); }},
      {"macs", "structural MACs per second", 1.0, [] { return check_macs(); }},
      {"filtering", "filtering oracle suite", 10.0,
       [] { return check_filtering_oracles(); }},
      {"causality", "end-to-end causality suite", 60.0, [] { return check_causality(); }},
      {"stft_erb", "STFT/ERB suite", 10.0, [] { return check_stft_erb(); }},
      {"comb", "comb-filter demonstration", 10.0, [] { return check_comb_filter(); }},
      {"mode_grid", "mode-grid construction", 60.0, [] { return check_mode_grid(); }},
      {"loss", "loss suite", 5.0, [] { return check_losses(); }},
  };
  return list;
}

CriterionResult run_criterion(const Criterion& c) {
  CriterionResult r;
  r.id = c.id;
  r.title = c.title;
  r.budget_seconds = c.budget_seconds;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Outcome o = c.run();
    r.passed = o.passed;
    r.detail = o.detail;
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_acceptance() {
  std::vector<CriterionResult> out;
  for (const Criterion& c : acceptance_criteria()) out.push_back(run_criterion(c));
  return out;
}

}  // namespace hdf::verify
