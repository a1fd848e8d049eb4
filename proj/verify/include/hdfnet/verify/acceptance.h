// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// The acceptance suite: one check per headline criterion, each with a pinned
// tolerance and a wall-clock budget. Shared by the acceptance test binary and
// the `hdfnet verify` command.

#ifndef HDFNET_VERIFY_ACCEPTANCE_H_
#define HDFNET_VERIFY_ACCEPTANCE_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hdfnet/model.h"
#include "hdfnet/verify/oracles.h"

namespace hdf::verify {

// Pinned tolerances.
inline constexpr double kParamsLow = 0.10e6;
inline constexpr double kParamsHigh = 0.40e6;
inline constexpr double kMacsLow = 0.2e9;
inline constexpr double kMacsHigh = 0.9e9;
inline constexpr double kOracleTol = 1e-12;
inline constexpr double kRoundTripTol = 1e-6;
inline constexpr double kErbEnvelopeTol = 0.05;
inline constexpr double kCombGainDb = 5.0;
inline constexpr int kFilterInstances = 100;
inline constexpr int kCausalityDraws = 20;

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string title;
  double budget_seconds = 0.0;
  std::function<Outcome()> run;
};

struct CriterionResult {
  std::string id;
  std::string title;
  bool passed = false;  // the check itself
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;

  bool within_budget() const { return seconds < budget_seconds; }
  bool ok() const { return passed && within_budget(); }
};

const std::vector<Criterion>& acceptance_criteria();
CriterionResult run_criterion(const Criterion& c);
std::vector<CriterionResult> run_acceptance();

// Individual checks.
Outcome check_param_count();
Outcome check_macs();
Outcome check_filtering_oracles(std::uint64_t seed = 1);
Outcome check_causality(std::uint64_t seed = 2);
Outcome check_stft_erb(std::uint64_t seed = 3);
Outcome check_comb_filter(std::uint64_t seed = 4);
Outcome check_mode_grid(std::uint64_t seed = 5);
Outcome check_losses(std::uint64_t seed = 6);

// Perturbs frames after a random t0 (all of them, then a single one) and
// reports whether frames <= t0 of the enhanced output stayed bit-identical.
// As a control, perturbing frame t0 itself must change the output there.
struct CausalityProbe {
  bool causal = true;
  std::size_t t0 = 0;
  std::string detail;
};
CausalityProbe probe_causality(const HdfNet& net, oracle::Rng& rng,
                               std::size_t frames);

// Frame-periodic spectrogram (period `period` frames) plus white complex
// noise, filtered by temporal taps of 0.2 at i = 0, P, ..., 4P.
struct CombResult {
  double mean_gain_db = 0.0;
  double min_gain_db = 0.0;
  double input_snr_db = 0.0;
  double output_snr_db = 0.0;
};
CombResult comb_filter_demo(std::size_t period, std::size_t frames,
                            std::size_t bins, double noise_rms,
                            std::uint64_t seed);

// The six two-stage mode combinations of the ablation grid plus the
// single-stage general deep filter.
struct GridEntry {
  std::string name;
  ModelConfig config;
};
std::vector<GridEntry> mode_grid();

}  // namespace hdf::verify

#endif  // HDFNET_VERIFY_ACCEPTANCE_H_
