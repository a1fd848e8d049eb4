// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef HDFNET_CONFIG_H_
#define HDFNET_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "hdfnet/filtering.h"
#include "hdfnet/spectral.h"

namespace hdf {

// Architecture of the two-stage network. Defaults are the published
// configuration: TDF after the ERB-domain first stage, FDF after the
// sub-band-fused second stage, order-5 filters.
struct ModelConfig {
  std::size_t stage1_channels = 16;
  std::size_t stage2_channels = 32;
  std::size_t conv_repeats = 2;    // frequency-downsampling convs per encoder
  std::size_t taconv_repeats = 3;  // TAConv blocks per encoder (and decoder)
  std::size_t dprnn_repeats = 2;
  std::size_t df_order = 5;
  std::size_t sbf_k = 5;
  // A disabled stage (nullopt) is skipped. With stage 1 disabled the second
  // stage sees the 3-plane noisy feature stack and its output is the result;
  // that is the single-stage deep filtering baseline when stage2_mode is kDf.
  std::optional<FilterMode> stage1_mode = FilterMode::kTdf;
  std::optional<FilterMode> stage2_mode = FilterMode::kFdf;

  std::size_t erb_low_kept = 65;
  std::size_t erb_high_bands = 64;
  std::size_t gru_groups = 2;  // DPRNN recurrences

  std::size_t conv_kernel_f = 5;
  std::size_t conv_stride_f = 2;
  std::size_t conv_pad_f = 2;
  std::size_t taconv_kernel = 3;  // depthwise kernel, square
  std::size_t ta_kernel = 3;      // temporal attention conv1d
  double bn_eps = 1e-5;

  StftParams stft;
  int sample_rate = kSampleRate;

  static ModelConfig defaults() { return {}; }
  // Single-stage deep filtering (I = 4, J = 2) on the sub-band second-stage
  // network.
  static ModelConfig single_stage_df();

  bool has_stage1() const { return stage1_mode.has_value(); }
  bool has_stage2() const { return stage2_mode.has_value(); }
  std::size_t linear_bins() const { return stft.bins(); }
  std::size_t erb_bands() const { return erb_low_kept + erb_high_bands; }

  FilterSpec stage1_filter() const;
  FilterSpec stage2_filter() const;

  // Throws InvalidArgument on inconsistent settings (no stage enabled, channel
  // counts not divisible by GRU groups, frequency ladder with an even level,
  // even sbf_k...).
  void validate() const;

  // Canonical "key=value" lines over the architecture fields, in fixed order.
  std::string canonical_string() const;
  // FNV-1a 64 of canonical_string().
  std::uint64_t digest() const;

  bool operator==(const ModelConfig&) const;
};

std::uint64_t fnv1a64(const std::string& bytes);

// Frequency sizes visited by an encoder starting from `freq`:
// {freq, after conv 1, ..., after conv `conv_repeats`}.
std::vector<std::size_t> frequency_ladder(const ModelConfig& cfg,
                                          std::size_t freq);

}  // namespace hdf

#endif  // HDFNET_CONFIG_H_
