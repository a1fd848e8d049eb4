// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Run configuration document: one "key = value" per line, '#' starts a
// comment, blank lines ignored. Unknown keys are rejected. Keys:
//
//   stage1_channels stage2_channels conv_repeats taconv_repeats dprnn_repeats
//   df_order sbf_k stage1_mode stage2_mode (crm|tdf|fdf|df|none)
//   erb_low_kept erb_high_bands gru_groups bn_eps
//   sample_rate window_len hop fft_size window (hann)
//   loss_c loss_alpha loss_beta
//   weights input output

#ifndef HDFNET_RUN_CONFIG_H_
#define HDFNET_RUN_CONFIG_H_

#include <filesystem>
#include <string>

#include "hdfnet/config.h"
#include "hdfnet/loss.h"

namespace hdf {

struct RunConfig {
  ModelConfig model;
  LossConfig loss;
  std::string weights_path;
  std::string input_path;
  std::string output_path;

  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::filesystem::path& path);
  // Every key, so parse(to_string()) reproduces the configuration.
  std::string to_string() const;
};

}  // namespace hdf

#endif  // HDFNET_RUN_CONFIG_H_
