// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Canonical tensor paths shared by the layout description and the loader.

#ifndef HDFNET_SRC_NAMING_H_
#define HDFNET_SRC_NAMING_H_

#include <cstddef>
#include <string>

#include "hdfnet/config.h"

namespace hdf::naming {

inline std::string stage(int s) { return "stage" + std::to_string(s); }

inline std::string encoder_conv(int s, std::size_t k) {
  return stage(s) + "/encoder/conv" + std::to_string(k);
}
inline std::string encoder_taconv(int s, std::size_t k) {
  return stage(s) + "/encoder/taconv" + std::to_string(k);
}
inline std::string dprnn(int s, std::size_t k) {
  return stage(s) + "/dprnn/block" + std::to_string(k);
}
inline std::string decoder_taconv(int s, std::size_t k) {
  return stage(s) + "/decoder/taconv" + std::to_string(k);
}
inline std::string decoder_deconv(int s, std::size_t k) {
  return stage(s) + "/decoder/deconv" + std::to_string(k);
}
inline std::string head(int s) { return stage(s) + "/head/deconv"; }

inline std::string gru_group(const std::string& prefix, std::size_t g) {
  return prefix + "/g" + std::to_string(g);
}

// Per-stage structural facts that both the layout and the loader derive from
// the configuration.
struct StageShape {
  int stage = 1;
  std::size_t channels = 0;
  std::size_t in_planes = 0;   // feature-stack planes
  std::size_t in_freq = 0;     // frequency size the encoder sees
  std::size_t sbf_k = 1;       // 1 = no sub-band fusion
  std::size_t taps = 0;        // filter taps, head emits 2 * taps planes
  bool erb_domain = false;
};

inline StageShape stage_shape(const ModelConfig& cfg, int s) {
  StageShape sh;
  sh.stage = s;
  if (s == 1) {
    sh.channels = cfg.stage1_channels;
    sh.in_planes = 3;
    sh.in_freq = cfg.erb_bands();
    sh.sbf_k = 1;
    sh.taps = cfg.stage1_filter().taps();
    sh.erb_domain = true;
  } else {
    sh.channels = cfg.stage2_channels;
    sh.in_planes = cfg.has_stage1() ? 6 : 3;
    sh.in_freq = cfg.linear_bins();
    sh.sbf_k = cfg.sbf_k;
    sh.taps = cfg.stage2_filter().taps();
    sh.erb_domain = false;
  }
  return sh;
}

}  // namespace hdf::naming

#endif  // HDFNET_SRC_NAMING_H_
