// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Structural accounting: which tensors a configuration owns, how many
// trainable parameters that is, and how many multiply-accumulates one second
// of audio costs.
//
// MAC conventions, per frame:
//   conv2d      F_out * out * (in / groups) * kt * kf
//   deconv2d    F_in * in * (out / groups) * kt * kf
//   GRU step    3 * H_g * (I_g + H_g) per group
//   linear      in * out
//   conv1d      out * in * k
//   batch norm  one per element (scale-and-shift)
//   TA gating   one per element
//   ERB maps    one per nonzero matrix weight per plane
//   filtering   four real MACs per complex tap per bin
// Activations, pooling sums, residual adds and bias adds are not counted.

#ifndef HDFNET_LAYOUT_H_
#define HDFNET_LAYOUT_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hdfnet/config.h"
#include "hdfnet/weights.h"

namespace hdf {

// Every tensor the configuration expects, in canonical order.
std::vector<TensorSpec> expected_layout(const ModelConfig& cfg);

// Trainable parameter total (stored batch-norm statistics excluded).
std::size_t param_count(const ModelConfig& cfg);

struct CostBreakdown {
  // MACs per frame keyed by a coarse category ("stage2/taconv", ...).
  std::map<std::string, std::uint64_t> per_frame;
  std::uint64_t total_per_frame() const;
};

CostBreakdown macs_per_frame(const ModelConfig& cfg);
// MACs per second of audio at cfg.sample_rate / cfg.stft.hop frames/s.
double macs_per_second(const ModelConfig& cfg);
double macs_per_second(const ModelConfig& cfg, const StftParams& stft);

}  // namespace hdf

#endif  // HDFNET_LAYOUT_H_
