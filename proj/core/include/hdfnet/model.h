// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// The two-stage hierarchical deep filtering network.
//
// Each stage is a TACRN: an encoder of frequency-downsampling conv blocks and
// TAConv blocks, a stack of DPRNN blocks, and a mirrored decoder fed by
// additive skip connections, ending in a transposed-conv coefficient head with
// tanh. Stage 1 runs on ERB bands and expands its coefficients back to linear
// bins; stage 2 runs on linear bins with sub-band fusion inside its TAConvs.
//
//   S1 = filter_1(X, tacrn_1(|X|, X_r, X_i))
//   S2 = filter_2(X, tacrn_2(|X|, X_i, X_r, |S1|, S1_i, S1_r))
//   S  = S1 + S2
//
// Every layer is causal in time, so output frame t depends on input frames
// <= t only.

#ifndef HDFNET_MODEL_H_
#define HDFNET_MODEL_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "hdfnet/config.h"
#include "hdfnet/erb.h"
#include "hdfnet/filtering.h"
#include "hdfnet/nn.h"
#include "hdfnet/spectral.h"
#include "hdfnet/tensor.h"
#include "hdfnet/weights.h"

namespace hdf {

// Conv (or transposed conv) followed by batch norm and PReLU.
struct ConvBlockParams {
  nn::ConvParams conv;
  nn::BatchNormParams bn;
  std::vector<double> prelu;
};

Tensor4 conv_block_forward(const Tensor4& x, const ConvBlockParams& p);

// Causal temporal attention: pool over frequency, GRU over time, causal
// conv1d excitation, sigmoid, and a per-(channel, frame) gain on the input.
struct TaParams {
  nn::GruParams gru;
  nn::Conv1dParams conv;
};

// The (B, C, T) gains in (0, 1).
Tensor3 ta_weights(const Tensor4& x, const TaParams& p);
Tensor4 ta_forward(const Tensor4& x, const TaParams& p);

struct TaConvParams {
  ConvBlockParams pconv1;  // 1x1, (C * k) -> C when sub-band fusion is on
  ConvBlockParams dconv;   // depthwise k x k, causal in time
  TaParams ta;
  nn::ConvParams pconv2;  // 1x1, C -> C
  nn::BatchNormParams bn_out;
};

// [sub-band fusion] -> pointwise -> depthwise -> TA -> pointwise -> + input.
Tensor4 taconv_forward(const Tensor4& x, const TaConvParams& p,
                       const std::optional<SbfSpec>& sbf);

// Intra-frame bidirectional GRU over frequency and inter-frame GRU over time,
// each projected back to C channels and added to its input.
struct DprnnParams {
  nn::GruParams intra_fwd;
  nn::GruParams intra_bwd;
  nn::LinearParams intra_proj;  // 2C -> C, input [fwd, bwd]
  nn::GruParams inter;
  nn::LinearParams inter_proj;  // C -> C
};

Tensor4 dprnn_forward(const Tensor4& x, const DprnnParams& p);

struct TacrnParams {
  int stage = 1;
  bool erb_domain = false;
  std::optional<SbfSpec> sbf;
  FilterSpec filter;
  std::vector<ConvBlockParams> encoder_convs;
  std::vector<TaConvParams> encoder_taconvs;
  std::vector<DprnnParams> dprnn;
  std::vector<TaConvParams> decoder_taconvs;
  std::vector<ConvBlockParams> decoder_deconvs;
  nn::ConvParams head;  // transposed conv to 2 * taps planes, tanh
};

TacrnParams load_tacrn(const WeightBundle& weights, const ModelConfig& cfg,
                       int stage);

// Coefficient head output, logical shape (B, T, F, 2, taps) with the complex
// part index (0 = real, 1 = imaginary) before the tap index.
class DfHeadOutput {
 public:
  DfHeadOutput() = default;
  DfHeadOutput(std::size_t batch, std::size_t frames, std::size_t bins,
               std::size_t taps)
      : batch_(batch), frames_(frames), bins_(bins), taps_(taps),
        data_(batch * frames * bins * 2 * taps, 0.0) {}

  std::size_t batch() const { return batch_; }
  std::size_t frames() const { return frames_; }
  std::size_t bins() const { return bins_; }
  std::size_t taps() const { return taps_; }
  std::vector<std::size_t> shape() const {
    return {batch_, frames_, bins_, 2, taps_};
  }

  double& operator()(std::size_t b, std::size_t t, std::size_t f,
                     std::size_t part, std::size_t tap) {
    return data_[(((b * frames_ + t) * bins_ + f) * 2 + part) * taps_ + tap];
  }
  double operator()(std::size_t b, std::size_t t, std::size_t f,
                    std::size_t part, std::size_t tap) const {
    return data_[(((b * frames_ + t) * bins_ + f) * 2 + part) * taps_ + tap];
  }
  const std::vector<double>& data() const { return data_; }

  FilterCoeffs coeffs(std::size_t b, const FilterSpec& spec) const;

 private:
  std::size_t batch_ = 0, frames_ = 0, bins_ = 0, taps_ = 0;
  std::vector<double> data_;
};

// Head planes (B, 2 * taps, T, F), plane = part * taps + tap, to DfHeadOutput.
DfHeadOutput head_planes_to_output(const Tensor4& planes, std::size_t taps);

// Runs one stage network on a feature tensor (linear frequency). Stage 1
// passes the ERB filterbank; its head output is expanded to linear bins.
DfHeadOutput tacrn_forward(const Tensor4& features, const TacrnParams& p,
                           const ErbFilterbank* erb = nullptr);

// Immutable loaded network; enhance() is safe to call concurrently.
class HdfNet {
 public:
  HdfNet(const WeightBundle& weights, const ModelConfig& cfg);

  const ModelConfig& config() const { return cfg_; }

  struct Trace {
    ComplexSpectrogram stage1;  // zero-sized when stage 1 is disabled
    ComplexSpectrogram stage2;
    ComplexSpectrogram output;
  };

  ComplexSpectrogram enhance(const ComplexSpectrogram& x) const;
  Trace enhance_traced(const ComplexSpectrogram& x) const;

  const std::optional<TacrnParams>& stage1() const { return stage1_; }
  const std::optional<TacrnParams>& stage2() const { return stage2_; }

 private:
  ModelConfig cfg_;
  ErbFilterbank erb_;
  std::optional<TacrnParams> stage1_;
  std::optional<TacrnParams> stage2_;
};

// One-shot form: validates the bundle against cfg, loads, and runs.
ComplexSpectrogram hdf_enhance(const ComplexSpectrogram& x,
                               const WeightBundle& weights,
                               const ModelConfig& cfg);

}  // namespace hdf

#endif  // HDFNET_MODEL_H_
