// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Inference kernels for the enhancement network. Weight layouts follow the
// usual deep-learning framework conventions so that exported parameters can be
// copied in without transposition:
//
//   conv2d    weight (out, in / groups, kt, kf)
//   deconv2d  weight (in, out / groups, kt, kf)
//   conv1d    weight (out, in, k)
//   linear    weight (out, in)
//   gru       w_ih (3H, I), w_hh (3H, H), gate rows ordered reset, update, new
//
// Every kernel accumulates in a fixed loop order, so results are reproducible
// bit-for-bit across runs.

#ifndef HDFNET_NN_H_
#define HDFNET_NN_H_

#include <cstddef>
#include <span>
#include <vector>

#include "hdfnet/tensor.h"

namespace hdf::nn {

struct ConvParams {
  std::size_t in_ch = 1;
  std::size_t out_ch = 1;
  std::size_t kernel_t = 1;
  std::size_t kernel_f = 1;
  std::size_t stride_t = 1;
  std::size_t stride_f = 1;
  std::size_t groups = 1;
  bool transposed = false;
  // Frequency padding on each side. Time is always padded causally with
  // kernel_t - 1 frames of past context and nothing from the future.
  std::size_t pad_f = 0;
  std::vector<double> weight;
  std::vector<double> bias;  // empty means no bias

  std::size_t causal_pad_t() const { return kernel_t - 1; }
  std::size_t weight_size() const {
    return transposed ? in_ch * (out_ch / groups) * kernel_t * kernel_f
                      : out_ch * (in_ch / groups) * kernel_t * kernel_f;
  }
  // Throws InvalidArgument when groups do not divide the channels or the
  // weight/bias buffers have the wrong length.
  void validate() const;

  // Output frequency size for an input of `freq` bins.
  std::size_t out_freq(std::size_t freq) const;
  std::size_t out_time(std::size_t time) const;
};

// Causal 2-D convolution.
Tensor4 conv2d(const Tensor4& x, const ConvParams& p);

// Transposed 2-D convolution: F_out = (F - 1) * stride_f + kernel_f - 2 pad_f.
// Along time the full transposed output is cropped to its first
// (T - 1) * stride_t + 1 frames, which keeps the layer causal.
Tensor4 deconv2d(const Tensor4& x, const ConvParams& p);

// Inference-mode batch normalization with stored statistics.
struct BatchNormParams {
  std::vector<double> scale;
  std::vector<double> shift;
  std::vector<double> mean;
  std::vector<double> var;
  double eps = 1e-5;
};

Tensor4 batchnorm_infer(const Tensor4& x, const BatchNormParams& p);
void batchnorm_infer_inplace(Tensor4& x, const BatchNormParams& p);

// Per-channel PReLU.
Tensor4 prelu(const Tensor4& x, std::span<const double> slopes);
void prelu_inplace(Tensor4& x, std::span<const double> slopes);

double sigmoid(double v);
Tensor4 sigmoid(const Tensor4& x);
Tensor4 tanh(const Tensor4& x);
void tanh_inplace(Tensor4& x);

// Mean over frequency: (B, C, T, F) -> (B, C, T).
Tensor3 avgpool_freq(const Tensor4& x);

struct GruCell {
  std::size_t input_size = 0;
  std::size_t hidden_size = 0;
  std::vector<double> w_ih;  // (3H, I)
  std::vector<double> w_hh;  // (3H, H)
  std::vector<double> b_ih;  // (3H)
  std::vector<double> b_hh;  // (3H)

  void validate() const;
  // One step: h <- GRU(x, h).
  void step(std::span<const double> x, std::span<double> h,
            std::span<double> scratch) const;
  std::size_t scratch_size() const { return 6 * hidden_size; }
};

// Grouped GRU: `cells.size()` independent GRUs, group g reading input slice
// [g * I/G, (g + 1) * I/G) and owning hidden slice [g * H/G, (g + 1) * H/G).
struct GruParams {
  std::size_t input_size = 0;
  std::size_t hidden_size = 0;
  std::vector<GruCell> cells;

  std::size_t groups() const { return cells.size(); }
  void validate() const;
};

// Runs the recurrence over `steps` vectors of `input_size` values each
// (row-major in `x`), starting from `h0` (empty = zeros). Writes the
// `steps` x `hidden_size` outputs to `out` and returns the final state.
// `reverse` runs from the last step to the first (outputs stay aligned with
// their inputs).
std::vector<double> gru_forward(std::span<const double> x, std::size_t steps,
                                const GruParams& p, std::span<double> out,
                                std::span<const double> h0 = {},
                                bool reverse = false);

// Convenience overload returning the output sequence.
struct GruResult {
  std::vector<double> outputs;  // steps x hidden
  std::vector<double> final_state;
};
GruResult gru_forward(std::span<const double> x, std::size_t steps,
                      const GruParams& p, std::span<const double> h0 = {},
                      bool reverse = false);

struct LinearParams {
  std::size_t in_features = 0;
  std::size_t out_features = 0;
  std::vector<double> weight;  // (out, in)
  std::vector<double> bias;    // (out) or empty

  void validate() const;
  void apply(std::span<const double> x, std::span<double> y) const;
};

// Causal 1-D convolution over time: (B, C, T) -> (B, out, T) with kernel - 1
// frames of past zero padding.
struct Conv1dParams {
  std::size_t in_ch = 0;
  std::size_t out_ch = 0;
  std::size_t kernel = 1;
  std::vector<double> weight;  // (out, in, k)
  std::vector<double> bias;

  void validate() const;
};

Tensor3 conv1d_causal(const Tensor3& x, const Conv1dParams& p);

}  // namespace hdf::nn

#endif  // HDFNET_NN_H_
