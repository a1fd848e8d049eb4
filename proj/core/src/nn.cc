// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "hdfnet/nn.h"

#include <algorithm>
#include <cmath>

#include "hdfnet/error.h"

namespace hdf::nn {

void ConvParams::validate() const {
  HDF_CHECK_ARG(in_ch > 0 && out_ch > 0, "conv: channel counts must be positive");
  HDF_CHECK_ARG(kernel_t > 0 && kernel_f > 0, "conv: empty kernel");
  HDF_CHECK_ARG(stride_t > 0 && stride_f > 0, "conv: zero stride");
  HDF_CHECK_ARG(groups > 0 && in_ch % groups == 0 && out_ch % groups == 0,
                "conv: groups (" + std::to_string(groups) +
                    ") must divide in/out channels (" + std::to_string(in_ch) +
                    ", " + std::to_string(out_ch) + ")");
  HDF_CHECK_ARG(weight.size() == weight_size(),
                "conv: weight has " + std::to_string(weight.size()) +
                    " values, expected " + std::to_string(weight_size()));
  HDF_CHECK_ARG(bias.empty() || bias.size() == out_ch,
                "conv: bias must be empty or have out_ch values");
}

std::size_t ConvParams::out_freq(std::size_t freq) const {
  if (transposed) {
    const std::size_t full = (freq - 1) * stride_f + kernel_f;
    HDF_CHECK_SHAPE(full > 2 * pad_f, "deconv: padding exceeds output");
    return full - 2 * pad_f;
  }
  const std::size_t padded = freq + 2 * pad_f;
  HDF_CHECK_SHAPE(padded >= kernel_f,
                  "conv: kernel wider than padded frequency axis");
  return (padded - kernel_f) / stride_f + 1;
}

std::size_t ConvParams::out_time(std::size_t time) const {
  if (transposed) return time == 0 ? 0 : (time - 1) * stride_t + 1;
  if (time == 0) return 0;
  // kernel_t - 1 past frames of padding.
  return (time - 1) / stride_t + 1;
}

Tensor4 conv2d(const Tensor4& x, const ConvParams& p) {
  HDF_CHECK_ARG(!p.transposed, "conv2d called with transposed parameters");
  p.validate();
  HDF_CHECK_SHAPE(x.channels() == p.in_ch,
                  "conv2d: input has " + std::to_string(x.channels()) +
                      " channels, layer expects " + std::to_string(p.in_ch));
  const std::size_t t_out = p.out_time(x.time());
  const std::size_t f_out = p.out_freq(x.freq());
  const std::size_t in_g = p.in_ch / p.groups;
  const std::size_t out_g = p.out_ch / p.groups;
  const long pad_t = static_cast<long>(p.causal_pad_t());
  const long pad_f = static_cast<long>(p.pad_f);
  const long t_in = static_cast<long>(x.time());
  const long f_in = static_cast<long>(x.freq());

  Tensor4 y(x.batch(), p.out_ch, t_out, f_out);
  for (std::size_t b = 0; b < x.batch(); ++b) {
    for (std::size_t o = 0; o < p.out_ch; ++o) {
      const std::size_t g = o / out_g;
      const double bias = p.bias.empty() ? 0.0 : p.bias[o];
      for (std::size_t t = 0; t < t_out; ++t) {
        auto dst = y.row(b, o, t);
        for (std::size_t f = 0; f < f_out; ++f) dst[f] = bias;
        for (std::size_t ic = 0; ic < in_g; ++ic) {
          const std::size_t c = g * in_g + ic;
          for (std::size_t kt = 0; kt < p.kernel_t; ++kt) {
            const long src_t = static_cast<long>(t * p.stride_t + kt) - pad_t;
            if (src_t < 0 || src_t >= t_in) continue;
            auto src = x.row(b, c, static_cast<std::size_t>(src_t));
            const double* w =
                p.weight.data() +
                ((o * in_g + ic) * p.kernel_t + kt) * p.kernel_f;
            for (std::size_t kf = 0; kf < p.kernel_f; ++kf) {
              const double wv = w[kf];
              // Output bins whose source bin f * stride + kf - pad lies inside
              // the input.
              const long off = static_cast<long>(kf) - pad_f;
              const long sf = static_cast<long>(p.stride_f);
              const long lo = off >= 0 ? 0 : (-off + sf - 1) / sf;
              const long hi = std::min<long>(
                  static_cast<long>(f_out),
                  f_in - off <= 0 ? 0 : (f_in - off - 1) / sf + 1);
              for (long f = lo; f < hi; ++f) dst[f] += wv * src[f * sf + off];
            }
          }
        }
      }
    }
  }
  return y;
}

Tensor4 deconv2d(const Tensor4& x, const ConvParams& p) {
  HDF_CHECK_ARG(p.transposed, "deconv2d called with non-transposed parameters");
  p.validate();
  HDF_CHECK_SHAPE(x.channels() == p.in_ch,
                  "deconv2d: input has " + std::to_string(x.channels()) +
                      " channels, layer expects " + std::to_string(p.in_ch));
  const std::size_t t_out = p.out_time(x.time());
  const std::size_t f_out = p.out_freq(x.freq());
  const std::size_t in_g = p.in_ch / p.groups;
  const std::size_t out_g = p.out_ch / p.groups;
  const long pad_f = static_cast<long>(p.pad_f);

  Tensor4 y(x.batch(), p.out_ch, t_out, f_out);
  for (std::size_t b = 0; b < x.batch(); ++b) {
    for (std::size_t o = 0; o < p.out_ch; ++o) {
      const double bias = p.bias.empty() ? 0.0 : p.bias[o];
      for (std::size_t t = 0; t < t_out; ++t) {
        for (double& v : y.row(b, o, t)) v = bias;
      }
    }
    // Scatter form: input (c, t, f) feeds output (o, t * st + kt,
    // f * sf + kf - pad_f). Output frames past t_out are future-side and
    // dropped.
    for (std::size_t c = 0; c < p.in_ch; ++c) {
      const std::size_t g = c / in_g;
      for (std::size_t oc = 0; oc < out_g; ++oc) {
        const std::size_t o = g * out_g + oc;
        for (std::size_t t = 0; t < x.time(); ++t) {
          auto src = x.row(b, c, t);
          for (std::size_t kt = 0; kt < p.kernel_t; ++kt) {
            const std::size_t dst_t = t * p.stride_t + kt;
            if (dst_t >= t_out) continue;
            auto dst = y.row(b, o, dst_t);
            const double* w =
                p.weight.data() + ((c * out_g + oc) * p.kernel_t + kt) * p.kernel_f;
            const long sf = static_cast<long>(p.stride_f);
            const long n_out = static_cast<long>(f_out);
            for (std::size_t kf = 0; kf < p.kernel_f; ++kf) {
              const double wv = w[kf];
              // Input bins whose target f * stride + kf - pad lies inside
              // the output.
              const long off = static_cast<long>(kf) - pad_f;
              const long lo = off >= 0 ? 0 : (-off + sf - 1) / sf;
              const long hi = std::min<long>(
                  static_cast<long>(x.freq()),
                  n_out - off <= 0 ? 0 : (n_out - off - 1) / sf + 1);
              for (long f = lo; f < hi; ++f) dst[f * sf + off] += src[f] * wv;
            }
          }
        }
      }
    }
  }
  return y;
}

namespace {

void check_bn(const Tensor4& x, const BatchNormParams& p) {
  const std::size_t c = x.channels();
  HDF_CHECK_SHAPE(p.scale.size() == c && p.shift.size() == c &&
                      p.mean.size() == c && p.var.size() == c,
                  "batchnorm: parameter length differs from channel count " +
                      std::to_string(c));
}

}  // namespace

void batchnorm_infer_inplace(Tensor4& x, const BatchNormParams& p) {
  check_bn(x, p);
  for (std::size_t c = 0; c < x.channels(); ++c) {
    const double gain = p.scale[c] / std::sqrt(p.var[c] + p.eps);
    const double offset = p.shift[c] - p.mean[c] * gain;
    for (std::size_t b = 0; b < x.batch(); ++b) {
      for (std::size_t t = 0; t < x.time(); ++t) {
        for (double& v : x.row(b, c, t)) v = v * gain + offset;
      }
    }
  }
}

Tensor4 batchnorm_infer(const Tensor4& x, const BatchNormParams& p) {
  Tensor4 y = x;
  batchnorm_infer_inplace(y, p);
  return y;
}

void prelu_inplace(Tensor4& x, std::span<const double> slopes) {
  HDF_CHECK_SHAPE(slopes.size() == x.channels() || slopes.size() == 1,
                  "prelu: slope count must be 1 or the channel count");
  for (std::size_t b = 0; b < x.batch(); ++b) {
    for (std::size_t c = 0; c < x.channels(); ++c) {
      const double a = slopes.size() == 1 ? slopes[0] : slopes[c];
      for (std::size_t t = 0; t < x.time(); ++t) {
        for (double& v : x.row(b, c, t)) {
          if (v < 0.0) v *= a;
        }
      }
    }
  }
}

Tensor4 prelu(const Tensor4& x, std::span<const double> slopes) {
  Tensor4 y = x;
  prelu_inplace(y, slopes);
  return y;
}

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

Tensor4 sigmoid(const Tensor4& x) {
  Tensor4 y = x;
  for (double& v : y.data()) v = sigmoid(v);
  return y;
}

void tanh_inplace(Tensor4& x) {
  for (double& v : x.data()) v = std::tanh(v);
}

Tensor4 tanh(const Tensor4& x) {
  Tensor4 y = x;
  tanh_inplace(y);
  return y;
}

Tensor3 avgpool_freq(const Tensor4& x) {
  HDF_CHECK_SHAPE(x.freq() > 0, "avgpool_freq: empty frequency axis");
  Tensor3 y(x.batch(), x.channels(), x.time());
  const double inv = 1.0 / static_cast<double>(x.freq());
  for (std::size_t b = 0; b < x.batch(); ++b) {
    for (std::size_t c = 0; c < x.channels(); ++c) {
      for (std::size_t t = 0; t < x.time(); ++t) {
        double acc = 0.0;
        for (double v : x.row(b, c, t)) acc += v;
        y(b, c, t) = acc * inv;
      }
    }
  }
  return y;
}

void GruCell::validate() const {
  const std::size_t h3 = 3 * hidden_size;
  HDF_CHECK_ARG(hidden_size > 0 && input_size > 0, "gru: empty cell");
  HDF_CHECK_ARG(w_ih.size() == h3 * input_size, "gru: w_ih size");
  HDF_CHECK_ARG(w_hh.size() == h3 * hidden_size, "gru: w_hh size");
  HDF_CHECK_ARG(b_ih.size() == h3 && b_hh.size() == h3, "gru: bias size");
}

void GruCell::step(std::span<const double> x, std::span<double> h,
                   std::span<double> scratch) const {
  const std::size_t hs = hidden_size;
  // scratch: [gi (3H) | gh (3H)]
  double* gi = scratch.data();
  double* gh = scratch.data() + 3 * hs;
  for (std::size_t r = 0; r < 3 * hs; ++r) {
    const double* wi = w_ih.data() + r * input_size;
    double acc = b_ih[r];
    for (std::size_t k = 0; k < input_size; ++k) acc += wi[k] * x[k];
    gi[r] = acc;
    const double* wh = w_hh.data() + r * hs;
    double acc_h = b_hh[r];
    for (std::size_t k = 0; k < hs; ++k) acc_h += wh[k] * h[k];
    gh[r] = acc_h;
  }
  for (std::size_t k = 0; k < hs; ++k) {
    const double r = sigmoid(gi[k] + gh[k]);
    const double z = sigmoid(gi[hs + k] + gh[hs + k]);
    const double n = std::tanh(gi[2 * hs + k] + r * gh[2 * hs + k]);
    h[k] = (1.0 - z) * n + z * h[k];
  }
}

void GruParams::validate() const {
  HDF_CHECK_ARG(!cells.empty(), "gru: no groups");
  const std::size_t g = cells.size();
  HDF_CHECK_ARG(input_size % g == 0 && hidden_size % g == 0,
                "gru: groups must divide input and hidden sizes");
  for (const auto& c : cells) {
    HDF_CHECK_ARG(c.input_size == input_size / g &&
                      c.hidden_size == hidden_size / g,
                  "gru: group cell sizes inconsistent with the layer");
    c.validate();
  }
}

std::vector<double> gru_forward(std::span<const double> x, std::size_t steps,
                                const GruParams& p, std::span<double> out,
                                std::span<const double> h0, bool reverse) {
  p.validate();
  HDF_CHECK_SHAPE(x.size() == steps * p.input_size,
                  "gru_forward: input length " + std::to_string(x.size()) +
                      " != steps * input_size");
  HDF_CHECK_SHAPE(out.size() == steps * p.hidden_size,
                  "gru_forward: output buffer size");
  HDF_CHECK_SHAPE(h0.empty() || h0.size() == p.hidden_size,
                  "gru_forward: initial state size");

  std::vector<double> h(p.hidden_size, 0.0);
  if (!h0.empty()) h.assign(h0.begin(), h0.end());
  const std::size_t in_g = p.input_size / p.groups();
  const std::size_t hid_g = p.hidden_size / p.groups();
  std::vector<double> scratch(6 * hid_g);
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t step = reverse ? steps - 1 - s : s;
    const double* xs = x.data() + step * p.input_size;
    for (std::size_t g = 0; g < p.groups(); ++g) {
      p.cells[g].step({xs + g * in_g, in_g}, {h.data() + g * hid_g, hid_g},
                      scratch);
    }
    std::copy(h.begin(), h.end(), out.begin() + step * p.hidden_size);
  }
  return h;
}

GruResult gru_forward(std::span<const double> x, std::size_t steps,
                      const GruParams& p, std::span<const double> h0,
                      bool reverse) {
  GruResult r;
  r.outputs.assign(steps * p.hidden_size, 0.0);
  r.final_state = gru_forward(x, steps, p, r.outputs, h0, reverse);
  return r;
}

void LinearParams::validate() const {
  HDF_CHECK_ARG(weight.size() == in_features * out_features,
                "linear: weight size");
  HDF_CHECK_ARG(bias.empty() || bias.size() == out_features,
                "linear: bias size");
}

void LinearParams::apply(std::span<const double> x, std::span<double> y) const {
  HDF_CHECK_SHAPE(x.size() == in_features && y.size() == out_features,
                  "linear: buffer sizes");
  for (std::size_t o = 0; o < out_features; ++o) {
    const double* w = weight.data() + o * in_features;
    double acc = bias.empty() ? 0.0 : bias[o];
    for (std::size_t i = 0; i < in_features; ++i) acc += w[i] * x[i];
    y[o] = acc;
  }
}

void Conv1dParams::validate() const {
  HDF_CHECK_ARG(in_ch > 0 && out_ch > 0 && kernel > 0, "conv1d: empty layer");
  HDF_CHECK_ARG(weight.size() == out_ch * in_ch * kernel, "conv1d: weight size");
  HDF_CHECK_ARG(bias.empty() || bias.size() == out_ch, "conv1d: bias size");
}

Tensor3 conv1d_causal(const Tensor3& x, const Conv1dParams& p) {
  p.validate();
  HDF_CHECK_SHAPE(x.channels() == p.in_ch, "conv1d: input channel count");
  const long pad = static_cast<long>(p.kernel) - 1;
  Tensor3 y(x.batch(), p.out_ch, x.time());
  for (std::size_t b = 0; b < x.batch(); ++b) {
    for (std::size_t o = 0; o < p.out_ch; ++o) {
      for (std::size_t t = 0; t < x.time(); ++t) {
        double acc = p.bias.empty() ? 0.0 : p.bias[o];
        for (std::size_t c = 0; c < p.in_ch; ++c) {
          const double* w = p.weight.data() + (o * p.in_ch + c) * p.kernel;
          for (std::size_t k = 0; k < p.kernel; ++k) {
            const long src = static_cast<long>(t + k) - pad;
            if (src < 0) continue;
            acc += w[k] * x(b, c, static_cast<std::size_t>(src));
          }
        }
        y(b, o, t) = acc;
      }
    }
  }
  return y;
}

}  // namespace hdf::nn
