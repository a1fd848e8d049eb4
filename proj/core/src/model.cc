// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "hdfnet/model.h"

#include <algorithm>

#include "hdfnet/error.h"
#include "naming.h"

namespace hdf {

Tensor4 conv_block_forward(const Tensor4& x, const ConvBlockParams& p) {
  Tensor4 y = p.conv.transposed ? nn::deconv2d(x, p.conv) : nn::conv2d(x, p.conv);
  nn::batchnorm_infer_inplace(y, p.bn);
  nn::prelu_inplace(y, p.prelu);
  return y;
}

Tensor3 ta_weights(const Tensor4& x, const TaParams& p) {
  const std::size_t ch = x.channels(), frames = x.time();
  HDF_CHECK_SHAPE(p.gru.input_size == ch,
                  "temporal attention expects " +
                      std::to_string(p.gru.input_size) + " channels, got " +
                      std::to_string(ch));
  const Tensor3 pooled = nn::avgpool_freq(x);
  Tensor3 hidden(x.batch(), p.gru.hidden_size, frames);
  std::vector<double> seq(frames * ch);
  for (std::size_t b = 0; b < x.batch(); ++b) {
    for (std::size_t t = 0; t < frames; ++t) {
      for (std::size_t c = 0; c < ch; ++c) seq[t * ch + c] = pooled(b, c, t);
    }
    const nn::GruResult r = nn::gru_forward(seq, frames, p.gru);
    for (std::size_t t = 0; t < frames; ++t) {
      for (std::size_t c = 0; c < p.gru.hidden_size; ++c) {
        hidden(b, c, t) = r.outputs[t * p.gru.hidden_size + c];
      }
    }
  }
  Tensor3 w = nn::conv1d_causal(hidden, p.conv);
  for (double& v : w.data()) v = nn::sigmoid(v);
  return w;
}

Tensor4 ta_forward(const Tensor4& x, const TaParams& p) {
  const Tensor3 w = ta_weights(x, p);
  HDF_CHECK_SHAPE(w.channels() == x.channels(),
                  "temporal attention gain count differs from channels");
  Tensor4 y = x;
  for (std::size_t b = 0; b < x.batch(); ++b) {
    for (std::size_t c = 0; c < x.channels(); ++c) {
      for (std::size_t t = 0; t < x.time(); ++t) {
        const double g = w(b, c, t);
        for (double& v : y.row(b, c, t)) v *= g;
      }
    }
  }
  return y;
}

Tensor4 taconv_forward(const Tensor4& x, const TaConvParams& p,
                       const std::optional<SbfSpec>& sbf) {
  Tensor4 y = conv_block_forward(sbf ? sbf_expand(x, *sbf) : x, p.pconv1);
  y = conv_block_forward(y, p.dconv);
  y = ta_forward(y, p.ta);
  y = nn::conv2d(y, p.pconv2);
  nn::batchnorm_infer_inplace(y, p.bn_out);
  HDF_CHECK_SHAPE(y.same_shape(x), "TAConv residual shape " +
                                       y.shape_string() + " vs " +
                                       x.shape_string());
  add_inplace(y, x);
  return y;
}

Tensor4 dprnn_forward(const Tensor4& x, const DprnnParams& p) {
  const std::size_t ch = x.channels(), frames = x.time(), bins = x.freq();
  HDF_CHECK_SHAPE(p.intra_proj.out_features == ch &&
                      p.inter_proj.out_features == ch &&
                      p.intra_fwd.input_size == ch && p.inter.input_size == ch,
                  "DPRNN channel count mismatch for input " +
                      x.shape_string());
  const std::size_t hf = p.intra_fwd.hidden_size, hb = p.intra_bwd.hidden_size;
  HDF_CHECK_SHAPE(p.intra_proj.in_features == hf + hb,
                  "DPRNN intra projection width mismatch");

  // Intra-frame pass: a bidirectional recurrence across frequency.
  Tensor4 mid = x;
  std::vector<double> seq(bins * ch), cat(hf + hb), proj(ch);
  for (std::size_t b = 0; b < x.batch(); ++b) {
    for (std::size_t t = 0; t < frames; ++t) {
      for (std::size_t c = 0; c < ch; ++c) {
        auto row = x.row(b, c, t);
        for (std::size_t f = 0; f < bins; ++f) seq[f * ch + c] = row[f];
      }
      const nn::GruResult fwd = nn::gru_forward(seq, bins, p.intra_fwd);
      const nn::GruResult bwd =
          nn::gru_forward(seq, bins, p.intra_bwd, {}, /*reverse=*/true);
      for (std::size_t f = 0; f < bins; ++f) {
        std::copy_n(fwd.outputs.begin() + static_cast<long>(f * hf), hf,
                    cat.begin());
        std::copy_n(bwd.outputs.begin() + static_cast<long>(f * hb), hb,
                    cat.begin() + static_cast<long>(hf));
        p.intra_proj.apply(cat, proj);
        for (std::size_t c = 0; c < ch; ++c) mid(b, c, t, f) += proj[c];
      }
    }
  }

  // Inter-frame pass: a causal recurrence across time per frequency position.
  const std::size_t hi = p.inter.hidden_size;
  HDF_CHECK_SHAPE(p.inter_proj.in_features == hi,
                  "DPRNN inter projection width mismatch");
  Tensor4 out = mid;
  std::vector<double> tseq(frames * ch);
  for (std::size_t b = 0; b < x.batch(); ++b) {
    for (std::size_t f = 0; f < bins; ++f) {
      for (std::size_t t = 0; t < frames; ++t) {
        for (std::size_t c = 0; c < ch; ++c) tseq[t * ch + c] = mid(b, c, t, f);
      }
      const nn::GruResult r = nn::gru_forward(tseq, frames, p.inter);
      for (std::size_t t = 0; t < frames; ++t) {
        p.inter_proj.apply(
            std::span<const double>(r.outputs.data() + t * hi, hi), proj);
        for (std::size_t c = 0; c < ch; ++c) out(b, c, t, f) += proj[c];
      }
    }
  }
  return out;
}

namespace {

class Loader {
 public:
  Loader(const WeightBundle& w, const ModelConfig& cfg) : w_(w), cfg_(cfg) {}

  std::vector<double> values(const std::string& name,
                             std::size_t expected) const {
    const NamedTensor& t = w_.get(name);
    if (t.values.size() != expected) {
      throw LayerShapeError(name, "expected " + std::to_string(expected) +
                                      " values, found " +
                                      std::to_string(t.values.size()));
    }
    return t.values;
  }

  nn::ConvParams conv(const std::string& p, std::size_t in, std::size_t out,
                      std::size_t kt, std::size_t kf, std::size_t stride_f,
                      std::size_t pad_f, std::size_t groups,
                      bool transposed) const {
    nn::ConvParams c;
    c.in_ch = in;
    c.out_ch = out;
    c.kernel_t = kt;
    c.kernel_f = kf;
    c.stride_f = stride_f;
    c.pad_f = pad_f;
    c.groups = groups;
    c.transposed = transposed;
    c.weight = values(p + "/weight", c.weight_size());
    c.bias = values(p + "/bias", out);
    c.validate();
    return c;
  }

  nn::BatchNormParams bn(const std::string& p, std::size_t ch) const {
    nn::BatchNormParams b;
    b.scale = values(p + "/scale", ch);
    b.shift = values(p + "/shift", ch);
    b.mean = values(p + "/mean", ch);
    b.var = values(p + "/var", ch);
    b.eps = cfg_.bn_eps;
    return b;
  }

  nn::GruParams gru(const std::string& p, std::size_t input,
                    std::size_t hidden, std::size_t groups) const {
    nn::GruParams g;
    g.input_size = input;
    g.hidden_size = hidden;
    const std::size_t in_g = input / groups, h_g = hidden / groups;
    for (std::size_t k = 0; k < groups; ++k) {
      const std::string q = naming::gru_group(p, k);
      nn::GruCell cell;
      cell.input_size = in_g;
      cell.hidden_size = h_g;
      cell.w_ih = values(q + "/w_ih", 3 * h_g * in_g);
      cell.w_hh = values(q + "/w_hh", 3 * h_g * h_g);
      cell.b_ih = values(q + "/b_ih", 3 * h_g);
      cell.b_hh = values(q + "/b_hh", 3 * h_g);
      g.cells.push_back(std::move(cell));
    }
    g.validate();
    return g;
  }

  nn::LinearParams linear(const std::string& p, std::size_t in,
                          std::size_t out) const {
    nn::LinearParams l;
    l.in_features = in;
    l.out_features = out;
    l.weight = values(p + "/weight", in * out);
    l.bias = values(p + "/bias", out);
    l.validate();
    return l;
  }

  ConvBlockParams conv_block(const std::string& p, std::size_t in,
                             std::size_t out, bool transposed) const {
    ConvBlockParams b;
    b.conv = conv(p + (transposed ? "/deconv" : "/conv"), in, out, 1,
                  cfg_.conv_kernel_f, cfg_.conv_stride_f, cfg_.conv_pad_f, 1,
                  transposed);
    b.bn = bn(p + "/bn", out);
    b.prelu = values(p + "/act/slope", out);
    return b;
  }

  TaConvParams taconv(const std::string& p, std::size_t ch,
                      std::size_t sbf_k) const {
    const std::size_t k = cfg_.taconv_kernel;
    TaConvParams t;
    t.pconv1.conv = conv(p + "/pconv1", ch * sbf_k, ch, 1, 1, 1, 0, 1, false);
    t.pconv1.bn = bn(p + "/bn1", ch);
    t.pconv1.prelu = values(p + "/act1/slope", ch);
    t.dconv.conv = conv(p + "/dconv", ch, ch, k, k, 1, k / 2, ch, false);
    t.dconv.bn = bn(p + "/bn2", ch);
    t.dconv.prelu = values(p + "/act2/slope", ch);
    t.ta.gru = gru(p + "/ta/gru", ch, ch, 1);
    t.ta.conv.in_ch = ch;
    t.ta.conv.out_ch = ch;
    t.ta.conv.kernel = cfg_.ta_kernel;
    t.ta.conv.weight = values(p + "/ta/conv/weight", ch * ch * cfg_.ta_kernel);
    t.ta.conv.bias = values(p + "/ta/conv/bias", ch);
    t.ta.conv.validate();
    t.pconv2 = conv(p + "/pconv2", ch, ch, 1, 1, 1, 0, 1, false);
    t.bn_out = bn(p + "/bn3", ch);
    return t;
  }

  DprnnParams dprnn(const std::string& p, std::size_t ch) const {
    const std::size_t g = cfg_.gru_groups;
    DprnnParams d;
    d.intra_fwd = gru(p + "/intra_fwd", ch, ch, g);
    d.intra_bwd = gru(p + "/intra_bwd", ch, ch, g);
    d.intra_proj = linear(p + "/intra_proj", 2 * ch, ch);
    d.inter = gru(p + "/inter", ch, ch, g);
    d.inter_proj = linear(p + "/inter_proj", ch, ch);
    return d;
  }

 private:
  const WeightBundle& w_;
  const ModelConfig& cfg_;
};

}  // namespace

TacrnParams load_tacrn(const WeightBundle& weights, const ModelConfig& cfg,
                       int stage) {
  HDF_CHECK_ARG(stage == 1 || stage == 2, "stage must be 1 or 2");
  HDF_CHECK_ARG(stage == 1 ? cfg.has_stage1() : cfg.has_stage2(),
                "stage " + std::to_string(stage) + " is disabled");
  const naming::StageShape sh = naming::stage_shape(cfg, stage);
  const Loader ld(weights, cfg);
  const std::size_t ch = sh.channels;

  TacrnParams p;
  p.stage = stage;
  p.erb_domain = sh.erb_domain;
  if (sh.sbf_k > 1) p.sbf = SbfSpec{sh.sbf_k};
  p.filter = stage == 1 ? cfg.stage1_filter() : cfg.stage2_filter();
  for (std::size_t k = 0; k < cfg.conv_repeats; ++k) {
    p.encoder_convs.push_back(ld.conv_block(naming::encoder_conv(stage, k),
                                            k == 0 ? sh.in_planes : ch, ch,
                                            false));
  }
  for (std::size_t k = 0; k < cfg.taconv_repeats; ++k) {
    p.encoder_taconvs.push_back(
        ld.taconv(naming::encoder_taconv(stage, k), ch, sh.sbf_k));
  }
  for (std::size_t k = 0; k < cfg.dprnn_repeats; ++k) {
    p.dprnn.push_back(ld.dprnn(naming::dprnn(stage, k), ch));
  }
  for (std::size_t k = 0; k < cfg.taconv_repeats; ++k) {
    p.decoder_taconvs.push_back(
        ld.taconv(naming::decoder_taconv(stage, k), ch, sh.sbf_k));
  }
  for (std::size_t k = 0; k + 1 < cfg.conv_repeats; ++k) {
    p.decoder_deconvs.push_back(
        ld.conv_block(naming::decoder_deconv(stage, k), ch, ch, true));
  }
  p.head = ld.conv(naming::head(stage), ch, 2 * sh.taps, 1, cfg.conv_kernel_f,
                   cfg.conv_stride_f, cfg.conv_pad_f, 1, true);
  return p;
}

FilterCoeffs DfHeadOutput::coeffs(std::size_t b, const FilterSpec& spec) const {
  HDF_CHECK_ARG(b < batch_, "batch index out of range");
  HDF_CHECK_SHAPE(spec.taps() == taps_,
                  "head emits " + std::to_string(taps_) +
                      " taps, filter wants " + std::to_string(spec.taps()));
  FilterCoeffs c(frames_, bins_, spec);
  for (std::size_t t = 0; t < frames_; ++t) {
    for (std::size_t f = 0; f < bins_; ++f) {
      for (std::size_t k = 0; k < taps_; ++k) {
        c.re(t, f, k) = (*this)(b, t, f, 0, k);
        c.im(t, f, k) = (*this)(b, t, f, 1, k);
      }
    }
  }
  return c;
}

DfHeadOutput head_planes_to_output(const Tensor4& planes, std::size_t taps) {
  HDF_CHECK_SHAPE(planes.channels() == 2 * taps,
                  "head has " + std::to_string(planes.channels()) +
                      " planes, expected " + std::to_string(2 * taps));
  DfHeadOutput out(planes.batch(), planes.time(), planes.freq(), taps);
  for (std::size_t b = 0; b < planes.batch(); ++b) {
    for (std::size_t part = 0; part < 2; ++part) {
      for (std::size_t k = 0; k < taps; ++k) {
        for (std::size_t t = 0; t < planes.time(); ++t) {
          auto row = planes.row(b, part * taps + k, t);
          for (std::size_t f = 0; f < planes.freq(); ++f) {
            out(b, t, f, part, k) = row[f];
          }
        }
      }
    }
  }
  return out;
}

DfHeadOutput tacrn_forward(const Tensor4& features, const TacrnParams& p,
                           const ErbFilterbank* erb) {
  HDF_CHECK_ARG(!p.erb_domain || erb != nullptr,
                "ERB-domain stage needs a filterbank");
  Tensor4 h = p.erb_domain ? erb_analyze(features, *erb) : features;

  std::vector<Tensor4> conv_skips, ta_skips;
  for (const ConvBlockParams& c : p.encoder_convs) {
    h = conv_block_forward(h, c);
    conv_skips.push_back(h);
  }
  for (const TaConvParams& t : p.encoder_taconvs) {
    h = taconv_forward(h, t, p.sbf);
    ta_skips.push_back(h);
  }
  for (const DprnnParams& d : p.dprnn) h = dprnn_forward(h, d);

  const std::size_t r = p.decoder_taconvs.size();
  for (std::size_t k = 0; k < r; ++k) {
    add_inplace(h, ta_skips[r - 1 - k]);
    h = taconv_forward(h, p.decoder_taconvs[k], p.sbf);
  }
  const std::size_t levels = conv_skips.size();
  for (std::size_t k = 0; k < p.decoder_deconvs.size(); ++k) {
    add_inplace(h, conv_skips[levels - 1 - k]);
    h = conv_block_forward(h, p.decoder_deconvs[k]);
  }
  add_inplace(h, conv_skips[0]);
  h = nn::deconv2d(h, p.head);
  nn::tanh_inplace(h);

  if (p.erb_domain) h = erb_synthesize(h, *erb);
  return head_planes_to_output(h, p.filter.taps());
}

HdfNet::HdfNet(const WeightBundle& weights, const ModelConfig& cfg)
    : cfg_(cfg) {
  cfg_.validate();
  validate_bundle(weights, cfg_);
  erb_ = ErbFilterbank::build(cfg_.linear_bins(), cfg_.sample_rate,
                              cfg_.erb_low_kept, cfg_.erb_high_bands);
  if (cfg_.has_stage1()) stage1_ = load_tacrn(weights, cfg_, 1);
  if (cfg_.has_stage2()) stage2_ = load_tacrn(weights, cfg_, 2);
}

HdfNet::Trace HdfNet::enhance_traced(const ComplexSpectrogram& x) const {
  HDF_CHECK_SHAPE(x.bins() == cfg_.linear_bins(),
                  "spectrogram has " + std::to_string(x.bins()) +
                      " bins, model expects " +
                      std::to_string(cfg_.linear_bins()));
  Trace tr;
  if (x.frames() == 0) {
    tr.output = ComplexSpectrogram(0, x.bins());
    tr.output.stft_params = x.stft_params;
    return tr;
  }
  if (stage1_) {
    const FeatureStack feats = build_feature_stack(x);
    const DfHeadOutput head = tacrn_forward(feats.tensor, *stage1_, &erb_);
    tr.stage1 = apply_filter(x, head.coeffs(0, stage1_->filter));
  }
  if (stage2_) {
    const FeatureStack feats =
        build_feature_stack(x, stage1_ ? &tr.stage1 : nullptr);
    const DfHeadOutput head = tacrn_forward(feats.tensor, *stage2_);
    // The second filter runs on the noisy input; its output refines S1.
    tr.stage2 = apply_filter(x, head.coeffs(0, stage2_->filter));
  }
  if (stage1_ && stage2_) {
    tr.output = tr.stage1 + tr.stage2;
  } else {
    tr.output = stage1_ ? tr.stage1 : tr.stage2;
  }
  tr.output.stft_params = x.stft_params;
  return tr;
}

ComplexSpectrogram HdfNet::enhance(const ComplexSpectrogram& x) const {
  return enhance_traced(x).output;
}

ComplexSpectrogram hdf_enhance(const ComplexSpectrogram& x,
                               const WeightBundle& weights,
                               const ModelConfig& cfg) {
  return HdfNet(weights, cfg).enhance(x);
}

}  // namespace hdf
