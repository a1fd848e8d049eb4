// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "hdfnet/layout.h"

#include "hdfnet/erb.h"
#include "naming.h"

namespace hdf {
namespace {

using Shape = std::vector<std::size_t>;

class LayoutBuilder {
 public:
  explicit LayoutBuilder(const ModelConfig& cfg) : cfg_(cfg) {}

  void add(const std::string& name, Shape shape, bool trainable = true) {
    specs_.push_back({name, std::move(shape), trainable});
  }

  void batch_norm(const std::string& p, std::size_t c) {
    add(p + "/scale", {c});
    add(p + "/shift", {c});
    add(p + "/mean", {c}, false);
    add(p + "/var", {c}, false);
  }

  void gru(const std::string& p, std::size_t input, std::size_t hidden,
           std::size_t groups) {
    const std::size_t in_g = input / groups, h_g = hidden / groups;
    for (std::size_t g = 0; g < groups; ++g) {
      const std::string q = naming::gru_group(p, g);
      add(q + "/w_ih", {3 * h_g, in_g});
      add(q + "/w_hh", {3 * h_g, h_g});
      add(q + "/b_ih", {3 * h_g});
      add(q + "/b_hh", {3 * h_g});
    }
  }

  void conv_block(const std::string& p, std::size_t in, std::size_t out,
                  bool transposed) {
    const std::string conv = p + (transposed ? "/deconv" : "/conv");
    if (transposed) {
      add(conv + "/weight", {in, out, 1, cfg_.conv_kernel_f});
    } else {
      add(conv + "/weight", {out, in, 1, cfg_.conv_kernel_f});
    }
    add(conv + "/bias", {out});
    batch_norm(p + "/bn", out);
    add(p + "/act/slope", {out});
  }

  void taconv(const std::string& p, std::size_t c, std::size_t sbf_k) {
    const std::size_t k = cfg_.taconv_kernel;
    add(p + "/pconv1/weight", {c, c * sbf_k, 1, 1});
    add(p + "/pconv1/bias", {c});
    batch_norm(p + "/bn1", c);
    add(p + "/act1/slope", {c});
    add(p + "/dconv/weight", {c, 1, k, k});
    add(p + "/dconv/bias", {c});
    batch_norm(p + "/bn2", c);
    add(p + "/act2/slope", {c});
    gru(p + "/ta/gru", c, c, 1);
    add(p + "/ta/conv/weight", {c, c, cfg_.ta_kernel});
    add(p + "/ta/conv/bias", {c});
    add(p + "/pconv2/weight", {c, c, 1, 1});
    add(p + "/pconv2/bias", {c});
    batch_norm(p + "/bn3", c);
  }

  void dprnn(const std::string& p, std::size_t c) {
    const std::size_t g = cfg_.gru_groups;
    gru(p + "/intra_fwd", c, c, g);
    gru(p + "/intra_bwd", c, c, g);
    add(p + "/intra_proj/weight", {c, 2 * c});
    add(p + "/intra_proj/bias", {c});
    gru(p + "/inter", c, c, g);
    add(p + "/inter_proj/weight", {c, c});
    add(p + "/inter_proj/bias", {c});
  }

  void stage(int s) {
    const naming::StageShape sh = naming::stage_shape(cfg_, s);
    const std::size_t c = sh.channels;
    for (std::size_t k = 0; k < cfg_.conv_repeats; ++k) {
      conv_block(naming::encoder_conv(s, k), k == 0 ? sh.in_planes : c, c,
                 false);
    }
    for (std::size_t k = 0; k < cfg_.taconv_repeats; ++k) {
      taconv(naming::encoder_taconv(s, k), c, sh.sbf_k);
    }
    for (std::size_t k = 0; k < cfg_.dprnn_repeats; ++k) {
      dprnn(naming::dprnn(s, k), c);
    }
    for (std::size_t k = 0; k < cfg_.taconv_repeats; ++k) {
      taconv(naming::decoder_taconv(s, k), c, sh.sbf_k);
    }
    for (std::size_t k = 0; k + 1 < cfg_.conv_repeats; ++k) {
      conv_block(naming::decoder_deconv(s, k), c, c, true);
    }
    add(naming::head(s) + "/weight", {c, 2 * sh.taps, 1, cfg_.conv_kernel_f});
    add(naming::head(s) + "/bias", {2 * sh.taps});
  }

  std::vector<TensorSpec> take() { return std::move(specs_); }

 private:
  const ModelConfig& cfg_;
  std::vector<TensorSpec> specs_;
};

std::uint64_t gru_macs(std::size_t input, std::size_t hidden,
                       std::size_t groups) {
  const std::uint64_t in_g = input / groups, h_g = hidden / groups;
  return groups * 3 * h_g * (in_g + h_g);
}

void stage_cost(const ModelConfig& cfg, int s, CostBreakdown& cost) {
  const naming::StageShape sh = naming::stage_shape(cfg, s);
  const std::string p = naming::stage(s);
  const std::uint64_t c = sh.channels;
  const std::uint64_t kf = cfg.conv_kernel_f;
  const auto ladder = frequency_ladder(cfg, sh.in_freq);
  const std::uint64_t fb = ladder.back();
  auto& m = cost.per_frame;

  if (sh.erb_domain) {
    const ErbFilterbank erb = ErbFilterbank::build(
        cfg.linear_bins(), cfg.sample_rate, cfg.erb_low_kept,
        cfg.erb_high_bands);
    m[p + "/erb"] += (sh.in_planes + 2 * sh.taps) * erb.nonzeros();
  }

  for (std::size_t k = 0; k < cfg.conv_repeats; ++k) {
    const std::uint64_t in = k == 0 ? sh.in_planes : c;
    const std::uint64_t f_out = ladder[k + 1];
    m[p + "/encoder_conv"] += f_out * c * in * kf + c * f_out;
  }

  const std::uint64_t kt = cfg.taconv_kernel;
  const std::uint64_t taconv = fb * c * c * sh.sbf_k  // pconv1
                               + c * fb               // bn1
                               + fb * c * kt * kt     // depthwise
                               + c * fb               // bn2
                               + gru_macs(c, c, 1)    // TA recurrence
                               + c * c * cfg.ta_kernel  // TA excitation
                               + c * fb               // TA gating
                               + fb * c * c           // pconv2
                               + c * fb;              // bn3
  m[p + "/taconv"] += 2 * cfg.taconv_repeats * taconv;

  const std::uint64_t g = cfg.gru_groups;
  const std::uint64_t dprnn = fb * 2 * gru_macs(c, c, g)  // intra, both ways
                              + fb * 2 * c * c            // intra projection
                              + fb * gru_macs(c, c, g)    // inter
                              + fb * c * c;               // inter projection
  m[p + "/dprnn"] += cfg.dprnn_repeats * dprnn;

  // Decoder deconvs climb the ladder from the bottom; the last climb is the
  // head.
  for (std::size_t k = 0; k + 1 < cfg.conv_repeats; ++k) {
    const std::size_t level = cfg.conv_repeats - k;
    const std::uint64_t f_in = ladder[level];
    const std::uint64_t f_out = ladder[level - 1];
    m[p + "/decoder_deconv"] += f_in * c * c * kf + c * f_out;
  }
  m[p + "/head"] += ladder[1] * c * 2 * sh.taps * kf;

  m[p + "/filter"] += cfg.linear_bins() * 4 * sh.taps;
}

}  // namespace

std::vector<TensorSpec> expected_layout(const ModelConfig& cfg) {
  cfg.validate();
  LayoutBuilder b(cfg);
  if (cfg.has_stage1()) b.stage(1);
  if (cfg.has_stage2()) b.stage(2);
  return b.take();
}

std::size_t param_count(const ModelConfig& cfg) {
  std::size_t total = 0;
  for (const TensorSpec& s : expected_layout(cfg)) {
    if (s.trainable) total += s.numel();
  }
  return total;
}

std::uint64_t CostBreakdown::total_per_frame() const {
  std::uint64_t total = 0;
  for (const auto& [name, macs] : per_frame) total += macs;
  return total;
}

CostBreakdown macs_per_frame(const ModelConfig& cfg) {
  cfg.validate();
  CostBreakdown cost;
  if (cfg.has_stage1()) stage_cost(cfg, 1, cost);
  if (cfg.has_stage2()) stage_cost(cfg, 2, cost);
  return cost;
}

double macs_per_second(const ModelConfig& cfg, const StftParams& stft) {
  ModelConfig c = cfg;
  c.stft = stft;
  const double frames_per_second =
      static_cast<double>(c.sample_rate) / static_cast<double>(stft.hop);
  return static_cast<double>(macs_per_frame(c).total_per_frame()) *
         frames_per_second;
}

double macs_per_second(const ModelConfig& cfg) {
  return macs_per_second(cfg, cfg.stft);
}

}  // namespace hdf
