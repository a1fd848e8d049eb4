// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "hdfnet/config.h"

#include <sstream>

#include "hdfnet/error.h"

namespace hdf {

ModelConfig ModelConfig::single_stage_df() {
  ModelConfig cfg;
  cfg.stage1_mode.reset();
  cfg.stage2_mode = FilterMode::kDf;
  return cfg;
}

FilterSpec ModelConfig::stage1_filter() const {
  HDF_CHECK_ARG(stage1_mode.has_value(), "stage 1 is disabled");
  return FilterSpec::for_mode(*stage1_mode, df_order);
}

FilterSpec ModelConfig::stage2_filter() const {
  HDF_CHECK_ARG(stage2_mode.has_value(), "stage 2 is disabled");
  return FilterSpec::for_mode(*stage2_mode, df_order);
}

std::vector<std::size_t> frequency_ladder(const ModelConfig& cfg,
                                          std::size_t freq) {
  std::vector<std::size_t> ladder{freq};
  for (std::size_t i = 0; i < cfg.conv_repeats; ++i) {
    const std::size_t padded = ladder.back() + 2 * cfg.conv_pad_f;
    HDF_CHECK_ARG(padded >= cfg.conv_kernel_f,
                  "frequency ladder collapses below the conv kernel width");
    ladder.push_back((padded - cfg.conv_kernel_f) / cfg.conv_stride_f + 1);
  }
  return ladder;
}

void ModelConfig::validate() const {
  stft.validate();
  HDF_CHECK_ARG(sample_rate == kSampleRate, "sample rate must be 16000 Hz");
  HDF_CHECK_ARG(has_stage1() || has_stage2(), "at least one stage must run");
  HDF_CHECK_ARG(stage1_channels > 0 && stage2_channels > 0,
                "stage channel counts must be positive");
  HDF_CHECK_ARG(conv_repeats >= 1, "need at least one downsampling conv");
  HDF_CHECK_ARG(df_order >= 1, "filter order must be positive");
  HDF_CHECK_ARG(sbf_k >= 1 && sbf_k % 2 == 1, "sbf_k must be odd");
  HDF_CHECK_ARG(gru_groups >= 1, "gru_groups must be positive");
  HDF_CHECK_ARG(taconv_kernel >= 1 && taconv_kernel % 2 == 1,
                "TAConv depthwise kernel must be odd");
  HDF_CHECK_ARG(ta_kernel >= 1, "TA conv kernel must be positive");
  HDF_CHECK_ARG(bn_eps > 0.0, "bn_eps must be positive");
  for (std::size_t ch : {stage1_channels, stage2_channels}) {
    HDF_CHECK_ARG(ch % gru_groups == 0,
                  "gru_groups must divide the stage channel counts");
  }
  if (has_stage1()) (void)stage1_filter();
  if (has_stage2()) (void)stage2_filter();
  HDF_CHECK_ARG(erb_low_kept + erb_high_bands <= linear_bins(),
                "ERB band count exceeds linear bins");

  // Each encoder level must be reproduced exactly by the transposed convs,
  // whose output size is (F - 1) * stride + kernel - 2 * pad.
  auto check_ladder = [&](std::size_t freq, const char* stage) {
    const auto ladder = frequency_ladder(*this, freq);
    for (std::size_t i = ladder.size() - 1; i > 0; --i) {
      const std::size_t up =
          (ladder[i] - 1) * conv_stride_f + conv_kernel_f - 2 * conv_pad_f;
      HDF_CHECK_ARG(up == ladder[i - 1],
                    std::string(stage) + ": frequency size " +
                        std::to_string(ladder[i - 1]) +
                        " is not recovered by the transposed conv (gets " +
                        std::to_string(up) + ")");
    }
  };
  if (has_stage1()) check_ladder(erb_bands(), "stage 1");
  if (has_stage2()) check_ladder(linear_bins(), "stage 2");
}

std::string ModelConfig::canonical_string() const {
  auto mode = [](const std::optional<FilterMode>& m) {
    return m ? std::string(to_string(*m)) : std::string("none");
  };
  std::ostringstream os;
  os.precision(17);
  os << "stage1_channels=" << stage1_channels << "\n"
     << "stage2_channels=" << stage2_channels << "\n"
     << "conv_repeats=" << conv_repeats << "\n"
     << "taconv_repeats=" << taconv_repeats << "\n"
     << "dprnn_repeats=" << dprnn_repeats << "\n"
     << "df_order=" << df_order << "\n"
     << "sbf_k=" << sbf_k << "\n"
     << "stage1_mode=" << mode(stage1_mode) << "\n"
     << "stage2_mode=" << mode(stage2_mode) << "\n"
     << "erb_low_kept=" << erb_low_kept << "\n"
     << "erb_high_bands=" << erb_high_bands << "\n"
     << "gru_groups=" << gru_groups << "\n"
     << "conv_kernel_f=" << conv_kernel_f << "\n"
     << "conv_stride_f=" << conv_stride_f << "\n"
     << "conv_pad_f=" << conv_pad_f << "\n"
     << "taconv_kernel=" << taconv_kernel << "\n"
     << "ta_kernel=" << ta_kernel << "\n"
     << "bn_eps=" << bn_eps << "\n"
     << "window_len=" << stft.window_len << "\n"
     << "hop=" << stft.hop << "\n"
     << "fft_size=" << stft.fft_size << "\n"
     << "sample_rate=" << sample_rate << "\n";
  return os.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t ModelConfig::digest() const {
  return fnv1a64(canonical_string());
}

bool ModelConfig::operator==(const ModelConfig& o) const {
  return canonical_string() == o.canonical_string();
}

}  // namespace hdf
