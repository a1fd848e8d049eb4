// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "hdfnet/erb.h"

#include <algorithm>
#include <cmath>

#include "hdfnet/error.h"

namespace hdf {

double erb_rate(double hz) { return 21.4 * std::log10(1.0 + 0.00437 * hz); }

double erb_rate_inverse(double rate) {
  return (std::pow(10.0, rate / 21.4) - 1.0) / 0.00437;
}

ErbFilterbank ErbFilterbank::build(std::size_t n_fft_bins, int sample_rate,
                                   std::size_t low_kept,
                                   std::size_t erb_high) {
  HDF_CHECK_ARG(n_fft_bins >= 2, "ERB: need at least two linear bins");
  HDF_CHECK_ARG(sample_rate > 0, "ERB: sample rate must be positive");
  HDF_CHECK_ARG(low_kept <= n_fft_bins,
                "ERB: more kept low bins than linear bins");
  const std::size_t high_bins = n_fft_bins - low_kept;
  HDF_CHECK_ARG(erb_high <= high_bins,
                "ERB: " + std::to_string(erb_high) + " ERB bands requested for " +
                    std::to_string(high_bins) + " high-frequency bins");
  HDF_CHECK_ARG(high_bins == 0 || erb_high >= 1,
                "ERB: high-frequency bins present but no ERB bands requested");

  ErbFilterbank fb;
  fb.n_linear_ = n_fft_bins;
  fb.low_kept_ = low_kept;
  fb.n_bands_ = low_kept + erb_high;
  fb.analysis_.assign(fb.n_bands_ * n_fft_bins, 0.0);

  for (std::size_t b = 0; b < low_kept; ++b) {
    fb.analysis_[b * n_fft_bins + b] = 1.0;
  }

  if (erb_high > 0) {
    const double bin_hz =
        static_cast<double>(sample_rate) / (2.0 * static_cast<double>(n_fft_bins - 1));
    auto bin_rate = [&](std::size_t k) {
      return erb_rate(static_cast<double>(k) * bin_hz);
    };
    const double lo = bin_rate(low_kept);
    const double hi = bin_rate(n_fft_bins - 1);
    const double spacing =
        erb_high > 1 ? (hi - lo) / static_cast<double>(erb_high - 1) : 0.0;

    for (std::size_t e = 0; e < erb_high; ++e) {
      const std::size_t band = low_kept + e;
      double* row = fb.analysis_.data() + band * n_fft_bins;
      const double center = lo + spacing * static_cast<double>(e);
      for (std::size_t k = low_kept; k < n_fft_bins; ++k) {
        row[k] = erb_high == 1
                     ? 1.0
                     : std::max(0.0, 1.0 - std::abs(bin_rate(k) - center) / spacing);
      }
      double sum = 0.0;
      for (std::size_t k = low_kept; k < n_fft_bins; ++k) sum += row[k];
      if (sum == 0.0) {
        // Band narrower than a bin: fall back to the nearest bin.
        std::size_t best = low_kept;
        for (std::size_t k = low_kept; k < n_fft_bins; ++k) {
          if (std::abs(bin_rate(k) - center) < std::abs(bin_rate(best) - center)) {
            best = k;
          }
        }
        row[best] = 1.0;
        sum = 1.0;
      }
      for (std::size_t k = low_kept; k < n_fft_bins; ++k) row[k] /= sum;
    }
  }

  fb.row_begin_.resize(fb.n_bands_);
  fb.row_end_.resize(fb.n_bands_);
  for (std::size_t b = 0; b < fb.n_bands_; ++b) {
    std::size_t first = n_fft_bins, last = 0;
    for (std::size_t k = 0; k < n_fft_bins; ++k) {
      if (fb.analysis(b, k) > 0.0) {
        first = std::min(first, k);
        last = k + 1;
      }
    }
    fb.row_begin_[b] = first;
    fb.row_end_[b] = last;
  }

  fb.synthesis_.assign(n_fft_bins * fb.n_bands_, 0.0);
  fb.col_begin_.resize(n_fft_bins);
  fb.col_end_.resize(n_fft_bins);
  for (std::size_t k = 0; k < n_fft_bins; ++k) {
    double sum = 0.0;
    std::size_t first = fb.n_bands_, last = 0;
    for (std::size_t b = 0; b < fb.n_bands_; ++b) {
      const double w = fb.analysis(b, k);
      if (w > 0.0) {
        sum += w;
        first = std::min(first, b);
        last = b + 1;
      }
    }
    if (sum == 0.0) {
      throw Error("ERB: linear bin " + std::to_string(k) +
                  " is not covered by any band");
    }
    for (std::size_t b = first; b < last; ++b) {
      fb.synthesis_[k * fb.n_bands_ + b] = fb.analysis(b, k) / sum;
    }
    fb.col_begin_[k] = first;
    fb.col_end_[k] = last;
  }
  return fb;
}

std::size_t ErbFilterbank::nonzeros() const {
  std::size_t n = 0;
  for (double w : analysis_) n += w != 0.0;
  return n;
}

Tensor4 erb_analyze(const Tensor4& x, const ErbFilterbank& fb) {
  HDF_CHECK_SHAPE(x.freq() == fb.linear_bins(),
                  "erb_analyze: frequency dim " + std::to_string(x.freq()) +
                      ", filterbank expects " + std::to_string(fb.linear_bins()));
  Tensor4 out(x.batch(), x.channels(), x.time(), fb.bands());
  for (std::size_t b = 0; b < x.batch(); ++b) {
    for (std::size_t c = 0; c < x.channels(); ++c) {
      for (std::size_t t = 0; t < x.time(); ++t) {
        auto in = x.row(b, c, t);
        auto dst = out.row(b, c, t);
        for (std::size_t band = 0; band < fb.bands(); ++band) {
          const double* w = fb.analysis_.data() + band * fb.n_linear_;
          double acc = 0.0;
          for (std::size_t k = fb.row_begin_[band]; k < fb.row_end_[band]; ++k) {
            acc += w[k] * in[k];
          }
          dst[band] = acc;
        }
      }
    }
  }
  return out;
}

Tensor4 erb_synthesize(const Tensor4& x, const ErbFilterbank& fb) {
  HDF_CHECK_SHAPE(x.freq() == fb.bands(),
                  "erb_synthesize: frequency dim " + std::to_string(x.freq()) +
                      ", filterbank has " + std::to_string(fb.bands()) +
                      " bands");
  Tensor4 out(x.batch(), x.channels(), x.time(), fb.linear_bins());
  for (std::size_t b = 0; b < x.batch(); ++b) {
    for (std::size_t c = 0; c < x.channels(); ++c) {
      for (std::size_t t = 0; t < x.time(); ++t) {
        auto in = x.row(b, c, t);
        auto dst = out.row(b, c, t);
        for (std::size_t k = 0; k < fb.linear_bins(); ++k) {
          const double* w = fb.synthesis_.data() + k * fb.n_bands_;
          double acc = 0.0;
          for (std::size_t band = fb.col_begin_[k]; band < fb.col_end_[k];
               ++band) {
            acc += w[band] * in[band];
          }
          dst[k] = acc;
        }
      }
    }
  }
  return out;
}

}  // namespace hdf
