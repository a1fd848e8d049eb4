// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Linear <-> ERB band mapping. The lowest `low_kept` linear bins pass through
// unchanged; the remaining bins are pooled into `erb_high` triangular bands
// whose centers are equally spaced on the ERB-rate scale
//   erb_rate(f) = 21.4 * log10(1 + 0.00437 f),
// each band reaching to its neighbours' centers (50% overlap).

#ifndef HDFNET_ERB_H_
#define HDFNET_ERB_H_

#include <cstddef>
#include <vector>

#include "hdfnet/tensor.h"

namespace hdf {

double erb_rate(double hz);
double erb_rate_inverse(double rate);

class ErbFilterbank {
 public:
  // Rows of analysis sum to 1; synthesis[f][b] = analysis[b][f] divided by
  // the column sum over b, so every synthesis row sums to 1 as well.
  static ErbFilterbank build(std::size_t n_fft_bins, int sample_rate,
                             std::size_t low_kept, std::size_t erb_high);

  std::size_t linear_bins() const { return n_linear_; }
  std::size_t bands() const { return n_bands_; }
  std::size_t low_kept() const { return low_kept_; }

  // Dense accessors (band-major for analysis, bin-major for synthesis).
  double analysis(std::size_t band, std::size_t bin) const {
    return analysis_[band * n_linear_ + bin];
  }
  double synthesis(std::size_t bin, std::size_t band) const {
    return synthesis_[bin * n_bands_ + band];
  }

  // Contiguous support [begin, end) of analysis row `band`.
  std::size_t support_begin(std::size_t band) const { return row_begin_[band]; }
  std::size_t support_end(std::size_t band) const { return row_end_[band]; }

  // Count of nonzero analysis weights; used for cost accounting.
  std::size_t nonzeros() const;

 private:
  std::size_t n_linear_ = 0;
  std::size_t n_bands_ = 0;
  std::size_t low_kept_ = 0;
  std::vector<double> analysis_;   // bands x linear
  std::vector<double> synthesis_;  // linear x bands
  std::vector<std::size_t> row_begin_;
  std::vector<std::size_t> row_end_;  // exclusive
  std::vector<std::size_t> col_begin_;  // synthesis row support, per bin
  std::vector<std::size_t> col_end_;

  friend Tensor4 erb_analyze(const Tensor4& x, const ErbFilterbank& fb);
  friend Tensor4 erb_synthesize(const Tensor4& x, const ErbFilterbank& fb);
};

// (B, C, T, linear_bins) -> (B, C, T, bands)
Tensor4 erb_analyze(const Tensor4& x, const ErbFilterbank& fb);
// (B, C, T, bands) -> (B, C, T, linear_bins)
Tensor4 erb_synthesize(const Tensor4& x, const ErbFilterbank& fb);

}  // namespace hdf

#endif  // HDFNET_ERB_H_
