// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Complex deep filtering of spectrograms.
//
// A deep filter predicts, for every TF bin (t, f), a small complex FIR filter
// over the neighbourhood { (t - i, f - j) : 0 <= i <= I, -J <= j <= J }:
//
//   S(t, f) = sum_i sum_j C(t, f, i, j) * X(t - i, f - j)
//
// Taps that fall before frame 0 or outside [0, F) read zero. The restricted
// geometries are temporal (J = 0), frequency (I = 0) and the complex ratio
// mask (I = J = 0).

#ifndef HDFNET_FILTERING_H_
#define HDFNET_FILTERING_H_

#include <complex>
#include <cstddef>
#include <deque>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hdfnet/spectral.h"
#include "hdfnet/tensor.h"

namespace hdf {

enum class FilterMode { kCrm, kTdf, kFdf, kDf };

std::string_view to_string(FilterMode mode);
FilterMode parse_filter_mode(std::string_view name);

struct FilterSpec {
  FilterMode mode = FilterMode::kDf;
  std::size_t temporal_taps = 1;  // I + 1
  std::size_t freq_halfwidth = 0;  // J

  std::size_t taps() const { return temporal_taps * (2 * freq_halfwidth + 1); }
  std::size_t freq_taps() const { return 2 * freq_halfwidth + 1; }

  // Index of tap (i, j) in a coefficient vector: i major, j minor, j running
  // from -J to +J.
  std::size_t tap_index(std::size_t i, long j) const {
    return i * freq_taps() + static_cast<std::size_t>(
                                 j + static_cast<long>(freq_halfwidth));
  }

  // Throws InvalidArgument if the geometry contradicts the mode.
  void validate() const;

  // Geometry for a filter "order": TDF uses `order` past frames (I =
  // order - 1), FDF uses `order` neighbouring bins (J = (order - 1) / 2, so
  // order must be odd), DF uses both, CRM ignores the order.
  static FilterSpec for_mode(FilterMode mode, std::size_t order);
  static FilterSpec crm() { return {FilterMode::kCrm, 1, 0}; }
  static FilterSpec tdf(std::size_t taps) { return {FilterMode::kTdf, taps, 0}; }
  static FilterSpec fdf(std::size_t halfwidth) {
    return {FilterMode::kFdf, 1, halfwidth};
  }
  static FilterSpec df(std::size_t taps, std::size_t halfwidth) {
    return {FilterMode::kDf, taps, halfwidth};
  }
};

// Complex coefficients, layout (t, f, tap) with tap ordered per
// FilterSpec::tap_index.
class FilterCoeffs {
 public:
  FilterCoeffs() = default;
  FilterCoeffs(std::size_t frames, std::size_t bins, FilterSpec spec);

  std::size_t frames() const { return frames_; }
  std::size_t bins() const { return bins_; }
  std::size_t taps() const { return spec_.taps(); }
  const FilterSpec& spec() const { return spec_; }

  std::size_t offset(std::size_t t, std::size_t f, std::size_t tap) const {
    return (t * bins_ + f) * spec_.taps() + tap;
  }
  double& re(std::size_t t, std::size_t f, std::size_t tap) {
    return real_[offset(t, f, tap)];
  }
  double re(std::size_t t, std::size_t f, std::size_t tap) const {
    return real_[offset(t, f, tap)];
  }
  double& im(std::size_t t, std::size_t f, std::size_t tap) {
    return imag_[offset(t, f, tap)];
  }
  double im(std::size_t t, std::size_t f, std::size_t tap) const {
    return imag_[offset(t, f, tap)];
  }

  std::vector<double>& real() { return real_; }
  const std::vector<double>& real() const { return real_; }
  std::vector<double>& imag() { return imag_; }
  const std::vector<double>& imag() const { return imag_; }

  // Coefficients for the identity filter: 1 + 0i on tap (0, 0).
  static FilterCoeffs identity(std::size_t frames, std::size_t bins,
                               FilterSpec spec);

 private:
  std::size_t frames_ = 0;
  std::size_t bins_ = 0;
  FilterSpec spec_;
  std::vector<double> real_;
  std::vector<double> imag_;
};

// Each apply_* requires coeffs.spec().mode to match and the coefficient grid
// to match x.
ComplexSpectrogram apply_df(const ComplexSpectrogram& x, const FilterCoeffs& c);
ComplexSpectrogram apply_tdf(const ComplexSpectrogram& x,
                             const FilterCoeffs& c);
ComplexSpectrogram apply_fdf(const ComplexSpectrogram& x,
                             const FilterCoeffs& c);
ComplexSpectrogram apply_crm(const ComplexSpectrogram& x,
                             const FilterCoeffs& c);

// Dispatches on coeffs.spec().mode.
ComplexSpectrogram apply_filter(const ComplexSpectrogram& x,
                                const FilterCoeffs& c);

// Frame-at-a-time deep filtering. Keeps the last I input frames; push() takes
// one input frame and its coefficients and returns the filtered frame, which
// equals the corresponding frame of apply_filter() on the whole sequence.
class StreamingFilter {
 public:
  StreamingFilter(FilterSpec spec, std::size_t bins);

  // frame_re/frame_im: `bins` values. coeff_re/coeff_im: bins * taps values in
  // (f, tap) order.
  void push(std::span<const double> frame_re, std::span<const double> frame_im,
            std::span<const double> coeff_re, std::span<const double> coeff_im,
            std::span<double> out_re, std::span<double> out_im);
  void reset();

 private:
  FilterSpec spec_;
  std::size_t bins_;
  // history_[0] is the current frame, history_[i] the frame i steps back.
  std::deque<std::vector<std::complex<double>>> history_;
};

struct SbfSpec {
  std::size_t k = 5;  // odd
  long half() const { return static_cast<long>(k / 2); }
};

// Sub-band fusion. (B, C, T, F) -> (B, C * k, T, F). Output channel
// (d_index * C + c), d_index = d + (k - 1) / 2 for offset d in
// [-(k-1)/2, (k-1)/2], holds input channel c shifted up by d bins:
// out(f) = in(f - d), zero where f - d falls outside [0, F).
Tensor4 sbf_expand(const Tensor4& x, const SbfSpec& spec);

}  // namespace hdf

#endif  // HDFNET_FILTERING_H_
