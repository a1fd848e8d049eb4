// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "hdfnet/filtering.h"

#include "hdfnet/error.h"

namespace hdf {

std::string_view to_string(FilterMode mode) {
  switch (mode) {
    case FilterMode::kCrm: return "crm";
    case FilterMode::kTdf: return "tdf";
    case FilterMode::kFdf: return "fdf";
    case FilterMode::kDf: return "df";
  }
  return "?";
}

FilterMode parse_filter_mode(std::string_view name) {
  if (name == "crm" || name == "CRM") return FilterMode::kCrm;
  if (name == "tdf" || name == "TDF") return FilterMode::kTdf;
  if (name == "fdf" || name == "FDF") return FilterMode::kFdf;
  if (name == "df" || name == "DF") return FilterMode::kDf;
  throw InvalidArgument("unknown filter mode '" + std::string(name) + "'");
}

void FilterSpec::validate() const {
  HDF_CHECK_ARG(temporal_taps >= 1, "filter needs at least one temporal tap");
  switch (mode) {
    case FilterMode::kCrm:
      HDF_CHECK_ARG(temporal_taps == 1 && freq_halfwidth == 0,
                    "CRM filter must have a single tap");
      break;
    case FilterMode::kTdf:
      HDF_CHECK_ARG(freq_halfwidth == 0,
                    "temporal deep filter must have J = 0");
      break;
    case FilterMode::kFdf:
      HDF_CHECK_ARG(temporal_taps == 1,
                    "frequency deep filter must have a single temporal tap");
      break;
    case FilterMode::kDf:
      break;
  }
}

FilterSpec FilterSpec::for_mode(FilterMode mode, std::size_t order) {
  HDF_CHECK_ARG(order >= 1, "filter order must be positive");
  const bool odd = order % 2 == 1;
  switch (mode) {
    case FilterMode::kCrm:
      return crm();
    case FilterMode::kTdf:
      return tdf(order);
    case FilterMode::kFdf:
      HDF_CHECK_ARG(odd, "frequency filter order must be odd");
      return fdf(order / 2);
    case FilterMode::kDf:
      HDF_CHECK_ARG(odd, "deep filter order must be odd");
      return df(order, order / 2);
  }
  return crm();
}

FilterCoeffs::FilterCoeffs(std::size_t frames, std::size_t bins,
                           FilterSpec spec)
    : frames_(frames),
      bins_(bins),
      spec_(spec),
      real_(frames * bins * spec.taps(), 0.0),
      imag_(frames * bins * spec.taps(), 0.0) {
  spec_.validate();
}

FilterCoeffs FilterCoeffs::identity(std::size_t frames, std::size_t bins,
                                    FilterSpec spec) {
  FilterCoeffs c(frames, bins, spec);
  const std::size_t center = spec.tap_index(0, 0);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t f = 0; f < bins; ++f) c.re(t, f, center) = 1.0;
  }
  return c;
}

namespace {

void check_grid(const ComplexSpectrogram& x, const FilterCoeffs& c,
                const char* op) {
  HDF_CHECK_SHAPE(x.frames() == c.frames() && x.bins() == c.bins(),
                  std::string(op) + ": coefficients are " +
                      std::to_string(c.frames()) + "x" +
                      std::to_string(c.bins()) + ", spectrogram is " +
                      std::to_string(x.frames()) + "x" +
                      std::to_string(x.bins()));
}

void check_mode(const FilterCoeffs& c, FilterMode mode, const char* op) {
  if (c.spec().mode != mode) {
    throw InvalidArgument(std::string(op) + ": coefficients are for mode " +
                          std::string(to_string(c.spec().mode)));
  }
}

// Shared kernel for every geometry. For each output bin the taps are visited
// in coefficient order (i major, j minor), so the restricted geometries
// accumulate in the same order as the general one.
ComplexSpectrogram filter_kernel(const ComplexSpectrogram& x,
                                 const FilterCoeffs& c) {
  const FilterSpec& spec = c.spec();
  const long big_j = static_cast<long>(spec.freq_halfwidth);
  const long bins = static_cast<long>(x.bins());
  ComplexSpectrogram out(x.frames(), x.bins());
  for (std::size_t t = 0; t < x.frames(); ++t) {
    for (long f = 0; f < bins; ++f) {
      const double* cr = c.real().data() + c.offset(t, f, 0);
      const double* ci = c.imag().data() + c.offset(t, f, 0);
      double acc_re = 0.0, acc_im = 0.0;
      for (std::size_t i = 0; i < spec.temporal_taps && i <= t; ++i) {
        const std::size_t src_t = t - i;
        for (long j = -big_j; j <= big_j; ++j) {
          const long src_f = f - j;
          if (src_f < 0 || src_f >= bins) continue;
          const std::size_t k = spec.tap_index(i, j);
          const double xr = x.re(src_t, src_f), xi = x.im(src_t, src_f);
          acc_re += cr[k] * xr - ci[k] * xi;
          acc_im += cr[k] * xi + ci[k] * xr;
        }
      }
      out.re(t, f) = acc_re;
      out.im(t, f) = acc_im;
    }
  }
  return out;
}

}  // namespace

ComplexSpectrogram apply_df(const ComplexSpectrogram& x,
                            const FilterCoeffs& c) {
  check_mode(c, FilterMode::kDf, "apply_df");
  check_grid(x, c, "apply_df");
  return filter_kernel(x, c);
}

ComplexSpectrogram apply_tdf(const ComplexSpectrogram& x,
                             const FilterCoeffs& c) {
  check_mode(c, FilterMode::kTdf, "apply_tdf");
  check_grid(x, c, "apply_tdf");
  const std::size_t taps = c.spec().temporal_taps;
  ComplexSpectrogram out(x.frames(), x.bins());
  for (std::size_t t = 0; t < x.frames(); ++t) {
    for (std::size_t f = 0; f < x.bins(); ++f) {
      double acc_re = 0.0, acc_im = 0.0;
      for (std::size_t i = 0; i < taps && i <= t; ++i) {
        const double cr = c.re(t, f, i), ci = c.im(t, f, i);
        const double xr = x.re(t - i, f), xi = x.im(t - i, f);
        acc_re += cr * xr - ci * xi;
        acc_im += cr * xi + ci * xr;
      }
      out.re(t, f) = acc_re;
      out.im(t, f) = acc_im;
    }
  }
  return out;
}

ComplexSpectrogram apply_fdf(const ComplexSpectrogram& x,
                             const FilterCoeffs& c) {
  check_mode(c, FilterMode::kFdf, "apply_fdf");
  check_grid(x, c, "apply_fdf");
  const long big_j = static_cast<long>(c.spec().freq_halfwidth);
  const long bins = static_cast<long>(x.bins());
  ComplexSpectrogram out(x.frames(), x.bins());
  for (std::size_t t = 0; t < x.frames(); ++t) {
    for (long f = 0; f < bins; ++f) {
      double acc_re = 0.0, acc_im = 0.0;
      for (long j = -big_j; j <= big_j; ++j) {
        const long src = f - j;
        if (src < 0 || src >= bins) continue;
        const std::size_t k = static_cast<std::size_t>(j + big_j);
        const double cr = c.re(t, f, k), ci = c.im(t, f, k);
        const double xr = x.re(t, src), xi = x.im(t, src);
        acc_re += cr * xr - ci * xi;
        acc_im += cr * xi + ci * xr;
      }
      out.re(t, f) = acc_re;
      out.im(t, f) = acc_im;
    }
  }
  return out;
}

ComplexSpectrogram apply_crm(const ComplexSpectrogram& x,
                             const FilterCoeffs& c) {
  check_mode(c, FilterMode::kCrm, "apply_crm");
  check_grid(x, c, "apply_crm");
  ComplexSpectrogram out(x.frames(), x.bins());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cr = c.real()[i], ci = c.imag()[i];
    const double xr = x.real()[i], xi = x.imag()[i];
    // Same expression shape as the tap loops so reductions agree exactly.
    double acc_re = 0.0, acc_im = 0.0;
    acc_re += cr * xr - ci * xi;
    acc_im += cr * xi + ci * xr;
    out.real()[i] = acc_re;
    out.imag()[i] = acc_im;
  }
  return out;
}

ComplexSpectrogram apply_filter(const ComplexSpectrogram& x,
                                const FilterCoeffs& c) {
  switch (c.spec().mode) {
    case FilterMode::kCrm: return apply_crm(x, c);
    case FilterMode::kTdf: return apply_tdf(x, c);
    case FilterMode::kFdf: return apply_fdf(x, c);
    case FilterMode::kDf: return apply_df(x, c);
  }
  return apply_df(x, c);
}

StreamingFilter::StreamingFilter(FilterSpec spec, std::size_t bins)
    : spec_(spec), bins_(bins) {
  spec_.validate();
}

void StreamingFilter::reset() { history_.clear(); }

void StreamingFilter::push(std::span<const double> frame_re,
                           std::span<const double> frame_im,
                           std::span<const double> coeff_re,
                           std::span<const double> coeff_im,
                           std::span<double> out_re, std::span<double> out_im) {
  const std::size_t taps = spec_.taps();
  HDF_CHECK_SHAPE(frame_re.size() == bins_ && frame_im.size() == bins_ &&
                      out_re.size() == bins_ && out_im.size() == bins_,
                  "StreamingFilter: frame size");
  HDF_CHECK_SHAPE(coeff_re.size() == bins_ * taps &&
                      coeff_im.size() == bins_ * taps,
                  "StreamingFilter: coefficient size");

  std::vector<std::complex<double>> frame(bins_);
  for (std::size_t f = 0; f < bins_; ++f) frame[f] = {frame_re[f], frame_im[f]};
  history_.push_front(std::move(frame));
  while (history_.size() > spec_.temporal_taps) history_.pop_back();

  const long big_j = static_cast<long>(spec_.freq_halfwidth);
  const long bins = static_cast<long>(bins_);
  for (long f = 0; f < bins; ++f) {
    const double* cr = coeff_re.data() + f * taps;
    const double* ci = coeff_im.data() + f * taps;
    double acc_re = 0.0, acc_im = 0.0;
    for (std::size_t i = 0; i < history_.size(); ++i) {
      const auto& past = history_[i];
      for (long j = -big_j; j <= big_j; ++j) {
        const long src = f - j;
        if (src < 0 || src >= bins) continue;
        const std::size_t k = spec_.tap_index(i, j);
        const double xr = past[src].real(), xi = past[src].imag();
        acc_re += cr[k] * xr - ci[k] * xi;
        acc_im += cr[k] * xi + ci[k] * xr;
      }
    }
    out_re[f] = acc_re;
    out_im[f] = acc_im;
  }
}

Tensor4 sbf_expand(const Tensor4& x, const SbfSpec& spec) {
  HDF_CHECK_ARG(spec.k >= 1 && spec.k % 2 == 1,
                "sub-band fusion width must be odd");
  const std::size_t ch = x.channels();
  const long bins = static_cast<long>(x.freq());
  const long half = spec.half();
  Tensor4 out(x.batch(), ch * spec.k, x.time(), x.freq());
  for (std::size_t b = 0; b < x.batch(); ++b) {
    for (long d = -half; d <= half; ++d) {
      const std::size_t block = static_cast<std::size_t>(d + half);
      for (std::size_t c = 0; c < ch; ++c) {
        for (std::size_t t = 0; t < x.time(); ++t) {
          auto in = x.row(b, c, t);
          auto dst = out.row(b, block * ch + c, t);
          for (long f = 0; f < bins; ++f) {
            const long src = f - d;
            dst[f] = (src >= 0 && src < bins) ? in[src] : 0.0;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace hdf
