// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "hdfnet/spectral.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.h"
#include "hdfnet/error.h"

namespace hdf {
namespace {

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw InvalidArgument(std::string(what) + " contains non-finite values");
    }
  }
}

// Index into a signal of length n extended by whole-sample reflection
// (..., x2, x1, x0, x1, x2, ...), repeated as often as needed.
std::size_t reflect_index(long i, std::size_t n) {
  if (n == 1) return 0;
  const long period = 2 * static_cast<long>(n - 1);
  long m = i % period;
  if (m < 0) m += period;
  if (m >= static_cast<long>(n)) m = period - m;
  return static_cast<std::size_t>(m);
}

}  // namespace

void StftParams::validate() const {
  HDF_CHECK_ARG(hop > 0, "STFT hop must be positive");
  HDF_CHECK_ARG(hop <= window_len, "STFT hop must not exceed window length");
  HDF_CHECK_ARG(window_len <= fft_size,
                "STFT window length must not exceed FFT size");
  HDF_CHECK_ARG(fft_size >= 2 && fft_size % 2 == 0,
                "STFT FFT size must be even");
}

std::vector<double> analysis_window(const StftParams& params) {
  params.validate();
  std::vector<double> w(params.fft_size, 0.0);
  const std::size_t offset = (params.fft_size - params.window_len) / 2;
  const double n = static_cast<double>(params.window_len);
  for (std::size_t i = 0; i < params.window_len; ++i) {
    w[offset + i] =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / n);
  }
  return w;
}

ComplexSpectrogram::ComplexSpectrogram(std::size_t frames, std::size_t bins)
    : frames_(frames),
      bins_(bins),
      real_(frames * bins, 0.0),
      imag_(frames * bins, 0.0) {}

ComplexSpectrogram operator+(const ComplexSpectrogram& a,
                             const ComplexSpectrogram& b) {
  HDF_CHECK_SHAPE(a.same_shape(b), "spectrogram sum: shape mismatch");
  ComplexSpectrogram out = a;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.real()[i] += b.real()[i];
    out.imag()[i] += b.imag()[i];
  }
  return out;
}

std::size_t stft_frame_count(std::size_t num_samples,
                             const StftParams& params) {
  // Centered framing pads window_len / 2 on each side.
  const std::size_t padded = num_samples + 2 * (params.window_len / 2);
  if (padded < params.window_len) return 0;
  return (padded - params.window_len) / params.hop + 1;
}

ComplexSpectrogram stft(const Waveform& wave, const StftParams& params) {
  params.validate();
  if (wave.samples.empty()) throw InvalidArgument("stft: empty waveform");
  if (wave.sample_rate != kSampleRate) {
    throw InvalidArgument("stft: sample rate " +
                          std::to_string(wave.sample_rate) +
                          " Hz, expected 16000 Hz");
  }
  check_finite(wave.samples, "stft input");

  const std::size_t n = wave.samples.size();
  const std::size_t frames = stft_frame_count(n, params);
  const std::size_t bins = params.bins();
  // The window is centered inside the FFT buffer; frame t covers samples
  // t * hop - fft_size / 2 .. t * hop + fft_size / 2 - 1.
  const long buffer_origin = static_cast<long>(params.fft_size / 2);

  const std::vector<double> window = analysis_window(params);
  const internal::RealFft fft(params.fft_size);
  std::vector<double> frame(params.fft_size);
  std::vector<std::complex<double>> spectrum(bins);

  ComplexSpectrogram out(frames, bins);
  for (std::size_t t = 0; t < frames; ++t) {
    const long start = static_cast<long>(t * params.hop) - buffer_origin;
    for (std::size_t i = 0; i < params.fft_size; ++i) {
      if (window[i] == 0.0) {
        frame[i] = 0.0;
        continue;
      }
      frame[i] = window[i] *
                 wave.samples[reflect_index(start + static_cast<long>(i), n)];
    }
    fft.forward(frame, spectrum);
    for (std::size_t f = 0; f < bins; ++f) out.set(t, f, spectrum[f]);
  }
  out.stft_params = params;
  return out;
}

std::vector<double> inverse_frame(const ComplexSpectrogram& spec,
                                  std::size_t frame,
                                  const StftParams& params) {
  params.validate();
  HDF_CHECK_SHAPE(spec.bins() == params.bins(),
                  "inverse_frame: spectrogram has " +
                      std::to_string(spec.bins()) + " bins, expected " +
                      std::to_string(params.bins()));
  HDF_CHECK_SHAPE(frame < spec.frames(), "inverse_frame: frame out of range");
  std::vector<std::complex<double>> row(spec.bins());
  for (std::size_t f = 0; f < spec.bins(); ++f) row[f] = spec.at(frame, f);
  std::vector<double> out(params.fft_size);
  internal::RealFft(params.fft_size).inverse(row, out);
  return out;
}

Waveform istft(const ComplexSpectrogram& spec, const StftParams& params,
               std::optional<std::size_t> length) {
  params.validate();
  HDF_CHECK_SHAPE(spec.bins() == params.bins(),
                  "istft: spectrogram has " + std::to_string(spec.bins()) +
                      " bins, expected " + std::to_string(params.bins()));
  check_finite(spec.real(), "istft input");
  check_finite(spec.imag(), "istft input");

  const std::size_t frames = spec.frames();
  const std::size_t out_len =
      length.value_or(frames == 0 ? 0 : (frames - 1) * params.hop);
  const std::size_t origin = params.fft_size / 2;
  // Overlap-add buffer in padded coordinates.
  const std::size_t padded_len =
      std::max(frames == 0 ? 0 : (frames - 1) * params.hop + params.fft_size,
               out_len + origin);
  std::vector<double> acc(padded_len, 0.0);
  std::vector<double> norm(padded_len, 0.0);

  const std::vector<double> window = analysis_window(params);
  const internal::RealFft fft(params.fft_size);
  std::vector<std::complex<double>> row(spec.bins());
  std::vector<double> frame(params.fft_size);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t f = 0; f < spec.bins(); ++f) row[f] = spec.at(t, f);
    fft.inverse(row, frame);
    const std::size_t start = t * params.hop;
    for (std::size_t i = 0; i < params.fft_size; ++i) {
      acc[start + i] += window[i] * frame[i];
      norm[start + i] += window[i] * window[i];
    }
  }

  Waveform out;
  out.sample_rate = kSampleRate;
  out.samples.assign(out_len, 0.0);
  for (std::size_t n = 0; n < out_len; ++n) {
    const double d = norm[n + origin];
    out.samples[n] = d > kMagnitudeEpsilon ? acc[n + origin] / d : 0.0;
  }
  return out;
}

FeatureStack build_feature_stack(const ComplexSpectrogram& x,
                                 const ComplexSpectrogram* s1) {
  if (s1 != nullptr) {
    HDF_CHECK_SHAPE(x.same_shape(*s1),
                    "build_feature_stack: stage-1 spectrogram shape differs "
                    "from the input");
  }
  const std::size_t frames = x.frames();
  const std::size_t bins = x.bins();
  FeatureStack fs{Tensor4(1, s1 ? 6 : 3, frames, bins)};
  Tensor4& m = fs.tensor;
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t f = 0; f < bins; ++f) {
      const double xr = x.re(t, f), xi = x.im(t, f);
      m(0, 0, t, f) = std::hypot(xr, xi);
      if (s1 == nullptr) {
        m(0, 1, t, f) = xr;
        m(0, 2, t, f) = xi;
      } else {
        m(0, 1, t, f) = xi;
        m(0, 2, t, f) = xr;
        const double sr = s1->re(t, f), si = s1->im(t, f);
        m(0, 3, t, f) = std::hypot(sr, si);
        m(0, 4, t, f) = si;
        m(0, 5, t, f) = sr;
      }
    }
  }
  return fs;
}

ComplexSpectrogram compress(const ComplexSpectrogram& spec, double exponent) {
  HDF_CHECK_ARG(exponent > 0.0 && exponent <= 1.0,
                "compress: exponent must lie in (0, 1]");
  check_finite(spec.real(), "compress input");
  check_finite(spec.imag(), "compress input");
  ComplexSpectrogram out = spec;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double re = spec.real()[i], im = spec.imag()[i];
    const double mag = std::hypot(re, im);
    if (mag <= kMagnitudeEpsilon) {
      out.real()[i] = 0.0;
      out.imag()[i] = 0.0;
      continue;
    }
    const double gain = std::pow(mag, exponent - 1.0);
    out.real()[i] = re * gain;
    out.imag()[i] = im * gain;
  }
  return out;
}

}  // namespace hdf
