// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Time/frequency conversion for the enhancement pipeline.
//
// Analysis is centered: the waveform is reflect-padded by window_len/2 on both
// sides, so frame t is centered on sample t * hop. Synthesis is weighted
// overlap-add with the analysis window and a sum-of-squared-windows
// denominator, which inverts the analysis exactly wherever that sum is
// nonzero.

#ifndef HDFNET_SPECTRAL_H_
#define HDFNET_SPECTRAL_H_

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "hdfnet/tensor.h"

namespace hdf {

inline constexpr int kSampleRate = 16000;

struct Waveform {
  std::vector<double> samples;
  int sample_rate = kSampleRate;

  std::size_t size() const { return samples.size(); }
};

enum class WindowKind { kHann };

struct StftParams {
  std::size_t window_len = 512;  // 32 ms at 16 kHz
  std::size_t hop = 256;         // 16 ms
  std::size_t fft_size = 512;
  WindowKind window = WindowKind::kHann;

  std::size_t bins() const { return fft_size / 2 + 1; }
  // Throws InvalidArgument unless 0 < hop <= window_len <= fft_size.
  void validate() const;
};

// Periodic Hann window of length params.window_len, zero-padded symmetrically
// to params.fft_size.
std::vector<double> analysis_window(const StftParams& params);

// Complex T x F spectrogram, stored as two row-major (frame-major) planes.
class ComplexSpectrogram {
 public:
  ComplexSpectrogram() = default;
  ComplexSpectrogram(std::size_t frames, std::size_t bins);

  std::size_t frames() const { return frames_; }
  std::size_t bins() const { return bins_; }
  std::size_t size() const { return real_.size(); }

  double& re(std::size_t t, std::size_t f) { return real_[t * bins_ + f]; }
  double re(std::size_t t, std::size_t f) const { return real_[t * bins_ + f]; }
  double& im(std::size_t t, std::size_t f) { return imag_[t * bins_ + f]; }
  double im(std::size_t t, std::size_t f) const { return imag_[t * bins_ + f]; }

  std::complex<double> at(std::size_t t, std::size_t f) const {
    return {re(t, f), im(t, f)};
  }
  void set(std::size_t t, std::size_t f, std::complex<double> v) {
    re(t, f) = v.real();
    im(t, f) = v.imag();
  }

  std::vector<double>& real() { return real_; }
  const std::vector<double>& real() const { return real_; }
  std::vector<double>& imag() { return imag_; }
  const std::vector<double>& imag() const { return imag_; }

  bool same_shape(const ComplexSpectrogram& other) const {
    return frames_ == other.frames_ && bins_ == other.bins_;
  }

  // Analysis parameters this spectrogram came from, when produced by stft().
  std::optional<StftParams> stft_params;

 private:
  std::size_t frames_ = 0;
  std::size_t bins_ = 0;
  std::vector<double> real_;
  std::vector<double> imag_;
};

ComplexSpectrogram operator+(const ComplexSpectrogram& a,
                             const ComplexSpectrogram& b);

// Number of frames stft() produces for a waveform of `num_samples`.
std::size_t stft_frame_count(std::size_t num_samples, const StftParams& params);

ComplexSpectrogram stft(const Waveform& wave, const StftParams& params = {});

// Output length defaults to (frames - 1) * hop, the length of any waveform
// whose sample count is a multiple of hop. Pass the original length to trim or
// extend (up to window_len / 2 past the last frame center).
Waveform istft(const ComplexSpectrogram& spec, const StftParams& params = {},
               std::optional<std::size_t> length = std::nullopt);

// Real inverse DFT of one spectrum row (fft_size samples, 1/N scaled).
std::vector<double> inverse_frame(const ComplexSpectrogram& spec,
                                  std::size_t frame,
                                  const StftParams& params = {});

// Network input planes. Without s1: (|X|, X_r, X_i). With s1:
// (|X|, X_i, X_r, |S1|, S1_i, S1_r). Tensor shape (1, C, T, F).
struct FeatureStack {
  Tensor4 tensor;
  std::size_t channels() const { return tensor.channels(); }
};

FeatureStack build_feature_stack(
    const ComplexSpectrogram& x,
    const ComplexSpectrogram* s1 = nullptr);

inline constexpr double kMagnitudeEpsilon = 1e-12;

// Power-law magnitude compression with the phase kept: |S|^c * exp(i*arg S).
// Bins with |S| <= 1e-12 map to zero.
ComplexSpectrogram compress(const ComplexSpectrogram& spec, double exponent);

}  // namespace hdf

#endif  // HDFNET_SPECTRAL_H_
