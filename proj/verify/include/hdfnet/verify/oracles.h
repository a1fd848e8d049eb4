// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Brute-force reference implementations. These are deliberately written in
// the most literal form available (std::complex, explicit padding, gather
// instead of scatter) and share no code with the library kernels they check.

#ifndef HDFNET_VERIFY_ORACLES_H_
#define HDFNET_VERIFY_ORACLES_H_

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "hdfnet/erb.h"
#include "hdfnet/filtering.h"
#include "hdfnet/nn.h"
#include "hdfnet/spectral.h"
#include "hdfnet/tensor.h"

namespace hdf::oracle {

using Rng = std::mt19937_64;
using cplx = std::complex<double>;

double uniform(Rng& rng, double lo = -1.0, double hi = 1.0);
ComplexSpectrogram random_spectrogram(Rng& rng, std::size_t frames,
                                      std::size_t bins, double scale = 1.0);
FilterCoeffs random_coeffs(Rng& rng, std::size_t frames, std::size_t bins,
                           const FilterSpec& spec);
Tensor4 random_tensor(Rng& rng, std::size_t b, std::size_t c, std::size_t t,
                      std::size_t f);
Waveform random_waveform(Rng& rng, std::size_t n, double scale = 0.5);

// Largest absolute elementwise difference.
double max_abs_diff(const ComplexSpectrogram& a, const ComplexSpectrogram& b);
double max_abs_diff(const Tensor4& a, const Tensor4& b);
double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b);

// Direct O(N^2) DFT of one centered, reflect-padded, Hann-windowed frame.
std::vector<cplx> dft_frame(const Waveform& w, const StftParams& p,
                            std::size_t frame);
// Direct real inverse DFT of a half spectrum (1/N scaled).
std::vector<double> idft_real(const std::vector<cplx>& half, std::size_t n);

// S(t,f) = sum_i sum_j C(t,f,i,j) X(t-i, f-j) with zero outside the grid.
// Works for every mode: the geometry is read from spec.temporal_taps and
// spec.freq_halfwidth and the tap index is i * (2J + 1) + (j + J).
ComplexSpectrogram deep_filter(const ComplexSpectrogram& x,
                               const FilterCoeffs& c);

// Rewrites restricted-geometry coefficients as general DF coefficients with
// the given (I + 1, J) window, zero outside the original support.
FilterCoeffs embed_as_df(const FilterCoeffs& c, std::size_t temporal_taps,
                         std::size_t halfwidth);

// Literal convolution with an explicitly padded input copy.
Tensor4 conv2d(const Tensor4& x, const nn::ConvParams& p);
// Gather form of the transposed convolution.
Tensor4 deconv2d(const Tensor4& x, const nn::ConvParams& p);
Tensor4 batchnorm(const Tensor4& x, const nn::BatchNormParams& p);
// One GRU cell step with scalar loops.
std::vector<double> gru_step(const nn::GruCell& cell,
                             const std::vector<double>& x,
                             const std::vector<double>& h);

// Dense matrix application over the last axis.
Tensor4 erb_analyze(const Tensor4& x, const ErbFilterbank& fb);
Tensor4 erb_synthesize(const Tensor4& x, const ErbFilterbank& fb);

ComplexSpectrogram compress(const ComplexSpectrogram& s, double c);
double mag_loss(const ComplexSpectrogram& s, const ComplexSpectrogram& e,
                double c);
double comp_loss(const ComplexSpectrogram& s, const ComplexSpectrogram& e,
                 double c);

}  // namespace hdf::oracle

#endif  // HDFNET_VERIFY_ORACLES_H_
