// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef HDFNET_SRC_FFT_H_
#define HDFNET_SRC_FFT_H_

#include <complex>
#include <cstddef>
#include <span>

namespace hdf::internal {

// Real-input FFT of size n backed by FFTW plans. Plans are created once per
// size under a lock and executed with the thread-safe new-array interface.
class RealFft {
 public:
  explicit RealFft(std::size_t n);

  std::size_t size() const { return n_; }
  // in: n samples; out: n/2 + 1 bins. Unnormalized.
  void forward(std::span<const double> in,
               std::span<std::complex<double>> out) const;
  // in: n/2 + 1 bins; out: n samples. Scaled by 1/n.
  void inverse(std::span<const std::complex<double>> in,
               std::span<double> out) const;

 private:
  std::size_t n_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace hdf::internal

#endif  // HDFNET_SRC_FFT_H_
