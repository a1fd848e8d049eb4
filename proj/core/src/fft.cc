// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fft.h"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "hdfnet/error.h"

namespace hdf::internal {
namespace {

struct Plans {
  fftw_plan forward;
  fftw_plan inverse;
};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Plans live for the whole process; FFTW keeps them valid across threads.
Plans plans_for(std::size_t n) {
  static std::map<std::size_t, Plans> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const int len = static_cast<int>(n);
  std::vector<double> real(n);
  std::vector<fftw_complex> cplx(n / 2 + 1);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  Plans p{
      fftw_plan_dft_r2c_1d(len, real.data(), cplx.data(), flags),
      // c2r destroys its input; inverse() copies into a scratch buffer.
      fftw_plan_dft_c2r_1d(len, cplx.data(), real.data(), flags),
  };
  if (p.forward == nullptr || p.inverse == nullptr) {
    throw Error("FFTW failed to create a plan of size " + std::to_string(n));
  }
  cache.emplace(n, p);
  return p;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  HDF_CHECK_ARG(n >= 2, "FFT size must be at least 2");
  Plans p = plans_for(n);
  forward_plan_ = p.forward;
  inverse_plan_ = p.inverse;
}

void RealFft::forward(std::span<const double> in,
                      std::span<std::complex<double>> out) const {
  HDF_CHECK_SHAPE(in.size() == n_ && out.size() == n_ / 2 + 1,
                  "RealFft::forward buffer sizes");
  // FFTW may not modify the input of an r2c transform without
  // FFTW_DESTROY_INPUT, but its signature is non-const.
  std::vector<double> scratch(in.begin(), in.end());
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), scratch.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) const {
  HDF_CHECK_SHAPE(in.size() == n_ / 2 + 1 && out.size() == n_,
                  "RealFft::inverse buffer sizes");
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
  const double scale = 1.0 / static_cast<double>(n_);
  for (double& v : out) v *= scale;
}

}  // namespace hdf::internal
