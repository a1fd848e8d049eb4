// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Power-law compressed spectral losses and a waveform-level quality metric.
// All losses average over every TF bin of every spectrogram passed in, so a
// batch may be given in any order.

#ifndef HDFNET_LOSS_H_
#define HDFNET_LOSS_H_

#include <span>

#include "hdfnet/spectral.h"

namespace hdf {

struct LossConfig {
  double c = 0.3;
  double alpha = 0.5;
  double beta = 0.5;

  void validate() const;
};

// MSE(|S|^c, |S~|^c)
double mag_loss(const ComplexSpectrogram& target,
                const ComplexSpectrogram& estimate, double c);
double mag_loss(std::span<const ComplexSpectrogram> targets,
                std::span<const ComplexSpectrogram> estimates, double c);

// MSE(Re S^c, Re S~^c) + MSE(Im S^c, Im S~^c), with S^c = compress(S, c).
double comp_loss(const ComplexSpectrogram& target,
                 const ComplexSpectrogram& estimate, double c);
double comp_loss(std::span<const ComplexSpectrogram> targets,
                 std::span<const ComplexSpectrogram> estimates, double c);

// alpha * mag_loss + beta * comp_loss
double total_loss(const ComplexSpectrogram& target,
                  const ComplexSpectrogram& estimate, const LossConfig& cfg);
double total_loss(std::span<const ComplexSpectrogram> targets,
                  std::span<const ComplexSpectrogram> estimates,
                  const LossConfig& cfg);

inline constexpr double kSiSdrCapDb = 100.0;

// Scale-invariant SDR in dB over zero-mean copies of both signals, clamped to
// [-100, 100]. Lengths must match and the reference must not be silent.
double si_sdr(const Waveform& reference, const Waveform& estimate);

}  // namespace hdf

#endif  // HDFNET_LOSS_H_
