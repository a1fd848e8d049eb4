// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "hdfnet/loss.h"

#include <algorithm>
#include <cmath>

#include "hdfnet/error.h"

namespace hdf {
namespace {

struct SumCount {
  double sum = 0.0;
  std::size_t count = 0;
};

void check_pair(const ComplexSpectrogram& a, const ComplexSpectrogram& b) {
  HDF_CHECK_SHAPE(a.same_shape(b),
                  "loss operands differ in shape: " +
                      std::to_string(a.frames()) + "x" +
                      std::to_string(a.bins()) + " vs " +
                      std::to_string(b.frames()) + "x" +
                      std::to_string(b.bins()));
}

void check_exponent(double c) {
  HDF_CHECK_ARG(c > 0.0 && c <= 1.0, "compression exponent must be in (0, 1]");
}

void mag_terms(const ComplexSpectrogram& s, const ComplexSpectrogram& e,
               double c, SumCount& acc) {
  check_pair(s, e);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double a = std::pow(std::hypot(s.real()[i], s.imag()[i]), c);
    const double b = std::pow(std::hypot(e.real()[i], e.imag()[i]), c);
    acc.sum += (a - b) * (a - b);
  }
  acc.count += s.size();
}

// Real-part and imaginary-part squared errors are summed separately so each
// MSE is over the same bin count.
void comp_terms(const ComplexSpectrogram& s, const ComplexSpectrogram& e,
                double c, SumCount& re, SumCount& im) {
  check_pair(s, e);
  const ComplexSpectrogram sc = compress(s, c), ec = compress(e, c);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double dr = sc.real()[i] - ec.real()[i];
    const double di = sc.imag()[i] - ec.imag()[i];
    re.sum += dr * dr;
    im.sum += di * di;
  }
  re.count += s.size();
  im.count += s.size();
}

double mean(const SumCount& a) {
  HDF_CHECK_ARG(a.count > 0, "loss over an empty set of bins");
  return a.sum / static_cast<double>(a.count);
}

void check_batch(std::span<const ComplexSpectrogram> t,
                 std::span<const ComplexSpectrogram> e) {
  HDF_CHECK_SHAPE(t.size() == e.size(),
                  "loss batches differ in length: " + std::to_string(t.size()) +
                      " vs " + std::to_string(e.size()));
}

}  // namespace

void LossConfig::validate() const {
  check_exponent(c);
  HDF_CHECK_ARG(alpha >= 0.0 && beta >= 0.0, "loss weights must be >= 0");
  HDF_CHECK_ARG(alpha + beta > 0.0, "loss weights must not both be zero");
}

double mag_loss(const ComplexSpectrogram& target,
                const ComplexSpectrogram& estimate, double c) {
  return mag_loss(std::span(&target, 1), std::span(&estimate, 1), c);
}

double mag_loss(std::span<const ComplexSpectrogram> targets,
                std::span<const ComplexSpectrogram> estimates, double c) {
  check_exponent(c);
  check_batch(targets, estimates);
  SumCount acc;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    mag_terms(targets[k], estimates[k], c, acc);
  }
  return mean(acc);
}

double comp_loss(const ComplexSpectrogram& target,
                 const ComplexSpectrogram& estimate, double c) {
  return comp_loss(std::span(&target, 1), std::span(&estimate, 1), c);
}

double comp_loss(std::span<const ComplexSpectrogram> targets,
                 std::span<const ComplexSpectrogram> estimates, double c) {
  check_exponent(c);
  check_batch(targets, estimates);
  SumCount re, im;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    comp_terms(targets[k], estimates[k], c, re, im);
  }
  return mean(re) + mean(im);
}

double total_loss(const ComplexSpectrogram& target,
                  const ComplexSpectrogram& estimate, const LossConfig& cfg) {
  return total_loss(std::span(&target, 1), std::span(&estimate, 1), cfg);
}

double total_loss(std::span<const ComplexSpectrogram> targets,
                  std::span<const ComplexSpectrogram> estimates,
                  const LossConfig& cfg) {
  cfg.validate();
  return cfg.alpha * mag_loss(targets, estimates, cfg.c) +
         cfg.beta * comp_loss(targets, estimates, cfg.c);
}

double si_sdr(const Waveform& reference, const Waveform& estimate) {
  HDF_CHECK_SHAPE(reference.samples.size() == estimate.samples.size(),
                  "si_sdr: reference has " +
                      std::to_string(reference.samples.size()) +
                      " samples, estimate " +
                      std::to_string(estimate.samples.size()));
  const std::size_t n = reference.samples.size();
  HDF_CHECK_ARG(n > 0, "si_sdr: empty signals");
  double mr = 0.0, me = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mr += reference.samples[i];
    me += estimate.samples[i];
  }
  mr /= static_cast<double>(n);
  me /= static_cast<double>(n);

  double rr = 0.0, er = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = reference.samples[i] - mr;
    rr += r * r;
    er += (estimate.samples[i] - me) * r;
  }
  HDF_CHECK_ARG(rr > 0.0, "si_sdr: reference is silent");
  const double scale = er / rr;
  double target = 0.0, noise = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = scale * (reference.samples[i] - mr);
    const double d = (estimate.samples[i] - me) - t;
    target += t * t;
    noise += d * d;
  }
  if (noise <= 0.0) return kSiSdrCapDb;
  if (target <= 0.0) return -kSiSdrCapDb;
  const double db = 10.0 * std::log10(target / noise);
  return std::clamp(db, -kSiSdrCapDb, kSiSdrCapDb);
}

}  // namespace hdf
