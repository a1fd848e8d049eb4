// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "hdfnet/verify/oracles.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hdf::oracle {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

ComplexSpectrogram random_spectrogram(Rng& rng, std::size_t frames,
                                      std::size_t bins, double scale) {
  ComplexSpectrogram s(frames, bins);
  for (double& v : s.real()) v = scale * uniform(rng);
  for (double& v : s.imag()) v = scale * uniform(rng);
  return s;
}

FilterCoeffs random_coeffs(Rng& rng, std::size_t frames, std::size_t bins,
                           const FilterSpec& spec) {
  FilterCoeffs c(frames, bins, spec);
  for (double& v : c.real()) v = uniform(rng);
  for (double& v : c.imag()) v = uniform(rng);
  return c;
}

Tensor4 random_tensor(Rng& rng, std::size_t b, std::size_t c, std::size_t t,
                      std::size_t f) {
  Tensor4 x(b, c, t, f);
  for (double& v : x.data()) v = uniform(rng);
  return x;
}

Waveform random_waveform(Rng& rng, std::size_t n, double scale) {
  Waveform w;
  w.samples.resize(n);
  for (double& v : w.samples) v = scale * uniform(rng);
  return w;
}

double max_abs_diff(const ComplexSpectrogram& a, const ComplexSpectrogram& b) {
  if (!a.same_shape(b)) return INFINITY;
  return std::max(max_abs_diff(a.real(), b.real()),
                  max_abs_diff(a.imag(), b.imag()));
}

double max_abs_diff(const Tensor4& a, const Tensor4& b) {
  if (!a.same_shape(b)) return INFINITY;
  return max_abs_diff(a.data(), b.data());
}

double max_abs_diff(const std::vector<double>& a,
                    const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

std::vector<cplx> dft_frame(const Waveform& w, const StftParams& p,
                            std::size_t frame) {
  // Build the padded signal explicitly by mirroring around both end samples.
  const long n = static_cast<long>(w.samples.size());
  const long pad = static_cast<long>(p.fft_size / 2);
  std::vector<double> padded;
  for (long i = -pad; i < n + pad; ++i) {
    long k = i;
    while (k < 0 || k >= n) k = k < 0 ? -k : 2 * (n - 1) - k;
    padded.push_back(w.samples[static_cast<std::size_t>(k)]);
  }
  const std::size_t off = (p.fft_size - p.window_len) / 2;
  std::vector<double> buf(p.fft_size, 0.0);
  for (std::size_t i = 0; i < p.window_len; ++i) {
    const double hann =
        0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                              static_cast<double>(p.window_len)));
    buf[off + i] = hann * padded[frame * p.hop + off + i];
  }
  std::vector<cplx> out(p.fft_size / 2 + 1);
  const double nn = static_cast<double>(p.fft_size);
  for (std::size_t k = 0; k < out.size(); ++k) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < p.fft_size; ++i) {
      const double ang = -2.0 * std::numbers::pi *
                         static_cast<double>((k * i) % p.fft_size) / nn;
      acc += buf[i] * std::polar(1.0, ang);
    }
    out[k] = acc;
  }
  return out;
}

std::vector<double> idft_real(const std::vector<cplx>& half, std::size_t n) {
  // Rebuild the Hermitian full spectrum, then sum.
  std::vector<cplx> full(n);
  for (std::size_t k = 0; k < n; ++k) {
    full[k] = k < half.size() ? half[k] : std::conj(half[n - k]);
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double ang = 2.0 * std::numbers::pi *
                         static_cast<double>((k * i) % n) /
                         static_cast<double>(n);
      acc += full[k] * std::polar(1.0, ang);
    }
    out[i] = acc.real() / static_cast<double>(n);
  }
  return out;
}

ComplexSpectrogram deep_filter(const ComplexSpectrogram& x,
                               const FilterCoeffs& c) {
  const long frames = static_cast<long>(x.frames());
  const long bins = static_cast<long>(x.bins());
  const long taps_t = static_cast<long>(c.spec().temporal_taps);
  const long big_j = static_cast<long>(c.spec().freq_halfwidth);
  const long width = 2 * big_j + 1;
  ComplexSpectrogram out(x.frames(), x.bins());
  for (long t = 0; t < frames; ++t) {
    for (long f = 0; f < bins; ++f) {
      cplx acc = 0.0;
      for (long i = 0; i < taps_t; ++i) {
        for (long j = -big_j; j <= big_j; ++j) {
          const long st = t - i, sf = f - j;
          if (st < 0 || sf < 0 || sf >= bins) continue;
          const std::size_t k = static_cast<std::size_t>(i * width + j + big_j);
          const cplx coef(c.re(t, f, k), c.im(t, f, k));
          acc += coef * x.at(st, sf);
        }
      }
      out.set(t, f, acc);
    }
  }
  return out;
}

FilterCoeffs embed_as_df(const FilterCoeffs& c, std::size_t temporal_taps,
                         std::size_t halfwidth) {
  const std::size_t ti = c.spec().temporal_taps;
  const std::size_t sj = c.spec().freq_halfwidth;
  FilterCoeffs out(c.frames(), c.bins(), FilterSpec::df(temporal_taps, halfwidth));
  const std::size_t src_w = 2 * sj + 1, dst_w = 2 * halfwidth + 1;
  for (std::size_t t = 0; t < c.frames(); ++t) {
    for (std::size_t f = 0; f < c.bins(); ++f) {
      for (std::size_t i = 0; i < ti; ++i) {
        for (std::size_t jj = 0; jj < src_w; ++jj) {
          const std::size_t src = i * src_w + jj;
          const std::size_t dst = i * dst_w + (jj + halfwidth - sj);
          out.re(t, f, dst) = c.re(t, f, src);
          out.im(t, f, dst) = c.im(t, f, src);
        }
      }
    }
  }
  return out;
}

Tensor4 conv2d(const Tensor4& x, const nn::ConvParams& p) {
  const std::size_t pt = p.kernel_t - 1, pf = p.pad_f;
  // Explicit zero-padded copy: kernel_t - 1 frames before, none after.
  Tensor4 xp(x.batch(), x.channels(), x.time() + pt, x.freq() + 2 * pf);
  for (std::size_t b = 0; b < x.batch(); ++b)
    for (std::size_t c = 0; c < x.channels(); ++c)
      for (std::size_t t = 0; t < x.time(); ++t)
        for (std::size_t f = 0; f < x.freq(); ++f)
          xp(b, c, t + pt, f + pf) = x(b, c, t, f);

  const std::size_t t_out = (xp.time() - p.kernel_t) / p.stride_t + 1;
  const std::size_t f_out = (xp.freq() - p.kernel_f) / p.stride_f + 1;
  const std::size_t in_g = p.in_ch / p.groups, out_g = p.out_ch / p.groups;
  Tensor4 y(x.batch(), p.out_ch, t_out, f_out);
  for (std::size_t b = 0; b < x.batch(); ++b)
    for (std::size_t o = 0; o < p.out_ch; ++o)
      for (std::size_t t = 0; t < t_out; ++t)
        for (std::size_t f = 0; f < f_out; ++f) {
          double acc = p.bias.empty() ? 0.0 : p.bias[o];
          for (std::size_t ic = 0; ic < in_g; ++ic)
            for (std::size_t a = 0; a < p.kernel_t; ++a)
              for (std::size_t k = 0; k < p.kernel_f; ++k) {
                const std::size_t widx =
                    ((o * in_g + ic) * p.kernel_t + a) * p.kernel_f + k;
                acc += p.weight[widx] *
                       xp(b, (o / out_g) * in_g + ic, t * p.stride_t + a,
                          f * p.stride_f + k);
              }
          y(b, o, t, f) = acc;
        }
  return y;
}

Tensor4 deconv2d(const Tensor4& x, const nn::ConvParams& p) {
  const long t_in = static_cast<long>(x.time()), f_in = static_cast<long>(x.freq());
  const long st = static_cast<long>(p.stride_t), sf = static_cast<long>(p.stride_f);
  const long t_out = t_in == 0 ? 0 : (t_in - 1) * st + 1;
  const long f_out = (f_in - 1) * sf + static_cast<long>(p.kernel_f) -
                     2 * static_cast<long>(p.pad_f);
  const std::size_t in_g = p.in_ch / p.groups, out_g = p.out_ch / p.groups;
  Tensor4 y(x.batch(), p.out_ch, static_cast<std::size_t>(t_out),
            static_cast<std::size_t>(f_out));
  for (std::size_t b = 0; b < x.batch(); ++b)
    for (std::size_t o = 0; o < p.out_ch; ++o)
      for (long t = 0; t < t_out; ++t)
        for (long f = 0; f < f_out; ++f) {
          double acc = p.bias.empty() ? 0.0 : p.bias[o];
          const std::size_t g = o / out_g, oc = o % out_g;
          for (std::size_t ic = 0; ic < in_g; ++ic) {
            const std::size_t c = g * in_g + ic;
            for (long a = 0; a < static_cast<long>(p.kernel_t); ++a) {
              // Output t gathers input s with s * st + a == t.
              const long num_t = t - a;
              if (num_t < 0 || num_t % st != 0 || num_t / st >= t_in) continue;
              for (long k = 0; k < static_cast<long>(p.kernel_f); ++k) {
                const long num_f = f + static_cast<long>(p.pad_f) - k;
                if (num_f < 0 || num_f % sf != 0 || num_f / sf >= f_in) continue;
                const std::size_t widx =
                    ((c * out_g + oc) * p.kernel_t + static_cast<std::size_t>(a)) *
                        p.kernel_f + static_cast<std::size_t>(k);
                acc += p.weight[widx] *
                       x(b, c, static_cast<std::size_t>(num_t / st),
                         static_cast<std::size_t>(num_f / sf));
              }
            }
          }
          y(b, o, static_cast<std::size_t>(t), static_cast<std::size_t>(f)) = acc;
        }
  return y;
}

Tensor4 batchnorm(const Tensor4& x, const nn::BatchNormParams& p) {
  Tensor4 y = x;
  for (std::size_t b = 0; b < x.batch(); ++b)
    for (std::size_t c = 0; c < x.channels(); ++c)
      for (std::size_t t = 0; t < x.time(); ++t)
        for (std::size_t f = 0; f < x.freq(); ++f)
          y(b, c, t, f) = (x(b, c, t, f) - p.mean[c]) /
                              std::sqrt(p.var[c] + p.eps) * p.scale[c] +
                          p.shift[c];
  return y;
}

std::vector<double> gru_step(const nn::GruCell& cell,
                             const std::vector<double>& x,
                             const std::vector<double>& h) {
  const std::size_t hs = cell.hidden_size, is = cell.input_size;
  auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  auto gate = [&](std::size_t row, const std::vector<double>& w,
                  const std::vector<double>& v, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += w[row * n + k] * v[k];
    return s;
  };
  std::vector<double> out(hs);
  for (std::size_t k = 0; k < hs; ++k) {
    const double r = sig(gate(k, cell.w_ih, x, is) + cell.b_ih[k] +
                         gate(k, cell.w_hh, h, hs) + cell.b_hh[k]);
    const double z = sig(gate(hs + k, cell.w_ih, x, is) + cell.b_ih[hs + k] +
                         gate(hs + k, cell.w_hh, h, hs) + cell.b_hh[hs + k]);
    const double n = std::tanh(gate(2 * hs + k, cell.w_ih, x, is) +
                               cell.b_ih[2 * hs + k] +
                               r * (gate(2 * hs + k, cell.w_hh, h, hs) +
                                    cell.b_hh[2 * hs + k]));
    out[k] = (1.0 - z) * n + z * h[k];
  }
  return out;
}

Tensor4 erb_analyze(const Tensor4& x, const ErbFilterbank& fb) {
  Tensor4 y(x.batch(), x.channels(), x.time(), fb.bands());
  for (std::size_t b = 0; b < x.batch(); ++b)
    for (std::size_t c = 0; c < x.channels(); ++c)
      for (std::size_t t = 0; t < x.time(); ++t)
        for (std::size_t band = 0; band < fb.bands(); ++band) {
          double acc = 0.0;
          for (std::size_t k = 0; k < fb.linear_bins(); ++k) {
            acc += fb.analysis(band, k) * x(b, c, t, k);
          }
          y(b, c, t, band) = acc;
        }
  return y;
}

Tensor4 erb_synthesize(const Tensor4& x, const ErbFilterbank& fb) {
  Tensor4 y(x.batch(), x.channels(), x.time(), fb.linear_bins());
  for (std::size_t b = 0; b < x.batch(); ++b)
    for (std::size_t c = 0; c < x.channels(); ++c)
      for (std::size_t t = 0; t < x.time(); ++t)
        for (std::size_t k = 0; k < fb.linear_bins(); ++k) {
          double acc = 0.0;
          for (std::size_t band = 0; band < fb.bands(); ++band) {
            acc += fb.synthesis(k, band) * x(b, c, t, band);
          }
          y(b, c, t, k) = acc;
        }
  return y;
}

ComplexSpectrogram compress(const ComplexSpectrogram& s, double c) {
  ComplexSpectrogram out(s.frames(), s.bins());
  for (std::size_t t = 0; t < s.frames(); ++t)
    for (std::size_t f = 0; f < s.bins(); ++f) {
      const cplx v = s.at(t, f);
      const double mag = std::abs(v);
      out.set(t, f, mag <= 1e-12 ? cplx(0.0) : std::polar(std::pow(mag, c), std::arg(v)));
    }
  return out;
}

double mag_loss(const ComplexSpectrogram& s, const ComplexSpectrogram& e,
                double c) {
  double acc = 0.0;
  for (std::size_t t = 0; t < s.frames(); ++t)
    for (std::size_t f = 0; f < s.bins(); ++f) {
      const double d = std::pow(std::abs(s.at(t, f)), c) -
                       std::pow(std::abs(e.at(t, f)), c);
      acc += d * d;
    }
  return acc / static_cast<double>(s.frames() * s.bins());
}

double comp_loss(const ComplexSpectrogram& s, const ComplexSpectrogram& e,
                 double c) {
  const ComplexSpectrogram sc = oracle::compress(s, c);
  const ComplexSpectrogram ec = oracle::compress(e, c);
  double re = 0.0, im = 0.0;
  for (std::size_t t = 0; t < s.frames(); ++t)
    for (std::size_t f = 0; f < s.bins(); ++f) {
      const cplx d = sc.at(t, f) - ec.at(t, f);
      re += d.real() * d.real();
      im += d.imag() * d.imag();
    }
  const double n = static_cast<double>(s.frames() * s.bins());
  return re / n + im / n;
}

}  // namespace hdf::oracle
