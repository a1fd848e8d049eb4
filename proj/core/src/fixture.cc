// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "hdfnet/fixture.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>

#include "hdfnet/error.h"
#include "hdfnet/model.h"
#include "hdfnet/wav.h"

namespace hdf {
namespace {

constexpr std::uint32_t kSpecVersion = 1;

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::vector<std::uint8_t> encode_spectrogram(const ComplexSpectrogram& s) {
  std::vector<std::uint8_t> out{'H', 'D', 'F', 'S'};
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(kSpecVersion >> (8 * i)));
  put_u64(out, s.frames());
  put_u64(out, s.bins());
  for (double v : s.real()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  for (double v : s.imag()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

ComplexSpectrogram decode_spectrogram(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 24 || bytes[0] != 'H' || bytes[1] != 'D' ||
      bytes[2] != 'F' || bytes[3] != 'S') {
    throw FormatError("not a spectrogram dump (bad magic)");
  }
  const std::uint32_t version = bytes[4] | bytes[5] << 8 | bytes[6] << 16 |
                                static_cast<std::uint32_t>(bytes[7]) << 24;
  if (version != kSpecVersion) {
    throw FormatError("unsupported spectrogram dump version " +
                      std::to_string(version));
  }
  const std::uint64_t frames = get_u64(bytes.data() + 8);
  const std::uint64_t bins = get_u64(bytes.data() + 16);
  if (bins != 0 && frames > (bytes.size() / 16) / bins) {
    throw FormatError("spectrogram dump is truncated");
  }
  const std::uint64_t n = frames * bins;
  if (bytes.size() != 24 + 16 * n) {
    throw FormatError("spectrogram dump size does not match its header");
  }
  ComplexSpectrogram s(frames, bins);
  const std::uint8_t* p = bytes.data() + 24;
  for (std::uint64_t i = 0; i < n; ++i) s.real()[i] = std::bit_cast<double>(get_u64(p + 8 * i));
  p += 8 * n;
  for (std::uint64_t i = 0; i < n; ++i) s.imag()[i] = std::bit_cast<double>(get_u64(p + 8 * i));
  return s;
}

void write_spectrogram(const std::filesystem::path& path,
                       const ComplexSpectrogram& s) {
  const auto bytes = encode_spectrogram(s);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("failed writing " + path.string());
}

ComplexSpectrogram read_spectrogram(const std::filesystem::path& path) {
  try {
    return decode_spectrogram(slurp(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

ParityFixture load_fixture(const std::filesystem::path& dir) {
  ParityFixture fx;
  fx.run = RunConfig::load(dir / "run.cfg");
  fx.input = read_wav(dir / "input.wav");
  fx.weights = load_weights(dir / "weights.hdfw", fx.run.model);
  fx.expected = read_spectrogram(dir / "expected.hdfs");
  return fx;
}

void save_fixture(const std::filesystem::path& dir, const ParityFixture& fx) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.cfg", std::ios::trunc);
    if (!cfg) throw FormatError("cannot write " + (dir / "run.cfg").string());
    cfg << fx.run.to_string();
  }
  write_wav(dir / "input.wav", fx.input, WavEncoding::kFloat32);
  save_weights(fx.weights, dir / "weights.hdfw");
  write_spectrogram(dir / "expected.hdfs", fx.expected);
}

ParityReport replay_fixture(const ParityFixture& fx) {
  const ComplexSpectrogram x = stft(fx.input, fx.run.model.stft);
  const ComplexSpectrogram got = hdf_enhance(x, fx.weights, fx.run.model);
  HDF_CHECK_SHAPE(got.same_shape(fx.expected),
                  "replay produced " + std::to_string(got.frames()) + "x" +
                      std::to_string(got.bins()) + ", fixture expects " +
                      std::to_string(fx.expected.frames()) + "x" +
                      std::to_string(fx.expected.bins()));
  double max_dev = 0.0, max_ref = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    max_dev = std::max(max_dev, std::hypot(got.real()[i] - fx.expected.real()[i],
                                           got.imag()[i] - fx.expected.imag()[i]));
    max_ref = std::max(max_ref,
                       std::hypot(fx.expected.real()[i], fx.expected.imag()[i]));
  }
  ParityReport r;
  r.frames = got.frames();
  r.bins = got.bins();
  if (max_ref > 0.0) {
    r.max_relative_deviation = max_dev / max_ref;
  } else {
    r.max_relative_deviation = max_dev > 0.0 ? INFINITY : 0.0;
  }
  return r;
}

}  // namespace hdf
