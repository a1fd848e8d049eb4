// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "hdfnet/wav.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "hdfnet/error.h"

namespace hdf {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 |
         static_cast<std::uint32_t>(p[3]) << 24;
}
std::uint16_t le16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

bool tag_is(const std::uint8_t* p, const char* tag) {
  return std::equal(p, p + 4, reinterpret_cast<const std::uint8_t*>(tag));
}

}  // namespace

Waveform decode_wav(const std::vector<std::uint8_t>& bytes, WavInfo* info) {
  if (bytes.size() < 12 || !tag_is(bytes.data(), "RIFF") ||
      !tag_is(bytes.data() + 8, "WAVE")) {
    throw FormatError("not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::size_t size = le32(chunk + 4);
    const std::size_t avail = bytes.size() - pos - 8;
    if (tag_is(chunk, "fmt ")) {
      if (size < 16 || size > avail) throw FormatError("malformed fmt chunk");
      format = le16(chunk + 8);
      channels = le16(chunk + 10);
      rate = le32(chunk + 12);
      bits = le16(chunk + 22);
      if (format == kFormatExtensible) {
        if (size < 40) throw FormatError("malformed extensible fmt chunk");
        format = le16(chunk + 8 + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (tag_is(chunk, "data")) {
      // Tolerate a data size that overruns the file (streamed writers).
      data = chunk + 8;
      data_size = std::min(size, avail);
      break;
    }
    pos += 8 + size + (size & 1);
  }
  if (!have_fmt) throw FormatError("missing fmt chunk");
  if (data == nullptr) throw FormatError("missing data chunk");

  if (rate != static_cast<std::uint32_t>(kSampleRate)) {
    throw FormatError("unsupported sample rate " + std::to_string(rate) +
                      " Hz (need 16000)");
  }
  if (channels != 1) {
    throw FormatError("unsupported channel count " + std::to_string(channels) +
                      " (need mono)");
  }
  WavEncoding enc;
  if (format == kFormatPcm && bits == 16) {
    enc = WavEncoding::kPcm16;
  } else if (format == kFormatFloat && bits == 32) {
    enc = WavEncoding::kFloat32;
  } else {
    throw FormatError("unsupported encoding (format " + std::to_string(format) +
                      ", " + std::to_string(bits) +
                      " bits); need 16-bit PCM or 32-bit float");
  }

  Waveform w;
  w.sample_rate = kSampleRate;
  const std::size_t width = enc == WavEncoding::kPcm16 ? 2 : 4;
  const std::size_t n = data_size / width;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* p = data + i * width;
    if (enc == WavEncoding::kPcm16) {
      w.samples[i] = static_cast<std::int16_t>(le16(p)) / 32768.0;
    } else {
      const float v = std::bit_cast<float>(le32(p));
      if (!std::isfinite(v)) throw FormatError("non-finite sample in WAV data");
      w.samples[i] = v;
    }
  }
  if (info) *info = {static_cast<int>(rate), channels, enc, n};
  return w;
}

Waveform read_wav(const std::filesystem::path& path, WavInfo* info) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_wav(bytes, info);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_wav(const Waveform& wave,
                                     WavEncoding encoding) {
  HDF_CHECK_ARG(wave.sample_rate == kSampleRate,
                "WAV output must be 16000 Hz");
  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t width = pcm ? 2 : 4;
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(wave.samples.size() * width);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, pcm ? kFormatPcm : kFormatFloat);
  put16(out, 1);
  put32(out, kSampleRate);
  put32(out, kSampleRate * width);
  put16(out, width);
  put16(out, static_cast<std::uint16_t>(8 * width));
  put_tag(out, "data");
  put32(out, data_bytes);
  for (double s : wave.samples) {
    if (pcm) {
      const double c = std::clamp(s, -1.0, 32767.0 / 32768.0);
      put16(out, static_cast<std::uint16_t>(
                     static_cast<std::int16_t>(std::lround(c * 32768.0))));
    } else {
      put32(out, std::bit_cast<std::uint32_t>(static_cast<float>(s)));
    }
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const Waveform& wave,
               WavEncoding encoding) {
  const std::vector<std::uint8_t> bytes = encode_wav(wave, encoding);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("failed writing " + path.string());
}

}  // namespace hdf
