// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// RIFF/WAVE reading and writing for 16 kHz mono audio. Reads 16-bit PCM
// (scaled by 1/32768) and 32-bit IEEE float; writes either.

#ifndef HDFNET_WAV_H_
#define HDFNET_WAV_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "hdfnet/spectral.h"

namespace hdf {

enum class WavEncoding { kPcm16, kFloat32 };

struct WavInfo {
  int sample_rate = 0;
  int channels = 0;
  WavEncoding encoding = WavEncoding::kFloat32;
  std::size_t frames = 0;
};

// Throws FormatError naming the offending property (sample rate, channel
// count, encoding) when the file is not 16 kHz mono PCM16/float32.
Waveform read_wav(const std::filesystem::path& path,
                  WavInfo* info = nullptr);
Waveform decode_wav(const std::vector<std::uint8_t>& bytes,
                    WavInfo* info = nullptr);

// PCM16 output clips to [-1, 32767/32768] and rounds to nearest.
void write_wav(const std::filesystem::path& path, const Waveform& wave,
               WavEncoding encoding = WavEncoding::kFloat32);
std::vector<std::uint8_t> encode_wav(const Waveform& wave,
                                     WavEncoding encoding);

}  // namespace hdf

#endif  // HDFNET_WAV_H_
