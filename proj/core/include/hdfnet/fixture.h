// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Spectrogram dumps and forward-pass parity fixtures.
//
// A spectrogram dump (".hdfs") is little-endian:
//
//   char[4]  magic "HDFS"
//   u32      version (1)
//   u64      frames T
//   u64      bins F
//   f64      T * F real parts, frame-major
//   f64      T * F imaginary parts, frame-major
//
// A parity fixture is a directory holding
//
//   input.wav       16 kHz mono noisy input
//   weights.hdfw    weight bundle
//   run.cfg         RunConfig document describing the model
//   expected.hdfs   enhanced spectrogram produced by the exporting side
//
// The engine replays the fixture with stft -> hdf_enhance and compares the
// result against expected.hdfs.

#ifndef HDFNET_FIXTURE_H_
#define HDFNET_FIXTURE_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "hdfnet/run_config.h"
#include "hdfnet/spectral.h"
#include "hdfnet/weights.h"

namespace hdf {

std::vector<std::uint8_t> encode_spectrogram(const ComplexSpectrogram& s);
ComplexSpectrogram decode_spectrogram(const std::vector<std::uint8_t>& bytes);
void write_spectrogram(const std::filesystem::path& path,
                       const ComplexSpectrogram& s);
ComplexSpectrogram read_spectrogram(const std::filesystem::path& path);

struct ParityFixture {
  RunConfig run;
  Waveform input;
  WeightBundle weights;
  ComplexSpectrogram expected;
};

ParityFixture load_fixture(const std::filesystem::path& dir);
// Writes all four files; `expected` is taken from the fixture as given.
void save_fixture(const std::filesystem::path& dir, const ParityFixture& fx);

struct ParityReport {
  std::size_t frames = 0;
  std::size_t bins = 0;
  // max |engine - expected| / max |expected| over all bins.
  double max_relative_deviation = 0.0;
};

// Throws on shape mismatch between the replay and the expected dump.
ParityReport replay_fixture(const ParityFixture& fx);

}  // namespace hdf

#endif  // HDFNET_FIXTURE_H_
