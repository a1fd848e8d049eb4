// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "hdfnet/error.h"
#include "hdfnet/fixture.h"
#include "hdfnet/layout.h"
#include "hdfnet/model.h"
#include "hdfnet/run_config.h"
#include "hdfnet/wav.h"
#include "hdfnet/weights.h"
#include "hdfnet/verify/oracles.h"

using namespace hdf;
namespace oc = hdf::oracle;
namespace fs = std::filesystem;

namespace {

using Bytes = std::vector<std::uint8_t>;

void put32(Bytes& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put16(Bytes& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}

Bytes wav_bytes(std::uint16_t format, std::uint16_t channels, std::uint32_t rate,
                std::uint16_t bits, const Bytes& data) {
  Bytes b = {'R', 'I', 'F', 'F'};
  put32(b, static_cast<std::uint32_t>(36 + data.size()));
  for (char c : std::string("WAVEfmt ")) b.push_back(static_cast<std::uint8_t>(c));
  put32(b, 16);
  put16(b, format);
  put16(b, channels);
  put32(b, rate);
  put32(b, rate * channels * bits / 8);
  put16(b, static_cast<std::uint16_t>(channels * bits / 8));
  put16(b, bits);
  for (char c : std::string("data")) b.push_back(static_cast<std::uint8_t>(c));
  put32(b, static_cast<std::uint32_t>(data.size()));
  b.insert(b.end(), data.begin(), data.end());
  return b;
}

std::string error_of(const Bytes& bytes) {
  try {
    decode_wav(bytes);
  } catch (const FormatError& e) {
    return e.what();
  }
  return "";
}

fs::path temp_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("hdfnet_io_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string fixture_root() { return HDFNET_TEST_DATA_DIR "/fixtures"; }

std::vector<fs::path> fixture_dirs() {
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(fixture_root())) {
    if (e.is_directory()) dirs.push_back(e.path());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

}  // namespace

TEST_CASE("float32 WAV round trip is bit-exact") {
  oc::Rng rng(91);
  Waveform w = oc::random_waveform(rng, 1234);
  for (double& v : w.samples) v = static_cast<float>(v);
  const Waveform back = decode_wav(encode_wav(w, WavEncoding::kFloat32));
  CHECK(back.samples == w.samples);
  CHECK(back.sample_rate == 16000);

  const fs::path p = temp_dir("wav") / "a.wav";
  write_wav(p, w);
  WavInfo info;
  CHECK(read_wav(p, &info).samples == w.samples);
  CHECK(info.channels == 1);
  CHECK(info.encoding == WavEncoding::kFloat32);
  CHECK(info.frames == 1234);
}

TEST_CASE("PCM16 full scale reads as 32767/32768") {
  Bytes data;
  put16(data, 0x7fff);
  put16(data, 0x8000);
  put16(data, 0x0000);
  const Waveform w = decode_wav(wav_bytes(1, 1, 16000, 16, data));
  REQUIRE(w.size() == 3);
  CHECK(w.samples[0] == 32767.0 / 32768.0);
  CHECK(w.samples[1] == -1.0);
  CHECK(w.samples[2] == 0.0);
}

TEST_CASE("PCM16 writing clips and rounds") {
  Waveform w;
  w.samples = {2.0, -2.0, 0.5, 1.0 / 65536.0 + 1e-9};
  const Waveform back = decode_wav(encode_wav(w, WavEncoding::kPcm16));
  CHECK(back.samples[0] == 32767.0 / 32768.0);
  CHECK(back.samples[1] == -1.0);
  CHECK(back.samples[2] == 0.5);
  CHECK(back.samples[3] == 1.0 / 32768.0);
  CHECK(encode_wav(w, WavEncoding::kPcm16).size() == 44 + 8);
}

TEST_CASE("unsupported WAV properties are named in the error") {
  const Bytes four(4, 0);
  CHECK(error_of(wav_bytes(1, 2, 16000, 16, four)).find("channel count 2") != std::string::npos);
  CHECK(error_of(wav_bytes(1, 1, 44100, 16, four)).find("sample rate 44100") != std::string::npos);
  CHECK(error_of(wav_bytes(1, 1, 16000, 24, Bytes(6, 0))).find("encoding") != std::string::npos);
  CHECK(error_of(Bytes{'R', 'I', 'F', 'X'}).find("RIFF") != std::string::npos);
  Bytes truncated = wav_bytes(1, 1, 16000, 16, four);
  truncated.resize(30);
  CHECK_FALSE(error_of(truncated).empty());
  try {
    read_wav("/nonexistent/x.wav");
    FAIL("expected an error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/x.wav") != std::string::npos);
  }
}

TEST_CASE("weight bundles are written byte for byte as documented") {
  WeightBundle b(0x0102030405060708ull);
  b.put("a/b", NamedTensor{{2}, {1.0, -2.0}});
  const Bytes want = {
      'H', 'D', 'F', 'W', 1, 0, 0, 0,              // magic, version
      8, 7, 6, 5, 4, 3, 2, 1,                      // digest
      1, 0, 0, 0,                                  // tensor count
      3, 0, 0, 0, 'a', '/', 'b',                   // name
      0,                                           // float32
      1, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0,          // rank, dims
      0, 0, 0, 0, 0, 0, 0, 0,                      // payload offset
      0x00, 0x00, 0x80, 0x3f, 0x00, 0x00, 0x00, 0xc0,  // 1.0f, -2.0f
  };
  CHECK(encode_weights(b) == want);
  CHECK(decode_weights(want) == b);
}

TEST_CASE("random bundles round trip bit-exactly through a file") {
  const ModelConfig cfg;
  const WeightBundle w = init_weights(cfg, InitKind::kRandom, 17);
  const fs::path p = temp_dir("weights") / "w.hdfw";
  save_weights(w, p);
  const WeightBundle back = load_weights(p, cfg);
  CHECK(back == w);
  CHECK(back.config_digest() == cfg.digest());
  std::size_t trainable = 0;
  for (const TensorSpec& s : expected_layout(cfg)) {
    if (s.trainable) trainable += back.get(s.name).numel();
  }
  CHECK(trainable == 166468);
}

TEST_CASE("init is reproducible and seed-dependent") {
  const ModelConfig cfg;
  CHECK(init_weights(cfg, InitKind::kRandom, 5) == init_weights(cfg, InitKind::kRandom, 5));
  CHECK_FALSE(init_weights(cfg, InitKind::kRandom, 5) == init_weights(cfg, InitKind::kRandom, 6));
  const WeightBundle z = init_weights(cfg, InitKind::kZero);
  CHECK(z.get("stage1/encoder/conv0/bn/var").values == std::vector<double>(16, 1.0));
  CHECK(z.get("stage1/encoder/conv0/bn/scale").values == std::vector<double>(16, 1.0));
  CHECK(z.get("stage1/encoder/conv0/conv/bias").values == std::vector<double>(16, 0.0));
}

TEST_CASE("malformed bundles are rejected with specific errors") {
  WeightBundle b(7);
  b.put("x", NamedTensor{{3}, {1.0, 2.0, 3.0}});
  const Bytes good = encode_weights(b);

  Bytes bad = good;
  bad[0] = 'X';
  CHECK_THROWS_WITH_AS(decode_weights(bad), doctest::Contains("magic"), FormatError);
  bad = good;
  bad[4] = 2;
  CHECK_THROWS_WITH_AS(decode_weights(bad), doctest::Contains("version"), FormatError);
  bad = good;
  bad.resize(bad.size() - 1);
  CHECK_THROWS_AS(decode_weights(bad), FormatError);
  bad = good;
  bad[25] = 9;  // dtype byte after the one-character name
  CHECK_THROWS_WITH_AS(decode_weights(bad), doctest::Contains("dtype"), FormatError);
  bad = Bytes(good.begin(), good.begin() + 10);
  CHECK_THROWS_WITH_AS(decode_weights(bad), doctest::Contains("truncated"), FormatError);
  CHECK_THROWS_AS(read_weights("/nonexistent/w.hdfw"), FormatError);
}

TEST_CASE("a corrupted digest is rejected on load") {
  const ModelConfig cfg;
  WeightBundle w = init_weights(cfg, InitKind::kZero);
  w.set_config_digest(cfg.digest() ^ 1);
  const fs::path p = temp_dir("digest") / "w.hdfw";
  save_weights(w, p);
  CHECK_THROWS_WITH_AS(load_weights(p, cfg), doctest::Contains("digest"), DigestMismatchError);
}

TEST_CASE("run configuration documents") {
  SUBCASE("defaults match the published model") {
    const RunConfig r = RunConfig::parse("");
    CHECK(r.model == ModelConfig::defaults());
    CHECK(r.loss.c == 0.3);
    CHECK(r.loss.alpha == 0.5);
  }
  SUBCASE("keys, comments and whitespace") {
    const RunConfig r = RunConfig::parse(
        "# comment\n"
        "  stage2_mode = df   # trailing comment\n"
        "stage1_mode=none\n"
        "\n"
        "loss_alpha = 0.25\n"
        "weights = w.hdfw\n");
    CHECK(r.model == ModelConfig::single_stage_df());
    CHECK(r.loss.alpha == 0.25);
    CHECK(r.weights_path == "w.hdfw");
  }
  SUBCASE("unknown and duplicate keys name their line") {
    CHECK_THROWS_WITH_AS(RunConfig::parse("hop = 256\nfoo = 1\n"),
                         doctest::Contains("line 2: unknown key 'foo'"), FormatError);
    CHECK_THROWS_WITH_AS(RunConfig::parse("hop = 256\nhop = 128\n"),
                         doctest::Contains("duplicate key 'hop'"), FormatError);
    CHECK_THROWS_AS(RunConfig::parse("hop\n"), FormatError);
    CHECK_THROWS_AS(RunConfig::parse("hop = -3\n"), FormatError);
    CHECK_THROWS_AS(RunConfig::parse("window = hamming\n"), FormatError);
  }
  SUBCASE("invalid models and losses are rejected at parse time") {
    CHECK_THROWS_AS(RunConfig::parse("sbf_k = 4\n"), FormatError);
    CHECK_THROWS_AS(RunConfig::parse("loss_c = 0\n"), FormatError);
  }
  SUBCASE("to_string round trips") {
    RunConfig r;
    r.model.stage1_mode = FilterMode::kCrm;
    r.model.df_order = 3;
    r.model.bn_eps = 1e-3;
    r.loss.beta = 0.75;
    r.output_path = "out.wav";
    const RunConfig back = RunConfig::parse(r.to_string());
    CHECK(back.model == r.model);
    CHECK(back.loss.beta == 0.75);
    CHECK(back.output_path == "out.wav");
    CHECK(back.to_string() == r.to_string());
  }
  SUBCASE("load prefixes errors with the path") {
    const fs::path p = temp_dir("cfg") / "bad.cfg";
    std::ofstream(p) << "nope = 1\n";
    CHECK_THROWS_WITH_AS(RunConfig::load(p), doctest::Contains(p.string().c_str()), FormatError);
  }
}

TEST_CASE("spectrogram dumps round trip and reject malformed input") {
  oc::Rng rng(92);
  const ComplexSpectrogram s = oc::random_spectrogram(rng, 3, 5);
  const Bytes bytes = encode_spectrogram(s);
  CHECK(bytes.size() == 24 + 2 * 15 * 8);
  const ComplexSpectrogram back = decode_spectrogram(bytes);
  CHECK(back.real() == s.real());
  CHECK(back.imag() == s.imag());
  Bytes bad = bytes;
  bad.pop_back();
  CHECK_THROWS_AS(decode_spectrogram(bad), FormatError);
  bad = bytes;
  bad[1] = 'X';
  CHECK_THROWS_AS(decode_spectrogram(bad), FormatError);
}

TEST_CASE("fixtures written by the engine replay exactly") {
  ParityFixture fx;
  fx.run.model.stage1_channels = 4;
  fx.run.model.stage2_channels = 4;
  fx.run.model.taconv_repeats = 1;
  fx.run.model.dprnn_repeats = 1;
  oc::Rng rng(93);
  fx.input = oc::random_waveform(rng, 2048);
  for (double& v : fx.input.samples) v = static_cast<float>(v);
  fx.weights = init_weights(fx.run.model, InitKind::kRandom, 3);
  fx.expected = hdf_enhance(stft(fx.input), fx.weights, fx.run.model);
  const fs::path d = temp_dir("fixture");
  save_fixture(d, fx);
  const ParityFixture back = load_fixture(d);
  CHECK(back.weights == fx.weights);
  CHECK(replay_fixture(back).max_relative_deviation == 0.0);
}

TEST_CASE("fixtures exported by the PyTorch reference replay within 1e-4") {
  const std::vector<fs::path> dirs = fixture_dirs();
  CHECK(dirs.size() == 10);
  for (const fs::path& dir : dirs) {
    CAPTURE(dir.string());
    const ParityFixture fx = load_fixture(dir);
    const ParityReport r = replay_fixture(fx);
    CHECK(r.bins == 257);
    CHECK(r.frames == fx.expected.frames());
    CHECK(r.max_relative_deviation <= 1e-4);
  }
}

TEST_CASE("exported bundles validate against their run configuration") {
  for (const fs::path& d : fixture_dirs()) {
    const RunConfig run = RunConfig::load(d / "run.cfg");
    CHECK_NOTHROW(load_weights(d / "weights.hdfw", run.model));
  }
  // The default export carries the digest of the default configuration.
  const WeightBundle w = read_weights(fs::path(fixture_root()) / "default" / "weights.hdfw");
  CHECK(w.config_digest() == 0x15c45a04250e82c8ull);
}
