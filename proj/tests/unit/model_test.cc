// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Frozen parameter counts come from tests/oracles/torch_reference.py, which
// sums numel() over a stock-PyTorch build of the same network.

#include <cmath>
#include <set>
#include <thread>

#include "doctest.h"
#include "hdfnet/error.h"
#include "hdfnet/layout.h"
#include "hdfnet/model.h"
#include "hdfnet/verify/oracles.h"

using namespace hdf;
namespace oc = hdf::oracle;

namespace {

ModelConfig tiny_config() {
  ModelConfig cfg;
  cfg.stage1_channels = 4;
  cfg.stage2_channels = 4;
  cfg.taconv_repeats = 1;
  cfg.dprnn_repeats = 1;
  return cfg;
}

bool bit_equal(const ComplexSpectrogram& a, const ComplexSpectrogram& b) {
  return a.same_shape(b) && a.real() == b.real() && a.imag() == b.imag();
}

void zero_head(WeightBundle& w, int stage) {
  for (const char* leaf : {"/weight", "/bias"}) {
    for (double& v : w.get("stage" + std::to_string(stage) + "/head/deconv" + leaf).values) v = 0.0;
  }
}

TaParams constant_gate_ta(std::size_t c, double bias) {
  TaParams p;
  p.gru.input_size = p.gru.hidden_size = c;
  nn::GruCell cell;
  cell.input_size = cell.hidden_size = c;
  cell.w_ih.assign(3 * c * c, 0.0);
  cell.w_hh.assign(3 * c * c, 0.0);
  cell.b_ih.assign(3 * c, 0.0);
  cell.b_hh.assign(3 * c, 0.0);
  p.gru.cells = {cell};
  p.conv.in_ch = p.conv.out_ch = c;
  p.conv.kernel = 3;
  p.conv.weight.assign(c * c * 3, 0.0);
  p.conv.bias.assign(c, bias);
  return p;
}

}  // namespace

TEST_CASE("published configuration has 166468 trainable parameters") {
  const ModelConfig cfg = ModelConfig::defaults();
  CHECK(param_count(cfg) == 166468);
  CHECK(param_count(ModelConfig::single_stage_df()) == 142354);
  CHECK(cfg.digest() == 0x15c45a04250e82c8ull);
  const double macs = macs_per_second(cfg);
  CHECK(macs >= 0.2e9);
  CHECK(macs <= 0.9e9);
}

TEST_CASE("doubling both channel counts multiplies parameters by 2 to 4") {
  ModelConfig cfg;
  cfg.stage1_channels *= 2;
  cfg.stage2_channels *= 2;
  CHECK(param_count(cfg) == 638068);
  const double ratio = static_cast<double>(param_count(cfg)) /
                       static_cast<double>(param_count(ModelConfig::defaults()));
  CHECK(ratio > 2.0);
  CHECK(ratio < 4.0);
}

TEST_CASE("layout names are unique and follow the canonical scheme") {
  const auto specs = expected_layout(ModelConfig::defaults());
  std::set<std::string> names;
  for (const TensorSpec& s : specs) {
    CHECK(names.insert(s.name).second);
    const bool ok = s.name.rfind("stage1/", 0) == 0 || s.name.rfind("stage2/", 0) == 0;
    CHECK(ok);
  }
  CHECK(names.count("stage2/encoder/taconv0/pconv1/weight") == 1);
  CHECK(names.count("stage1/dprnn/block1/inter/g1/w_hh") == 1);
  CHECK(names.count("stage1/head/deconv/weight") == 1);
  for (const TensorSpec& s : specs) {
    if (s.name == "stage2/encoder/taconv0/pconv1/weight") {
      CHECK(s.shape == std::vector<std::size_t>{32, 160, 1, 1});
    }
    if (s.name == "stage1/head/deconv/weight") {
      CHECK(s.shape == std::vector<std::size_t>{16, 10, 1, 5});
    }
  }
}

TEST_CASE("MAC breakdown is positive in every category and scales with hop") {
  const ModelConfig cfg;
  const CostBreakdown cost = macs_per_frame(cfg);
  for (const auto& [name, macs] : cost.per_frame) {
    CAPTURE(name);
    CHECK(macs > 0);
  }
  StftParams half_hop = cfg.stft;
  half_hop.hop = 128;
  CHECK(macs_per_second(cfg, half_hop) == doctest::Approx(2.0 * macs_per_second(cfg)));
}

TEST_CASE("temporal attention with saturated gates") {
  oc::Rng rng(71);
  const Tensor4 x = oc::random_tensor(rng, 2, 3, 5, 7);
  CHECK(oc::max_abs_diff(ta_forward(x, constant_gate_ta(3, 50.0)), x) == 0.0);
  const Tensor4 y = ta_forward(x, constant_gate_ta(3, -50.0));
  for (double v : y.data()) CHECK(std::abs(v) < 1e-20);
}

TEST_CASE("temporal attention gains lie in (0, 1) and are causal") {
  const ModelConfig cfg = tiny_config();
  const WeightBundle w = init_weights(cfg, InitKind::kRandom, 3);
  const TacrnParams p = load_tacrn(w, cfg, 1);
  const TaParams& ta = p.encoder_taconvs[0].ta;
  oc::Rng rng(72);
  Tensor4 x = oc::random_tensor(rng, 1, 4, 8, 9);
  const Tensor3 g = ta_weights(x, ta);
  for (double v : g.data()) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t f = 0; f < 9; ++f) x(0, c, 6, f) += 2.0;
  const Tensor3 g2 = ta_weights(x, ta);
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t t = 0; t < 6; ++t) CHECK(g2(0, c, t) == g(0, c, t));
}

TEST_CASE("TAConv with zero inner weights is the residual identity") {
  const ModelConfig cfg = tiny_config();
  const WeightBundle w = init_weights(cfg, InitKind::kZero);
  const TacrnParams p2 = load_tacrn(w, cfg, 2);
  oc::Rng rng(73);
  const Tensor4 x = oc::random_tensor(rng, 1, 4, 6, 9);
  CHECK(oc::max_abs_diff(taconv_forward(x, p2.encoder_taconvs[0], p2.sbf), x) == 0.0);
}

TEST_CASE("sub-band fusion with k = 1 leaves TAConv unchanged") {
  const ModelConfig cfg = tiny_config();
  const WeightBundle w = init_weights(cfg, InitKind::kRandom, 5);
  const TacrnParams p = load_tacrn(w, cfg, 1);
  const TaConvParams& t = p.encoder_taconvs[0];
  oc::Rng rng(74);
  const Tensor4 x = oc::random_tensor(rng, 1, 4, 6, 9);
  CHECK(oc::max_abs_diff(taconv_forward(x, t, SbfSpec{1}), taconv_forward(x, t, std::nullopt)) ==
        0.0);
}

TEST_CASE("DPRNN with zero weights is the identity and is causal in time") {
  const ModelConfig cfg = tiny_config();
  oc::Rng rng(75);
  Tensor4 x = oc::random_tensor(rng, 1, 4, 7, 9);
  const DprnnParams zero = load_tacrn(init_weights(cfg, InitKind::kZero), cfg, 1).dprnn[0];
  CHECK(oc::max_abs_diff(dprnn_forward(x, zero), x) == 0.0);

  const DprnnParams p = load_tacrn(init_weights(cfg, InitKind::kRandom, 9), cfg, 1).dprnn[0];
  const Tensor4 base = dprnn_forward(x, p);
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t f = 0; f < 9; ++f) x(0, c, 5, f) -= 1.5;
  const Tensor4 moved = dprnn_forward(x, p);
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t t = 0; t < 5; ++t)
      for (std::size_t f = 0; f < 9; ++f) CHECK(moved(0, c, t, f) == base(0, c, t, f));
}

TEST_CASE("coefficient heads emit (1, T, 257, 2, taps) bounded by tanh") {
  const ModelConfig cfg;
  const WeightBundle w = init_weights(cfg, InitKind::kRandom, 1);
  const HdfNet net(w, cfg);
  const ErbFilterbank erb = ErbFilterbank::build(257, 16000, 65, 64);
  oc::Rng rng(76);
  const ComplexSpectrogram x = oc::random_spectrogram(rng, 6, 257);
  const DfHeadOutput h1 = tacrn_forward(build_feature_stack(x).tensor, *net.stage1(), &erb);
  CHECK(h1.shape() == std::vector<std::size_t>{1, 6, 257, 2, 5});
  const DfHeadOutput h2 = tacrn_forward(build_feature_stack(x, &x).tensor, *net.stage2());
  CHECK(h2.shape() == std::vector<std::size_t>{1, 6, 257, 2, 5});
  for (double v : h2.data()) CHECK(std::abs(v) < 1.0);
  // ERB synthesis rows sum to one, so expanded coefficients stay bounded too.
  for (double v : h1.data()) CHECK(std::abs(v) < 1.0);
}

TEST_CASE("head planes map to (part, tap) in part-major order") {
  Tensor4 planes(1, 6, 2, 3);
  for (std::size_t p = 0; p < 6; ++p) planes(0, p, 1, 2) = static_cast<double>(p);
  const DfHeadOutput out = head_planes_to_output(planes, 3);
  CHECK(out(0, 1, 2, 0, 0) == 0.0);
  CHECK(out(0, 1, 2, 0, 2) == 2.0);
  CHECK(out(0, 1, 2, 1, 0) == 3.0);
  CHECK(out(0, 1, 2, 1, 2) == 5.0);
  CHECK_THROWS_AS(head_planes_to_output(planes, 2), ShapeError);
}

TEST_CASE("zeroed heads silence their stage") {
  const ModelConfig cfg = tiny_config();
  WeightBundle w = init_weights(cfg, InitKind::kRandom, 2);
  oc::Rng rng(77);
  const ComplexSpectrogram x = oc::random_spectrogram(rng, 8, 257);

  SUBCASE("second head zero: output equals the first stage") {
    zero_head(w, 2);
    const HdfNet::Trace tr = HdfNet(w, cfg).enhance_traced(x);
    for (double v : tr.stage2.real()) CHECK(v == 0.0);
    CHECK(bit_equal(tr.output, tr.stage1));
    double energy = 0.0;
    for (double v : tr.stage1.real()) energy += v * v;
    CHECK(energy > 0.0);
  }
  SUBCASE("both heads zero: silent output") {
    zero_head(w, 1);
    zero_head(w, 2);
    const ComplexSpectrogram y = hdf_enhance(x, w, cfg);
    for (double v : y.real()) CHECK(v == 0.0);
    for (double v : y.imag()) CHECK(v == 0.0);
  }
  SUBCASE("zero head gives zero coefficients and a zero TDF output") {
    zero_head(w, 1);
    const HdfNet net(w, cfg);
    const ErbFilterbank erb = ErbFilterbank::build(257, 16000, 65, 64);
    const DfHeadOutput h = tacrn_forward(build_feature_stack(x).tensor, *net.stage1(), &erb);
    for (double v : h.data()) CHECK(v == 0.0);
    const ComplexSpectrogram s = apply_tdf(x, h.coeffs(0, cfg.stage1_filter()));
    for (double v : s.real()) CHECK(v == 0.0);
  }
}

TEST_CASE("enhancement is causal end to end") {
  const ModelConfig cfg = tiny_config();
  const HdfNet net(init_weights(cfg, InitKind::kRandom, 4), cfg);
  oc::Rng rng(78);
  ComplexSpectrogram x = oc::random_spectrogram(rng, 10, 257);
  const ComplexSpectrogram base = net.enhance(x);
  const std::size_t t0 = 6;
  for (std::size_t f = 0; f < 257; ++f) x.set(t0 + 1, f, x.at(t0 + 1, f) * 3.0 + 1.0);
  const ComplexSpectrogram moved = net.enhance(x);
  for (std::size_t t = 0; t <= t0; ++t)
    for (std::size_t f = 0; f < 257; ++f) {
      CHECK(moved.re(t, f) == base.re(t, f));
      CHECK(moved.im(t, f) == base.im(t, f));
    }
  bool changed = false;
  for (std::size_t f = 0; f < 257; ++f) changed |= moved.re(t0 + 1, f) != base.re(t0 + 1, f);
  CHECK(changed);
}

TEST_CASE("enhancement is deterministic across runs and threads") {
  const ModelConfig cfg = tiny_config();
  const HdfNet net(init_weights(cfg, InitKind::kRandom, 6), cfg);
  oc::Rng rng(79);
  const ComplexSpectrogram x = oc::random_spectrogram(rng, 9, 257);
  const ComplexSpectrogram ref = net.enhance(x);
  CHECK(bit_equal(net.enhance(x), ref));
  std::vector<ComplexSpectrogram> outs(4);
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    threads.emplace_back([&, i] { outs[i] = net.enhance(x); });
  }
  for (std::thread& t : threads) t.join();
  for (const ComplexSpectrogram& o : outs) CHECK(bit_equal(o, ref));
}

TEST_CASE("every filter-mode combination constructs and runs") {
  const std::optional<FilterMode> none;
  const std::vector<std::pair<std::optional<FilterMode>, std::optional<FilterMode>>> grid = {
      {FilterMode::kCrm, FilterMode::kCrm}, {FilterMode::kCrm, FilterMode::kFdf},
      {FilterMode::kTdf, FilterMode::kCrm}, {FilterMode::kTdf, FilterMode::kTdf},
      {FilterMode::kFdf, FilterMode::kTdf}, {FilterMode::kTdf, FilterMode::kFdf},
      {none, FilterMode::kDf},              {FilterMode::kDf, none},
  };
  oc::Rng rng(80);
  const ComplexSpectrogram x = oc::random_spectrogram(rng, 5, 257);
  for (const auto& [m1, m2] : grid) {
    ModelConfig cfg = tiny_config();
    cfg.stage1_mode = m1;
    cfg.stage2_mode = m2;
    CAPTURE(cfg.canonical_string());
    const ComplexSpectrogram y = hdf_enhance(x, init_weights(cfg, InitKind::kRandom, 8), cfg);
    CHECK(y.same_shape(x));
    for (double v : y.real()) CHECK(std::isfinite(v));
  }
}

TEST_CASE("an empty spectrogram enhances to an empty spectrogram") {
  const ModelConfig cfg = tiny_config();
  const HdfNet net(init_weights(cfg, InitKind::kRandom, 1), cfg);
  CHECK(net.enhance(ComplexSpectrogram(0, 257)).frames() == 0);
  CHECK_THROWS_AS(net.enhance(ComplexSpectrogram(3, 129)), ShapeError);
}

TEST_CASE("bundles are validated against the configuration") {
  const ModelConfig cfg = tiny_config();
  const WeightBundle good = init_weights(cfg, InitKind::kRandom, 1);
  CHECK_NOTHROW(validate_bundle(good, cfg));

  SUBCASE("digest") {
    ModelConfig other = cfg;
    other.sbf_k = 3;
    CHECK_THROWS_AS(HdfNet(good, other), DigestMismatchError);
  }
  SUBCASE("missing layer names the layer") {
    WeightBundle w = good;
    w.erase("stage2/dprnn/block0/inter_proj/bias");
    try {
      validate_bundle(w, cfg);
      FAIL("expected MissingLayerError");
    } catch (const MissingLayerError& e) {
      CHECK(e.layer() == "stage2/dprnn/block0/inter_proj/bias");
      CHECK(std::string(e.what()).find("missing layer") != std::string::npos);
    }
  }
  SUBCASE("shape") {
    WeightBundle w = good;
    w.get("stage1/head/deconv/bias").shape = {11};
    w.get("stage1/head/deconv/bias").values.push_back(0.0);
    CHECK_THROWS_AS(validate_bundle(w, cfg), LayerShapeError);
  }
  SUBCASE("extras") {
    WeightBundle w = good;
    w.put("stage1/extra/weight", NamedTensor{{1}, {0.0}});
    CHECK_THROWS_AS(validate_bundle(w, cfg), UnexpectedLayerError);
  }
}

TEST_CASE("inconsistent configurations are rejected") {
  ModelConfig cfg;
  cfg.sbf_k = 4;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = ModelConfig{};
  cfg.stage2_channels = 33;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = ModelConfig{};
  cfg.df_order = 4;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = ModelConfig{};
  cfg.stage1_mode.reset();
  cfg.stage2_mode.reset();
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = ModelConfig{};
  cfg.erb_high_bands = 250;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("digest covers every architecture field") {
  const std::uint64_t base = ModelConfig{}.digest();
  ModelConfig cfg;
  cfg.bn_eps = 1e-3;
  CHECK(cfg.digest() != base);
  cfg = ModelConfig{};
  cfg.stage1_mode = FilterMode::kCrm;
  CHECK(cfg.digest() != base);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}
