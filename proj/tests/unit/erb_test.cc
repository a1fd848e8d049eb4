// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Reference values come from tests/oracles/erb_oracle.py, an independent
// numpy construction of the same filterbank.

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hdfnet/erb.h"
#include "hdfnet/error.h"
#include "hdfnet/verify/oracles.h"

using namespace hdf;
namespace oc = hdf::oracle;

namespace {

const ErbFilterbank& default_fb() {
  static const ErbFilterbank fb = ErbFilterbank::build(257, 16000, 65, 64);
  return fb;
}

Tensor4 row_tensor(const std::vector<double>& v) {
  Tensor4 t(1, 1, 1, v.size());
  for (std::size_t i = 0; i < v.size(); ++i) t(0, 0, 0, i) = v[i];
  return t;
}

}  // namespace

TEST_CASE("default filterbank has 129 bands over 257 bins") {
  const ErbFilterbank& fb = default_fb();
  CHECK(fb.bands() == 129);
  CHECK(fb.linear_bins() == 257);
  CHECK(fb.low_kept() == 65);
  CHECK(fb.nonzeros() == 447);
}

TEST_CASE("filterbank supports and weights match the numpy oracle") {
  const ErbFilterbank& fb = default_fb();
  struct Row {
    std::size_t band, begin, end;
    double peak;
  };
  const Row rows[] = {
      {65, 65, 67, 0.75158513150172823},
      {66, 66, 69, 0.49341161386869703},
      {96, 127, 133, 0.32351843785600304},
      {127, 246, 256, 0.17726676871023334},
      {128, 251, 257, 0.31217701467085845},
  };
  for (const Row& r : rows) {
    CAPTURE(r.band);
    CHECK(fb.support_begin(r.band) == r.begin);
    CHECK(fb.support_end(r.band) == r.end);
    double peak = 0.0;
    for (std::size_t k = 0; k < 257; ++k) peak = std::max(peak, fb.analysis(r.band, k));
    CHECK(std::abs(peak - r.peak) < 1e-12);
  }
  CHECK(std::abs(fb.analysis(96, 130) - 0.26500447322389925) < 1e-12);
  CHECK(std::abs(fb.synthesis(130, 96) - 0.74501028634049127) < 1e-12);
}

TEST_CASE("low bins pass through as identity rows") {
  const ErbFilterbank& fb = default_fb();
  for (std::size_t b = 0; b < 65; ++b) {
    for (std::size_t k = 0; k < 257; ++k) {
      CHECK(fb.analysis(b, k) == (b == k ? 1.0 : 0.0));
      CHECK(fb.synthesis(k, b) == (b == k ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("every row of analysis and synthesis is nonnegative and sums to one") {
  const ErbFilterbank& fb = default_fb();
  for (std::size_t b = 0; b < fb.bands(); ++b) {
    double sum = 0.0;
    for (std::size_t k = 0; k < 257; ++k) {
      CHECK(fb.analysis(b, k) >= 0.0);
      sum += fb.analysis(b, k);
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
  for (std::size_t k = 0; k < 257; ++k) {
    double sum = 0.0;
    for (std::size_t b = 0; b < fb.bands(); ++b) {
      CHECK(fb.synthesis(k, b) >= 0.0);
      sum += fb.synthesis(k, b);
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("analysis rows are contiguous with zeros outside their support") {
  const ErbFilterbank& fb = default_fb();
  for (std::size_t b = 0; b < fb.bands(); ++b) {
    for (std::size_t k = 0; k < 257; ++k) {
      const bool inside = k >= fb.support_begin(b) && k < fb.support_end(b);
      CHECK((fb.analysis(b, k) > 0.0) == inside);
    }
  }
}

TEST_CASE("constant spectra are reproduced exactly") {
  const Tensor4 x = row_tensor(std::vector<double>(257, 2.5));
  const Tensor4 e = erb_analyze(x, default_fb());
  for (double v : e.data()) CHECK(std::abs(v - 2.5) < 1e-12);
  const Tensor4 r = erb_synthesize(e, default_fb());
  for (double v : r.data()) CHECK(std::abs(v - 2.5) < 1e-12);
}

TEST_CASE("a one-hot low bin round-trips to itself") {
  std::vector<double> v(257, 0.0);
  v[10] = 1.0;
  const Tensor4 e = erb_analyze(row_tensor(v), default_fb());
  for (std::size_t b = 0; b < e.freq(); ++b) CHECK(e(0, 0, 0, b) == (b == 10 ? 1.0 : 0.0));
  const Tensor4 r = erb_synthesize(e, default_fb());
  CHECK(oc::max_abs_diff(r.data(), v) == 0.0);
}

TEST_CASE("sparse analysis and synthesis match dense matrix products") {
  oc::Rng rng(31);
  const Tensor4 x = oc::random_tensor(rng, 2, 3, 4, 257);
  CHECK(oc::max_abs_diff(erb_analyze(x, default_fb()), oc::erb_analyze(x, default_fb())) <= 1e-12);
  const Tensor4 y = oc::random_tensor(rng, 2, 3, 4, 129);
  CHECK(oc::max_abs_diff(erb_synthesize(y, default_fb()),
                         oc::erb_synthesize(y, default_fb())) <= 1e-12);
}

TEST_CASE("smooth envelopes survive the ERB round trip") {
  std::vector<double> env(257);
  for (std::size_t k = 0; k < 257; ++k) {
    const double u = static_cast<double>(k) / 256.0;
    env[k] = 1.0 + 0.5 * std::cos(std::numbers::pi * u) +
             0.25 * std::cos(2.0 * std::numbers::pi * u);
  }
  const Tensor4 r = erb_synthesize(erb_analyze(row_tensor(env), default_fb()), default_fb());
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < 257; ++k) {
    num += (r(0, 0, 0, k) - env[k]) * (r(0, 0, 0, k) - env[k]);
    den += env[k] * env[k];
  }
  const double rel = std::sqrt(num / den);
  CHECK(rel <= 0.05);
  CHECK(std::abs(rel - 0.00026025408977501042) < 1e-12);
}

TEST_CASE("analyze after synthesize is diagonally dominant on the high bands") {
  const ErbFilterbank& fb = default_fb();
  double min_margin = 1e300;
  for (std::size_t b = 65; b < fb.bands(); ++b) {
    double diag = 0.0, off = 0.0;
    for (std::size_t c = 65; c < fb.bands(); ++c) {
      double m = 0.0;
      for (std::size_t k = 0; k < 257; ++k) m += fb.analysis(b, k) * fb.synthesis(k, c);
      (b == c ? diag : off) += std::abs(m);
    }
    min_margin = std::min(min_margin, diag - off);
  }
  CHECK(min_margin > 0.0);
  CHECK(std::abs(min_margin - 0.23676891835531666) < 1e-12);
}

TEST_CASE("keeping every bin gives the identity filterbank") {
  const ErbFilterbank fb = ErbFilterbank::build(257, 16000, 257, 0);
  CHECK(fb.bands() == 257);
  oc::Rng rng(32);
  const Tensor4 x = oc::random_tensor(rng, 1, 2, 3, 257);
  CHECK(oc::max_abs_diff(erb_analyze(x, fb), x) == 0.0);
  CHECK(oc::max_abs_diff(erb_synthesize(x, fb), x) == 0.0);
}

TEST_CASE("erb rate scale and its inverse agree") {
  for (double hz : {0.0, 100.0, 1000.0, 4000.0, 8000.0}) {
    CHECK(std::abs(erb_rate_inverse(erb_rate(hz)) - hz) < 1e-9);
  }
  CHECK(erb_rate(0.0) == 0.0);
  CHECK(erb_rate(1000.0) > erb_rate(500.0));
}

TEST_CASE("infeasible filterbanks and mismatched inputs are rejected") {
  CHECK_THROWS_AS(ErbFilterbank::build(257, 16000, 65, 193), InvalidArgument);
  CHECK_THROWS_AS(ErbFilterbank::build(257, 16000, 300, 0), InvalidArgument);
  CHECK_THROWS_AS(ErbFilterbank::build(257, 16000, 65, 0), InvalidArgument);
  CHECK_THROWS_AS(erb_analyze(Tensor4(1, 1, 1, 200), default_fb()), ShapeError);
  CHECK_THROWS_AS(erb_synthesize(Tensor4(1, 1, 1, 257), default_fb()), ShapeError);
}
