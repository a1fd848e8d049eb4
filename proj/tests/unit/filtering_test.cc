// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "doctest.h"
#include "hdfnet/error.h"
#include "hdfnet/filtering.h"
#include "hdfnet/verify/oracles.h"

using namespace hdf;
namespace oc = hdf::oracle;

namespace {

ComplexSpectrogram constant_spec(std::size_t t, std::size_t f, std::complex<double> v) {
  ComplexSpectrogram s(t, f);
  for (std::size_t a = 0; a < t; ++a)
    for (std::size_t b = 0; b < f; ++b) s.set(a, b, v);
  return s;
}

void fill(FilterCoeffs& c, std::complex<double> v) {
  for (double& x : c.real()) x = v.real();
  for (double& x : c.imag()) x = v.imag();
}

bool bit_equal(const ComplexSpectrogram& a, const ComplexSpectrogram& b,
               std::size_t frames) {
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t f = 0; f < a.bins(); ++f) {
      if (a.re(t, f) != b.re(t, f) || a.im(t, f) != b.im(t, f)) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("tap ordering is time-major with frequency offsets from -J to J") {
  const FilterSpec s = FilterSpec::df(3, 2);
  CHECK(s.taps() == 15);
  CHECK(s.tap_index(0, -2) == 0);
  CHECK(s.tap_index(0, 0) == 2);
  CHECK(s.tap_index(1, -2) == 5);
  CHECK(s.tap_index(2, 2) == 14);
}

TEST_CASE("filter order maps to taps per mode") {
  CHECK(FilterSpec::for_mode(FilterMode::kTdf, 5).taps() == 5);
  CHECK(FilterSpec::for_mode(FilterMode::kTdf, 5).freq_halfwidth == 0);
  CHECK(FilterSpec::for_mode(FilterMode::kFdf, 5).freq_halfwidth == 2);
  CHECK(FilterSpec::for_mode(FilterMode::kFdf, 5).temporal_taps == 1);
  CHECK(FilterSpec::for_mode(FilterMode::kDf, 5).taps() == 25);
  CHECK(FilterSpec::for_mode(FilterMode::kCrm, 5).taps() == 1);
  CHECK_THROWS_AS(FilterSpec::for_mode(FilterMode::kFdf, 4), InvalidArgument);
}

TEST_CASE("filter mode names parse and print") {
  for (FilterMode m : {FilterMode::kCrm, FilterMode::kTdf, FilterMode::kFdf, FilterMode::kDf}) {
    CHECK(parse_filter_mode(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_filter_mode("comb"), InvalidArgument);
}

TEST_CASE("geometry contradicting the mode is rejected") {
  CHECK_THROWS_AS((FilterSpec{FilterMode::kTdf, 3, 1}.validate()), InvalidArgument);
  CHECK_THROWS_AS((FilterSpec{FilterMode::kFdf, 2, 1}.validate()), InvalidArgument);
  CHECK_THROWS_AS((FilterSpec{FilterMode::kCrm, 1, 1}.validate()), InvalidArgument);
  CHECK_THROWS_AS((FilterSpec{FilterMode::kDf, 0, 1}.validate()), InvalidArgument);
  CHECK_NOTHROW((FilterSpec{FilterMode::kDf, 5, 2}.validate()));
}

TEST_CASE("identity coefficients reproduce the input exactly in every mode") {
  oc::Rng rng(41);
  const ComplexSpectrogram x = oc::random_spectrogram(rng, 7, 9);
  for (const FilterSpec& s : {FilterSpec::df(3, 1), FilterSpec::tdf(5), FilterSpec::fdf(2),
                              FilterSpec::crm()}) {
    CAPTURE(to_string(s.mode));
    CHECK(oc::max_abs_diff(apply_filter(x, FilterCoeffs::identity(7, 9, s)), x) == 0.0);
  }
}

TEST_CASE("zero coefficients give a silent output") {
  oc::Rng rng(42);
  const ComplexSpectrogram x = oc::random_spectrogram(rng, 4, 6);
  const ComplexSpectrogram y = apply_df(x, FilterCoeffs(4, 6, FilterSpec::df(3, 1)));
  for (double v : y.real()) CHECK(v == 0.0);
  for (double v : y.imag()) CHECK(v == 0.0);
}

TEST_CASE("deep filter matches the quadruple-loop oracle") {
  oc::Rng rng(43);
  SUBCASE("1x4x6 with I = 2, J = 1") {
    const FilterSpec s = FilterSpec::df(3, 1);
    const ComplexSpectrogram x = oc::random_spectrogram(rng, 4, 6);
    const FilterCoeffs c = oc::random_coeffs(rng, 4, 6, s);
    CHECK(oc::max_abs_diff(apply_df(x, c), oc::deep_filter(x, c)) <= 1e-12);
  }
  SUBCASE("larger random geometries") {
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t taps = 1 + rng() % 5, half = rng() % 3;
      const std::size_t t = 1 + rng() % 12, f = 1 + rng() % 20;
      const FilterSpec s = FilterSpec::df(taps, half);
      const ComplexSpectrogram x = oc::random_spectrogram(rng, t, f);
      const FilterCoeffs c = oc::random_coeffs(rng, t, f, s);
      CHECK(oc::max_abs_diff(apply_df(x, c), oc::deep_filter(x, c)) <= 1e-12);
    }
  }
}

TEST_CASE("five equal taps average a frame-constant spectrogram") {
  const ComplexSpectrogram x = constant_spec(10, 5, {0.3, -1.2});
  FilterCoeffs c(10, 5, FilterSpec::tdf(5));
  fill(c, {0.2, 0.0});
  const ComplexSpectrogram y = apply_tdf(x, c);
  for (std::size_t t = 4; t < 10; ++t)
    for (std::size_t f = 0; f < 5; ++f) {
      CHECK(std::abs(y.at(t, f) - std::complex<double>(0.3, -1.2)) < 1e-12);
    }
  // Before frame 4 the missing history reads zero.
  CHECK(std::abs(y.at(0, 0) - 0.2 * std::complex<double>(0.3, -1.2)) < 1e-15);
}

TEST_CASE("frequency taps past the band edge read zero") {
  ComplexSpectrogram x(1, 6);
  for (std::size_t f = 0; f < 6; ++f) x.set(0, f, {1.0 + f, 0.0});
  const FilterSpec s = FilterSpec::fdf(2);
  FilterCoeffs c(1, 6, s);
  // Only j = 1 and j = 2, which read bins f - 1 and f - 2.
  c.re(0, 0, s.tap_index(0, 1)) = 1.0;
  c.re(0, 0, s.tap_index(0, 2)) = 1.0;
  c.re(0, 3, s.tap_index(0, 1)) = 1.0;
  c.re(0, 3, s.tap_index(0, 2)) = 1.0;
  const ComplexSpectrogram y = apply_fdf(x, c);
  CHECK(y.at(0, 0) == std::complex<double>(0.0, 0.0));
  CHECK(y.at(0, 3) == std::complex<double>(3.0 + 2.0, 0.0));
}

TEST_CASE("complex ratio mask") {
  oc::Rng rng(44);
  const ComplexSpectrogram x = oc::random_spectrogram(rng, 3, 5);
  FilterCoeffs c(3, 5, FilterSpec::crm());
  fill(c, {1.0, 0.0});
  CHECK(oc::max_abs_diff(apply_crm(x, c), x) == 0.0);
  fill(c, {0.0, 1.0});
  const ComplexSpectrogram y = apply_crm(x, c);
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t f = 0; f < 5; ++f) {
      CHECK(y.re(t, f) == -x.im(t, f));
      CHECK(y.im(t, f) == x.re(t, f));
    }
}

TEST_CASE("restricted geometries are special cases of the deep filter") {
  oc::Rng rng(45);
  const ComplexSpectrogram x = oc::random_spectrogram(rng, 8, 11);
  const std::size_t I = 4, J = 2;
  const FilterCoeffs tdf = oc::random_coeffs(rng, 8, 11, FilterSpec::tdf(I + 1));
  const FilterCoeffs fdf = oc::random_coeffs(rng, 8, 11, FilterSpec::fdf(J));
  const FilterCoeffs crm = oc::random_coeffs(rng, 8, 11, FilterSpec::crm());
  CHECK(oc::max_abs_diff(apply_tdf(x, tdf), apply_df(x, oc::embed_as_df(tdf, I + 1, J))) <= 1e-12);
  CHECK(oc::max_abs_diff(apply_fdf(x, fdf), apply_df(x, oc::embed_as_df(fdf, I + 1, J))) <= 1e-12);
  CHECK(oc::max_abs_diff(apply_crm(x, crm), apply_df(x, oc::embed_as_df(crm, I + 1, J))) <= 1e-12);
}

TEST_CASE("temporal and deep filters never read future frames") {
  oc::Rng rng(46);
  for (const FilterSpec& s : {FilterSpec::tdf(5), FilterSpec::df(5, 2)}) {
    const ComplexSpectrogram x = oc::random_spectrogram(rng, 12, 10);
    const FilterCoeffs c = oc::random_coeffs(rng, 12, 10, s);
    const ComplexSpectrogram base = apply_filter(x, c);
    for (std::size_t t0 = 0; t0 + 1 < 12; ++t0) {
      ComplexSpectrogram xp = x;
      FilterCoeffs cp = c;
      for (std::size_t t = t0 + 1; t < 12; ++t)
        for (std::size_t f = 0; f < 10; ++f) {
          xp.re(t, f) += 5.0;
          xp.im(t, f) -= 3.0;
          for (std::size_t k = 0; k < s.taps(); ++k) cp.re(t, f, k) += 1.0;
        }
      CHECK(bit_equal(apply_filter(xp, cp), base, t0 + 1));
    }
  }
}

TEST_CASE("filtering is linear in the input and in the coefficients") {
  oc::Rng rng(47);
  const FilterSpec s = FilterSpec::df(3, 2);
  const ComplexSpectrogram x1 = oc::random_spectrogram(rng, 6, 9);
  const ComplexSpectrogram x2 = oc::random_spectrogram(rng, 6, 9);
  const FilterCoeffs c1 = oc::random_coeffs(rng, 6, 9, s);
  const FilterCoeffs c2 = oc::random_coeffs(rng, 6, 9, s);
  ComplexSpectrogram xs(6, 9);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs.real()[i] = 2.0 * x1.real()[i] - 0.5 * x2.real()[i];
    xs.imag()[i] = 2.0 * x1.imag()[i] - 0.5 * x2.imag()[i];
  }
  FilterCoeffs cs(6, 9, s);
  for (std::size_t i = 0; i < cs.real().size(); ++i) {
    cs.real()[i] = c1.real()[i] + 3.0 * c2.real()[i];
    cs.imag()[i] = c1.imag()[i] + 3.0 * c2.imag()[i];
  }
  const ComplexSpectrogram a = apply_df(x1, c1), b = apply_df(x2, c1);
  const ComplexSpectrogram lin_x = apply_df(xs, c1);
  const ComplexSpectrogram d = apply_df(x1, c2);
  const ComplexSpectrogram lin_c = apply_df(x1, cs);
  double wx = 0.0, wc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    wx = std::max(wx, std::abs(lin_x.real()[i] - (2.0 * a.real()[i] - 0.5 * b.real()[i])));
    wx = std::max(wx, std::abs(lin_x.imag()[i] - (2.0 * a.imag()[i] - 0.5 * b.imag()[i])));
    wc = std::max(wc, std::abs(lin_c.real()[i] - (a.real()[i] + 3.0 * d.real()[i])));
    wc = std::max(wc, std::abs(lin_c.imag()[i] - (a.imag()[i] + 3.0 * d.imag()[i])));
  }
  CHECK(wx <= 1e-12);
  CHECK(wc <= 1e-12);
}

TEST_CASE("streaming filter reproduces the batch result frame by frame") {
  oc::Rng rng(48);
  for (const FilterSpec& s : {FilterSpec::df(5, 2), FilterSpec::tdf(3), FilterSpec::fdf(1),
                              FilterSpec::crm()}) {
    const ComplexSpectrogram x = oc::random_spectrogram(rng, 9, 7);
    const FilterCoeffs c = oc::random_coeffs(rng, 9, 7, s);
    const ComplexSpectrogram batch = apply_filter(x, c);
    StreamingFilter sf(s, 7);
    std::vector<double> ore(7), oim(7);
    const std::size_t n = 7 * s.taps();
    for (std::size_t t = 0; t < 9; ++t) {
      sf.push(std::span(x.real()).subspan(t * 7, 7), std::span(x.imag()).subspan(t * 7, 7),
              std::span(c.real()).subspan(t * n, n), std::span(c.imag()).subspan(t * n, n),
              ore, oim);
      for (std::size_t f = 0; f < 7; ++f) {
        CHECK(ore[f] == batch.re(t, f));
        CHECK(oim[f] == batch.im(t, f));
      }
    }
  }
}

TEST_CASE("mismatched coefficients are rejected") {
  const ComplexSpectrogram x(4, 6);
  CHECK_THROWS_AS(apply_df(x, FilterCoeffs(4, 5, FilterSpec::df(2, 1))), ShapeError);
  CHECK_THROWS_AS(apply_tdf(x, FilterCoeffs(4, 6, FilterSpec::fdf(1))), InvalidArgument);
}

TEST_CASE("sub-band fusion") {
  oc::Rng rng(49);
  SUBCASE("k = 1 is the identity") {
    const Tensor4 x = oc::random_tensor(rng, 1, 3, 4, 8);
    CHECK(oc::max_abs_diff(sbf_expand(x, SbfSpec{1}), x) == 0.0);
  }
  SUBCASE("3 channels with k = 5 give 15 shifted copies") {
    const Tensor4 x = oc::random_tensor(rng, 2, 3, 4, 8);
    const Tensor4 y = sbf_expand(x, SbfSpec{5});
    CHECK(y.channels() == 15);
    for (std::size_t b = 0; b < 2; ++b)
      for (long d = -2; d <= 2; ++d)
        for (std::size_t c = 0; c < 3; ++c)
          for (std::size_t t = 0; t < 4; ++t)
            for (long f = 0; f < 8; ++f) {
              const std::size_t oc_idx = static_cast<std::size_t>(d + 2) * 3 + c;
              const long src = f - d;
              const double want = src >= 0 && src < 8 ? x(b, c, t, static_cast<std::size_t>(src)) : 0.0;
              CHECK(y(b, oc_idx, t, static_cast<std::size_t>(f)) == want);
            }
  }
  SUBCASE("the centre block is the input") {
    const Tensor4 x = oc::random_tensor(rng, 1, 6, 2, 5);
    const Tensor4 y = sbf_expand(x, SbfSpec{3});
    for (std::size_t c = 0; c < 6; ++c)
      for (std::size_t f = 0; f < 5; ++f) CHECK(y(0, 6 + c, 1, f) == x(0, c, 1, f));
  }
  SUBCASE("even k is rejected") {
    CHECK_THROWS_AS(sbf_expand(Tensor4(1, 1, 1, 4), SbfSpec{4}), InvalidArgument);
  }
}
