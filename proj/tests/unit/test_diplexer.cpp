#include <doctest.h>

#include <complex>

#include "oracles.hpp"
#include "xtalk/diplexer.hpp"
#include "xtalk/error.hpp"

using namespace xtalk;
using oracle::kPi;

namespace {

const double kFs = 200e6;

double response_mag(const std::vector<double>& taps, double f, double fs) {
  std::complex<double> h;
  for (std::size_t n = 0; n < taps.size(); ++n)
    h += taps[n] * std::polar(1.0, -2 * kPi * f * static_cast<double>(n) / fs);
  return std::abs(h);
}

// 40005 samples: after the 5 dropped transient samples, 40000 remain, an
// integer number of periods of both tones (bins 5000 and 8000).
std::vector<double> composite(double amp_a, double amp_b, std::size_t n = 40005) {
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / kFs;
    x[k] = amp_a * std::sin(2 * kPi * 25e6 * t) + amp_b * std::sin(2 * kPi * 40e6 * t);
  }
  return x;
}

double residual_db(std::span<const double> y, std::size_t own, std::size_t other) {
  return 10 * std::log10(oracle::bin_power(y, other) / oracle::bin_power(y, own));
}

}  // namespace

TEST_SUITE("diplexer") {
  TEST_CASE("bandpass design") {
    SUBCASE("taps mirror exactly") {
      for (std::size_t p : {2u, 5u, 6u, 31u, 64u}) {
        const auto f = design_fir_bandpass(p, 32e6, 48e6, kFs);
        REQUIRE(f.taps.size() == p + 1);
        for (std::size_t k = 0; k <= p; ++k) CHECK(f.taps[k] == f.taps[p - k]);
        CHECK(f.group_delay() == p / 2.0);
      }
    }
    SUBCASE("p = 5 around 40 MHz") {
      const auto f = design_fir_bandpass(5, 32e6, 48e6, kFs);
      const double at40 = response_mag(f.taps, 40e6, kFs);
      const double at25 = response_mag(f.taps, 25e6, kFs);
      CHECK(at40 == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(at25 < at40);
      CHECK(std::abs(f.response(25e6)) == doctest::Approx(at25).epsilon(1e-12));
      CHECK(response_mag(f.taps, 0.0, kFs) < at40);
    }
    SUBCASE("higher order rejects DC") {
      for (auto band : {std::pair{20e6, 30e6}, std::pair{32e6, 48e6}}) {
        const auto f = design_fir_bandpass(31, band.first, band.second, kFs);
        CHECK(response_mag(f.taps, 0.0, kFs) < response_mag(f.taps, 0.5 * (band.first + band.second), kFs));
      }
    }
    SUBCASE("invalid bands") {
      CHECK_THROWS_AS(design_fir_bandpass(5, 30e6, 20e6, kFs), InvalidArgument);
      CHECK_THROWS_AS(design_fir_bandpass(5, 0.0, 20e6, kFs), InvalidArgument);
      CHECK_THROWS_AS(design_fir_bandpass(5, 80e6, 120e6, kFs), InvalidArgument);
      CHECK_THROWS_AS(design_fir_bandpass(1, 20e6, 30e6, kFs), InvalidArgument);
    }
  }

  TEST_CASE("lowpass design has unit DC gain") {
    const auto f = design_fir_lowpass(64, 10e6, kFs);
    CHECK(response_mag(f.taps, 0.0, kFs) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(response_mag(f.taps, 60e6, kFs) < 1e-2);
    for (std::size_t k = 0; k <= 64; ++k) CHECK(f.taps[k] == f.taps[64 - k]);
  }

  TEST_CASE("filtering") {
    const auto fir = design_fir_bandpass(5, 32e6, 48e6, kFs);
    SUBCASE("impulse response") {
      std::vector<double> x(10, 0.0);
      x[0] = 1.0;
      const auto y = filter(x, kFs, fir);
      for (std::size_t k = 0; k < 6; ++k) CHECK(y.samples[k] == fir.taps[k]);
      for (std::size_t k = 6; k < 10; ++k) CHECK(y.samples[k] == 0.0);
      CHECK(y.group_delay == 2.5);
    }
    SUBCASE("in-band tone scales by |H|") {
      const auto x = oracle::tone(4000, 38e6, kFs);
      const auto y = filter(x, kFs, fir);
      double peak = 0.0;
      for (std::size_t k = 10; k < y.samples.size(); ++k) peak = std::max(peak, std::abs(y.samples[k]));
      // 38 MHz: 100 periods per 19 samples, so sampled peaks approach the true peak closely.
      CHECK(peak == doctest::Approx(response_mag(fir.taps, 38e6, kFs)).epsilon(1e-3));
    }
    SUBCASE("linearity") {
      const auto a = oracle::tone(500, 12e6, kFs), b = oracle::tone(500, 41e6, kFs, 0.3, 1.0);
      std::vector<double> s(500);
      for (std::size_t k = 0; k < 500; ++k) s[k] = a[k] + b[k];
      const auto ya = filter(a, kFs, fir).samples, yb = filter(b, kFs, fir).samples, ys = filter(s, kFs, fir).samples;
      for (std::size_t k = 0; k < 500; ++k) CHECK(std::abs(ys[k] - ya[k] - yb[k]) < 1e-15);
    }
    SUBCASE("rate mismatch") { CHECK_THROWS_AS(filter(std::vector<double>(8, 1.0), 100e6, fir), InvalidArgument); }
  }

  TEST_CASE("diplexing a 25/40 MHz composite") {
    const DiplexConfig cfg;
    const auto r = diplex(composite(1.0, 1.0), kFs, cfg);
    REQUIRE(r.output.channels() == 2);
    REQUIRE(r.output.length() == 40000);
    CHECK(r.dropped == 5);
    const std::array<std::size_t, 2> own{5000, 8000};
    for (std::size_t c = 0; c < 2; ++c) {
      const auto y = r.output.channel(c);
      CHECK(residual_db(y, own[c], own[1 - c]) <= -40.0);
      CHECK(residual_db(r.fir_only.channel(c), own[c], own[1 - c]) > -20.0);
      CHECK(std::abs(oracle::mean(y)) < 1e-6);
      double peak = 0.0;
      for (double v : y) peak = std::max(peak, std::abs(v));
      CHECK(peak >= 0.999);
      CHECK(peak <= 1.001);
    }
    CHECK(diplex(composite(1.0, 1.0), kFs, cfg).output == r.output);
  }

  TEST_CASE("unequal tone amplitudes are equalized") {
    const auto r = diplex(composite(10.0, 1.0), kFs, DiplexConfig{});
    const std::array<std::size_t, 2> own{5000, 8000};
    for (std::size_t c = 0; c < 2; ++c) CHECK(residual_db(r.output.channel(c), own[c], own[1 - c]) <= -40.0);
    for (std::size_t c = 0; c < 2; ++c) {
      double peak = 0.0;
      for (double v : r.output.channel(c)) peak = std::max(peak, std::abs(v));
      CHECK(peak == doctest::Approx(1.0).epsilon(1e-3));
    }
  }

  TEST_CASE("a single tone is degenerate") {
    CHECK_THROWS_AS(diplex(composite(1.0, 0.0), kFs, DiplexConfig{}), RankDeficientError);
  }

  TEST_CASE("configuration checks") {
    DiplexConfig same;
    same.f_b = same.f_a;
    CHECK_THROWS_AS(diplex(composite(1.0, 1.0), kFs, same), InvalidArgument);
    DiplexConfig high;
    high.f_b = 95e6;
    CHECK_THROWS_AS(diplex(composite(1.0, 1.0), kFs, high), InvalidArgument);
  }
}
