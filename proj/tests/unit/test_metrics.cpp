#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "xtalk/error.hpp"
#include "xtalk/metrics.hpp"
#include "xtalk/pipeline.hpp"

using namespace xtalk;

namespace {

const double kFs = 8e6;

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("ISR") {
    const std::size_t n = 8000;
    const auto t = oracle::tone(n, 1.0e6, kFs);
    const auto o = oracle::tone(n, 1.1e6, kFs);  // orthogonal over whole cycles

    SUBCASE("exact copy and scaled copies hit the sentinel") {
      CHECK(isr(t, t) == Decibels::neg_inf());
      std::vector<double> s(t);
      for (double& v : s) v *= -3.0;
      CHECK(isr(s, t) == Decibels::neg_inf());
    }
    SUBCASE("orthogonal interference at 0.1 amplitude") {
      std::vector<double> e(n);
      for (std::size_t k = 0; k < n; ++k) e[k] = t[k] + 0.1 * o[k];
      const auto d = isr(e, t);
      REQUIRE(d.is_finite());
      CHECK(std::abs(d.value + 20.0) < 0.1);
    }
    SUBCASE("invariant to scale and sign of the estimate") {
      std::vector<double> e(n);
      for (std::size_t k = 0; k < n; ++k) e[k] = t[k] + 0.03 * o[k] + 0.01 * std::sin(0.37 * k);
      const double ref = isr(e, t).value;
      for (double c : {-5.0, -0.01, 0.2, 1e6}) {
        std::vector<double> s(e);
        for (double& v : s) v *= c;
        CHECK(isr(s, t).value == doctest::Approx(ref).epsilon(1e-9));
      }
    }
    SUBCASE("orthogonal error power ratio") {
      for (double amp : {0.5, 0.02, 3.0}) {
        std::vector<double> e(n);
        for (std::size_t k = 0; k < n; ++k) e[k] = t[k] + amp * o[k];
        CHECK(std::abs(isr(e, t).value - 10 * std::log10(amp * amp)) < 0.1);
      }
    }
    SUBCASE("preconditions") {
      CHECK_THROWS_AS(isr(t, std::vector<double>(n, 0.0)), InvalidArgument);
      CHECK_THROWS_AS(isr(t, std::span<const double>(o).subspan(0, 10)), InvalidArgument);
    }
  }

  TEST_CASE("SNR") {
    const std::vector<double> a{1, -1, 1, -1}, b{-1, 1, 1, -1};
    CHECK(snr(a, b).value == doctest::Approx(0.0));
    std::vector<double> noise{0.1, -0.1, 0.1, -0.1};
    CHECK(snr(a, noise).value == doctest::Approx(20.0));
    CHECK(snr(a, std::vector<double>(4, 0.0)) == Decibels::pos_inf());
    CHECK_THROWS_AS(snr(a, std::vector<double>(3, 0.0)), InvalidArgument);
  }

  TEST_CASE("decibel sentinels serialize as words") {
    CHECK(Decibels::neg_inf().to_string() == "neg_sentinel");
    CHECK(Decibels::pos_inf().to_string() == "pos_sentinel");
    CHECK(Decibels::parse("neg_sentinel") == Decibels::neg_inf());
    const auto d = Decibels::finite(-42.123456789);
    CHECK(Decibels::parse(d.to_string()) == d);
    CHECK(Decibels::neg_inf().as_double() == -std::numeric_limits<double>::infinity());
    CHECK(Decibels::from_ratio(0.01).value == doctest::Approx(-20.0));
    CHECK(Decibels::from_ratio(0.0) == Decibels::neg_inf());
    CHECK_THROWS(Decibels::parse("-inf"));
  }

  TEST_CASE("envelope depth") {
    const std::size_t n = 1 << 15;
    const auto a = oracle::tone(n, 1.0e6, kFs), b = oracle::tone(n, 1.1e6, kFs);

    SUBCASE("pure tone is flat") { CHECK(envelope_depth(a, kFs, 1.0e6, 1.1e6) < 1e-3); }
    SUBCASE("equal tones beat to full depth") {
      std::vector<double> s(n);
      for (std::size_t k = 0; k < n; ++k) s[k] = a[k] + b[k];
      CHECK(envelope_depth(s, kFs, 1.0e6, 1.1e6) == doctest::Approx(1.0).epsilon(1e-2));
    }
    SUBCASE("coupled scenario before and after correction") {
      ScenarioConfig sc;
      sc.kind = ScenarioKind::Quiet;
      sc.n = 1 << 16;
      const auto scen = generate_scenario(sc);
      const std::vector<double> freqs{1.0e6, 1.1e6};
      const auto sep = separate(scen.mixed, FastIcaConfig{}, freqs);
      for (std::size_t c = 0; c < 2; ++c) {
        const double before = envelope_depth(scen.mixed.channel(c), kFs, freqs[c], freqs[1 - c]);
        const double after = envelope_depth(sep.components.channel(c), kFs, freqs[c], freqs[1 - c]);
        CHECK(before > 0.2);
        CHECK(before < 1.0);
        CHECK(after < 0.05);
      }
    }
    SUBCASE("zero envelope is degenerate") {
      CHECK_THROWS_AS(envelope_depth(std::vector<double>(n, 0.0), kFs, 1.0e6, 1.1e6), NumericError);
    }
  }

  TEST_CASE("strong coupling: correction always reduces envelope depth") {
    ScenarioConfig sc;
    sc.n = 1 << 16;
    sc.coupling = {{1, 0.9}, {0.9, 1}};
    sc.snr_db = 30.0;
    const std::vector<double> freqs{1.0e6, 1.1e6};
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      sc.seed = seed;
      const auto scen = generate_scenario(sc);
      const auto sep = separate(scen.mixed, FastIcaConfig{}, freqs);
      for (std::size_t c = 0; c < 2; ++c)
        CHECK(envelope_depth(scen.mixed.channel(c), kFs, freqs[c], freqs[1 - c]) >
              envelope_depth(sep.components.channel(c), kFs, freqs[c], freqs[1 - c]));
    }
  }

  TEST_CASE("density SNR improves with correction") {
    ScenarioConfig sc;
    sc.coupling = {{1, 0.9}, {0.9, 1}};
    const auto scen = generate_scenario(sc);
    const std::vector<double> freqs{1.0e6, 1.1e6};
    const auto sep = separate(scen.mixed, FastIcaConfig{}, freqs);
    auto density_snr = [&](const MultichannelSignal& s) {
      const auto rec = recover_density(s, sc.params);
      const auto truth = reference_truth(scen.tracks.density, 8, rec.density.samples.size(), rec.reference);
      std::vector<double> sig, err;
      for (std::size_t k = rec.density.settle; k + rec.density.settle < truth.size(); ++k) {
        sig.push_back(truth[k]);
        err.push_back(rec.density.samples[k] - truth[k]);
      }
      return snr(sig, err).as_double();
    };
    const double with = density_snr(sep.components), without = density_snr(scen.mixed);
    MESSAGE("density SNR with correction " << with << " dB, without " << without << " dB");
    CHECK(with > without);
  }

  TEST_CASE("gain matrix") {
    const Matrix a{{1, 0.4}, {0.3, 1}};
    const std::vector<double> std1{1.0, 1.0};
    CHECK(is_signed_permutation(gain_matrix(inverse(a), a, std1), 0.99, 0.02));
    const Matrix swap{{0, -1}, {1, 0}};
    CHECK(is_signed_permutation(gain_matrix(swap * inverse(a), a, std1), 0.99, 0.02));
    CHECK_FALSE(is_signed_permutation(gain_matrix(Matrix::identity(2), a, std1), 0.99, 0.02));
    const std::vector<double> half{0.5, 2.0};
    const auto g = gain_matrix(Matrix::identity(2), Matrix::identity(2), half);
    CHECK(g(0, 0) == 0.5);
    CHECK(g(1, 1) == 2.0);
    CHECK_THROWS_AS(gain_matrix(Matrix::identity(2), a, std::vector<double>{1.0}), InvalidArgument);
  }

  TEST_CASE("cross-tone residual") {
    const std::size_t n = 4000;
    const auto a = oracle::tone(n, 1.0e6, kFs), b = oracle::tone(n, 1.1e6, kFs, 1.0, 0.7);
    std::vector<double> s(n);
    for (std::size_t k = 0; k < n; ++k) s[k] = a[k] + 0.1 * b[k] + 0.5;
    CHECK(cross_tone_residual(s, kFs, 1.0e6, 1.1e6).value == doctest::Approx(-20.0).epsilon(1e-9));
    CHECK(cross_tone_residual(a, kFs, 1.0e6, 1.1e6).as_double() < -200.0);
  }
}
