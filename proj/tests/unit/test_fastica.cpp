#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "oracles.hpp"
#include "xtalk/error.hpp"
#include "xtalk/fastica.hpp"
#include "xtalk/metrics.hpp"
#include "xtalk/pipeline.hpp"
#include "xtalk/preprocess.hpp"

using namespace xtalk;
using oracle::kPi;

namespace {

const double kFs = 8e6;

MultichannelSignal two_tones(std::size_t n) {
  return MultichannelSignal::from_channels({oracle::tone(n, 1.0e6, kFs), oracle::tone(n, 1.1e6, kFs)}, kFs);
}

/// E G(nu) by adaptive quadrature of G(u) phi(u) over [0, inf) (G is even).
double reference_by_quadrature(Contrast c, double a) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [&](double u) { return contrast_G(u, c, a) * std::exp(-0.5 * u * u) / std::sqrt(2 * kPi); };
  return 2.0 * integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity());
}

std::vector<double> project(const MultichannelSignal& b, std::span<const double> w) {
  std::vector<double> y(b.length(), 0.0);
  for (std::size_t c = 0; c < b.channels(); ++c)
    for (std::size_t k = 0; k < b.length(); ++k) y[k] += w[c] * b.channel(c)[k];
  return y;
}

double cross_tone_db(std::span<const double> y, std::size_t own_bin, std::size_t other_bin) {
  return 10 * std::log10(oracle::bin_power(y, other_bin) / oracle::bin_power(y, own_bin));
}

}  // namespace

TEST_SUITE("fastica") {
  TEST_CASE("contrast values at the origin and in the tails") {
    for (double a : {1.0, 1.5, 2.0}) {
      const std::vector<double> u{0.0};
      const auto v = contrast_eval(u, Contrast::LogCosh, a);
      CHECK(v.g[0] == 0.0);
      CHECK(v.dg[0] == a);
    }
    const std::vector<double> u{0.0, 40.0, -40.0, 1e300, -1e300};
    const auto g = contrast_eval(u, Contrast::Gauss, 1.0);
    CHECK(g.g[0] == 0.0);
    CHECK(g.dg[0] == 1.0);
    CHECK(std::abs(g.g[1]) < 1e-300);
    CHECK(std::abs(g.g[2]) < 1e-300);
    const auto lc = contrast_eval(u, Contrast::LogCosh, 2.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
      CHECK(std::isfinite(lc.g[i]));
      CHECK(std::isfinite(lc.dg[i]));
      CHECK(std::isfinite(g.g[i]));
      CHECK(std::isfinite(contrast_G(u[i], Contrast::LogCosh, 2.0)));
    }
  }

  TEST_CASE("g is the derivative of G") {
    const double h = 1e-5;
    const std::vector<double> u{-2.0, -1.0, 0.5, 3.0};
    for (Contrast c : {Contrast::LogCosh, Contrast::Gauss}) {
      const auto v = contrast_eval(u, c, 1.5);
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double fd = (contrast_G(u[i] + h, c, 1.5) - contrast_G(u[i] - h, c, 1.5)) / (2 * h);
        CHECK(std::abs(v.g[i] - fd) < 1e-6);
      }
    }
  }

  TEST_CASE("gaussian reference constants") {
    CHECK(gaussian_reference(Contrast::Gauss, 1.0) == -1.0 / std::sqrt(2.0));
    CHECK(std::abs(reference_by_quadrature(Contrast::Gauss, 1.0) + 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(gaussian_reference(Contrast::LogCosh, 1.0) - reference_by_quadrature(Contrast::LogCosh, 1.0)) < 1e-7);
    for (double a : {1.25, 1.5, 1.75, 2.0})
      CHECK(std::abs(gaussian_reference(Contrast::LogCosh, a) - reference_by_quadrature(Contrast::LogCosh, a)) < 1e-4);
    const auto& gh = gauss_hermite_32();
    REQUIRE(gh.nodes.size() == 32);
    double wsum = 0.0, x2 = 0.0;
    for (std::size_t i = 0; i < 32; ++i) {
      wsum += gh.weights[i];
      x2 += gh.weights[i] * gh.nodes[i] * gh.nodes[i];
    }
    CHECK(wsum == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
    CHECK(x2 == doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-13));
  }

  TEST_CASE("negentropy estimate") {
    SUBCASE("gaussian samples score near zero") {
      std::mt19937_64 rng(2);
      std::normal_distribution<double> nd;
      std::vector<double> y(1'000'000);
      for (double& v : y) v = nd(rng);
      const double m = oracle::mean(y), sd = std::sqrt(oracle::variance(y));
      for (double& v : y) v = (v - m) / sd;
      CHECK(negentropy_estimate(y, Contrast::LogCosh, 1.0) < 1e-4);
      CHECK(negentropy_estimate(y, Contrast::Gauss, 1.0) < 1e-4);
    }
    SUBCASE("sinusoid is sub-gaussian") {
      // y = sqrt(2) sin(theta): E[-exp(-y^2/2)] = -exp(-1/2) I0(1/2).
      // Incommensurate frequency so the phases fill the circle evenly.
      const auto y = oracle::tone(1'000'000, 0.1234567891, 1.0, std::sqrt(2.0), 0.1);
      const double eg = -std::exp(-0.5) * std::cyl_bessel_i(0.0, 0.5);
      const double expected = std::pow(eg + 1.0 / std::sqrt(2.0), 2);
      CHECK(eg + 1.0 / std::sqrt(2.0) > 0.0);
      CHECK(negentropy_estimate(y, Contrast::Gauss, 1.0) == doctest::Approx(expected).epsilon(1e-3));
      CHECK(negentropy_estimate(y, Contrast::LogCosh, 1.0) > 1e-4);
    }
    SUBCASE("even in its argument") {
      auto y = oracle::tone(8000, 1e6, kFs, std::sqrt(2.0), 0.3);
      std::vector<double> neg(y);
      for (double& v : neg) v = -v;
      for (Contrast c : {Contrast::LogCosh, Contrast::Gauss})
        CHECK(negentropy_estimate(y, c, 1.3) == negentropy_estimate(neg, c, 1.3));
    }
    SUBCASE("requires standardized input") {
      const auto y = oracle::tone(8000, 1e6, kFs);  // variance 1/2
      CHECK_THROWS_AS(negentropy_estimate(y, Contrast::Gauss, 1.0), InvalidArgument);
    }
  }

  TEST_CASE("one-unit fixed point") {
    const auto w = whiten(two_tones(8000));
    const FastIcaConfig cfg;

    SUBCASE("independent tones, start at e1") {
      const std::vector<double> e1{1.0, 0.0};
      const auto r = fit_one_unit(w.signal, e1, cfg);
      CHECK(r.converged);
      CHECK(r.iterations <= cfg.max_iter);
      CHECK(std::hypot(r.w[0], r.w[1]) == doctest::Approx(1.0).epsilon(1e-12));
      const auto y = project(w.signal, r.w);
      const bool first = oracle::bin_power(y, 1000) > oracle::bin_power(y, 1100);
      CHECK(cross_tone_db(y, first ? 1000 : 1100, first ? 1100 : 1000) < -60.0);
    }
    SUBCASE("start at a fixed point") {
      const std::vector<double> e1{1.0, 0.0};
      const auto r = fit_one_unit(w.signal, e1, cfg);
      const auto again = fit_one_unit(w.signal, r.w, cfg);
      CHECK(again.converged);
      CHECK(again.iterations == 1);
    }
    SUBCASE("mirrored seed finds the same component") {
      const std::vector<double> w0{0.6, 0.8}, m0{-0.6, -0.8};
      const auto a = fit_one_unit(w.signal, w0, cfg);
      const auto b = fit_one_unit(w.signal, m0, cfg);
      CHECK(std::abs(std::abs(a.w[0] * b.w[0] + a.w[1] * b.w[1]) - 1.0) < 1e-9);
    }
    SUBCASE("non-unit start is rejected") {
      const std::vector<double> w0{1.0, 1.0};
      CHECK_THROWS_AS(fit_one_unit(w.signal, w0, cfg), InvalidArgument);
    }
    SUBCASE("iteration cap is reported, not thrown") {
      FastIcaConfig tight;
      tight.max_iter = 1;
      tight.tol = 1e-300;
      const std::vector<double> w0{0.6, 0.8};
      const auto r = fit_one_unit(w.signal, w0, tight);
      CHECK_FALSE(r.converged);
      CHECK(r.iterations == 1);
    }
  }

  TEST_CASE("multi-unit fit") {
    const Matrix a{{1.0, 0.4}, {0.3, 1.0}};
    const auto clean = two_tones(8000);
    const auto mixed = apply_crosstalk(clean, MixingModel(a));
    const auto white = whiten(mixed);
    const auto stds = channel_std(clean);

    for (auto ortho : {Orthogonalization::Symmetric, Orthogonalization::Deflation}) {
      CAPTURE(to_string(ortho));
      FastIcaConfig cfg;
      cfg.ortho = ortho;
      const auto r = fit(white, cfg);
      CHECK(r.all_converged());
      CHECK(max_abs_diff(r.w * r.w.transposed(), Matrix::identity(2)) < 1e-8);
      for (std::size_t i = 0; i < 2; ++i) {
        const auto row = r.w.row(i);
        CHECK(std::abs(std::hypot(row[0], row[1]) - 1.0) < 1e-10);
      }
      CHECK(max_abs_diff(r.w_full, r.w * white.transform.whitener) < 1e-15);
      const auto g = gain_matrix(r.w_full, a, stds);
      CHECK(is_signed_permutation(g, 0.999, 1e-3));
      CHECK(fit(white, cfg).w == r.w);
    }
  }

  TEST_CASE("single channel reduces to one unit") {
    const auto b = whiten(MultichannelSignal::single(oracle::tone(800, 1e6, kFs), kFs));
    const auto r = fit(b, FastIcaConfig{});
    const std::vector<double> w0{1.0};
    const auto u = fit_one_unit(b.signal, w0, FastIcaConfig{});
    CHECK(std::abs(r.w(0, 0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.w(0, 0) * u.w[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.converged[0]);
  }

  TEST_CASE("negating the data changes rows by sign only") {
    const auto mixed = apply_crosstalk(two_tones(8000), MixingModel({{1.0, 0.5}, {0.2, 1.0}}));
    Matrix neg = mixed.data();
    neg *= -1.0;
    const MultichannelSignal nmixed(neg, kFs);
    const std::vector<double> freqs{1.0e6, 1.1e6};
    const auto a = separate(mixed, FastIcaConfig{}, freqs);
    const auto b = separate(nmixed, FastIcaConfig{}, freqs);
    for (std::size_t i = 0; i < 2; ++i) {
      const double d = a.result.w(i, 0) * b.result.w(i, 0) + a.result.w(i, 1) * b.result.w(i, 1);
      CHECK(std::abs(std::abs(d) - 1.0) < 1e-9);
    }
    CHECK(max_abs_diff(a.components.data(), b.components.data()) < 1e-9);
  }

  TEST_CASE("the solution maximizes negentropy") {
    const auto mixed = apply_crosstalk(two_tones(8000), MixingModel({{1.0, 0.4}, {0.3, 1.0}}));
    const auto b = whiten(mixed);
    const auto r = fit(b, FastIcaConfig{});
    double best = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
      best = std::max(best, negentropy_estimate(project(b.signal, r.w.row(i)), Contrast::LogCosh, 1.0));
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
    for (int i = 0; i < 100; ++i) {
      const double t = ang(rng);
      const std::vector<double> w{std::cos(t), std::sin(t)};
      CHECK(negentropy_estimate(project(b.signal, w), Contrast::LogCosh, 1.0) <= best + 1e-12);
    }
  }

  TEST_CASE("convergence over 50 seeds with mild noise") {
    ScenarioConfig sc;
    sc.n = 1 << 16;
    sc.snr_db = 40.0;
    int worst = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      sc.seed = seed;
      const auto scen = generate_scenario(sc);
      FastIcaConfig cfg;
      cfg.seed = seed;
      const auto r = fit(whiten(scen.mixed), cfg);
      CHECK(r.all_converged());
      for (int it : r.iterations) worst = std::max(worst, it);
    }
    CHECK(worst <= 100);
  }

  TEST_CASE("unmixing") {
    SUBCASE("identity mixing of white sources") {
      std::mt19937_64 rng(4);
      std::uniform_real_distribution<double> u(-std::sqrt(3.0), std::sqrt(3.0));
      Matrix src(2, 20000);
      for (double& v : src.values()) v = u(rng);
      const MultichannelSignal s(src, 1.0);
      const auto w = whiten(s);
      const auto r = fit(w, FastIcaConfig{});
      const auto y = unmix(s, r, w.transform);
      for (std::size_t i = 0; i < 2; ++i) {
        const double c0 = std::abs(oracle::correlation(y.channel(i), s.channel(0)));
        const double c1 = std::abs(oracle::correlation(y.channel(i), s.channel(1)));
        CHECK(std::max(c0, c1) > 0.999);
      }
    }
    SUBCASE("strong coupling on noiseless carriers") {
      const auto clean = two_tones(1 << 16);
      const auto mixed = apply_crosstalk(clean, MixingModel({{1, 0.9}, {0.9, 1}}));
      const std::vector<double> freqs{1.0e6, 1.1e6};
      const auto sep = separate(mixed, FastIcaConfig{}, freqs);
      for (std::size_t c = 0; c < 2; ++c) {
        CHECK(isr(sep.components.channel(c), clean.channel(c)).as_double() <= -40.0);
        CHECK(oracle::correlation(sep.components.channel(c), clean.channel(c)) > 0.999);
      }
    }
    SUBCASE("dimension mismatch") {
      const auto w = whiten(two_tones(800));
      const auto r = fit(w, FastIcaConfig{});
      const auto three = MultichannelSignal(Matrix(3, 800, 1.0), kFs);
      CHECK_THROWS_AS(unmix(three, r, w.transform), InvalidArgument);
    }
  }

  TEST_CASE("component identification") {
    const std::size_t n = 8000;
    const std::vector<double> freqs{1.0e6, 1.1e6};
    const auto a = oracle::tone(n, 1.0e6, kFs), b = oracle::tone(n, 1.1e6, kFs);

    SUBCASE("label order gives identity") {
      CHECK(identify_components(MultichannelSignal::from_channels({a, b}, kFs), freqs) == Assignment::identity(2));
    }
    SUBCASE("swapped components") {
      const auto as = identify_components(MultichannelSignal::from_channels({b, a}, kFs), freqs);
      CHECK(as.order == std::vector<std::size_t>{1, 0});
      CHECK(as.sign == std::vector<int>{1, 1});
    }
    SUBCASE("sign follows the sine-reference convention") {
      std::vector<double> na(a);
      for (double& v : na) v = -v;
      const auto as = identify_components(MultichannelSignal::from_channels({na, b}, kFs), freqs);
      CHECK(as.sign == std::vector<int>{-1, 1});
    }
    SUBCASE("5% residual crosstalk still resolves") {
      std::vector<double> x(n), y(n);
      for (std::size_t k = 0; k < n; ++k) {
        x[k] = b[k] + 0.05 * a[k];
        y[k] = a[k] + 0.05 * b[k];
      }
      const auto as = identify_components(MultichannelSignal::from_channels({x, y}, kFs), freqs);
      CHECK(as.order == std::vector<std::size_t>{1, 0});
    }
    SUBCASE("collision is an error") {
      CHECK_THROWS_AS(identify_components(MultichannelSignal::from_channels({a, a}, kFs), freqs), IdentificationError);
    }
  }

  TEST_CASE("symmetric orthogonalization") {
    const auto q = symmetric_orthogonalize({{1.0, 0.3, 0.1}, {0.2, 2.0, 0.0}, {0.5, 0.1, 1.5}});
    CHECK(max_abs_diff(q * q.transposed(), Matrix::identity(3)) < 1e-10);
  }

  TEST_CASE("configuration") {
    FastIcaConfig c;
    CHECK_NOTHROW(c.validate());
    c.a = 2.5;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.tol = 0.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.max_iter = 0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    CHECK(parse_contrast("gauss") == Contrast::Gauss);
    CHECK(parse_orthogonalization("deflation") == Orthogonalization::Deflation);
    CHECK_THROWS(parse_contrast("kurtosis"));
  }
}
