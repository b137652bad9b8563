#include <doctest.h>

#include "ddid/measures.hpp"
#include "ddid/rng.hpp"
#include "ddid/timefreq.hpp"
#include "oracles.hpp"

using namespace ddid;

namespace {

GaborExpansion random_expansion(Rng& rng, int terms, double spread = 2.0) {
  std::vector<GaborTerm> t;
  for (int k = 0; k < terms; ++k)
    t.push_back({rng.complex_normal(), Point(rng.uniform(-spread, spread), rng.uniform(-spread, spread))});
  return GaborExpansion(std::move(t));
}

}  // namespace

TEST_SUITE("timefreq") {

TEST_CASE("identity shift and unitarity") {
  Rng rng(31);
  const GaborExpansion x = random_expansion(rng, 4);
  const GaborExpansion y = tf_shift(x, Point(0, 0));
  for (double t : {-1.0, 0.0, 0.7})
    CHECK(std::abs(x.eval(t) - y.eval(t)) < 1e-14);
  for (int trial = 0; trial < 5; ++trial) {
    const Point lam(rng.uniform(-2, 2), rng.uniform(-2, 2));
    CHECK(m2_norm(tf_shift(x, lam)) == doctest::Approx(m2_norm(x)).epsilon(1e-12));
  }
}

TEST_CASE("commutation relation pi(l)pi(m) = e^{-2 pi i Re(l) Im(m)} pi(l+m)") {
  Rng rng(32);
  for (int trial = 0; trial < 5; ++trial) {
    const Point l(rng.uniform(-2, 2), rng.uniform(-2, 2));
    const Point m(rng.uniform(-2, 2), rng.uniform(-2, 2));
    const GaborExpansion lhs = tf_shift(tf_shift(GaborExpansion::gaussian(), m), l);
    const Complex phase(std::cos(-2.0 * kPi * l.tau * m.nu), std::sin(-2.0 * kPi * l.tau * m.nu));
    const GaborExpansion rhs = tf_shift(GaborExpansion::gaussian(), l + m) * phase;
    for (double t = -3.0; t <= 3.0; t += 0.37)
      CHECK(std::abs(lhs.eval(t) - rhs.eval(t)) < 1e-12);
  }
}

TEST_CASE("sampled shift agrees with closed form") {
  const SampledSignal phi = sample_gaussian(-8.0, 8.0, 1e-3);
  const Point lam(0.6, 1.3);
  const SampledSignal shifted = tf_shift(phi, lam);
  const GaborExpansion exact = tf_shift(GaborExpansion::gaussian(), lam);
  double max_err = 0.0;
  for (std::size_t k = 0; k < shifted.samples.size(); k += 997)
    max_err = std::max(max_err, std::abs(shifted.samples[k] - exact.eval(shifted.t_at(k))));
  CHECK(max_err < 1e-9);
  CHECK(m2_norm(shifted) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(tf_shift(phi, Point(9.0, 0)), numeric_guard_error);
}

TEST_CASE("gaussian ambiguity at the origin and against quadrature") {
  CHECK(gaussian_ambiguity(0, 0) == Complex(1.0, 0.0));
  auto phi = [](double t) { return Complex(gaussian_window(t), 0.0); };
  for (const Point lam : {Point(1.0, 0.0), Point(0.4, -1.1), Point(-0.9, 0.3)}) {
    const Complex oracle = oracles::stft_quadrature(phi, lam, -8.0, 8.0, 1e-3);
    CHECK(std::abs(gaussian_ambiguity(lam.tau, lam.nu) - oracle) < 1e-9);
  }
  // |A(tau,nu)| = |A(nu,tau)| (phi is its own Fourier transform)
  Rng rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    CHECK(std::abs(gaussian_ambiguity(a, b)) ==
          doctest::Approx(std::abs(gaussian_ambiguity(b, a))).epsilon(1e-12));
    CHECK(std::abs(gaussian_ambiguity(a, b)) ==
          doctest::Approx(std::abs(gaussian_ambiguity(-a, -b))).epsilon(1e-12));
  }
}

TEST_CASE("stft of the window at the origin is one; zero signal vanishes") {
  CHECK(stft_at(GaborExpansion::gaussian(), Point(0, 0)) == Complex(1.0, 0.0));
  const GaborExpansion zero;
  const TFGrid grid(-2, 2, -2, 2, 0.5, 0.5);
  const STFTField f = stft(zero, grid);
  for (const auto& v : f.values) CHECK(v == Complex(0.0, 0.0));
}

TEST_CASE("gabor and sampled stft paths agree") {
  const TFGrid grid(-2, 2, -2, 2, 0.1, 0.1);
  const STFTField exact = stft(GaborExpansion::gaussian(), grid);
  const STFTField quad = stft(sample_gaussian(-8.0, 8.0, 1e-3), grid);
  double max_err = 0.0;
  for (std::size_t k = 0; k < exact.values.size(); ++k)
    max_err = std::max(max_err, std::abs(exact.values[k] - quad.values[k]));
  CHECK(max_err < 1e-6);
}

TEST_CASE("M2 norm of the window is 1 and the M1 norm self-converges") {
  const TFGrid grid(-6, 6, -6, 6, 0.05, 0.05);
  CHECK(mp_norm(GaborExpansion::gaussian(), 2.0, grid) == doctest::Approx(1.0).epsilon(1e-4));
  const double m1a = mp_norm(GaborExpansion::gaussian(), 1.0, grid);
  const double m1b = mp_norm(GaborExpansion::gaussian(), 1.0, TFGrid(-6, 6, -6, 6, 0.025, 0.025));
  const double m1c = mp_norm(GaborExpansion::gaussian(), 1.0, TFGrid(-6, 6, -6, 6, 0.0125, 0.0125));
  CHECK(std::abs(m1b - m1a) < 1e-3);
  CHECK(std::abs(m1c - m1b) < 1e-3);
}

TEST_CASE("mp_norm homogeneity and the boundary-mass guard") {
  Rng rng(34);
  const GaborExpansion x = random_expansion(rng, 3, 1.0);
  const TFGrid grid(-7, 7, -7, 7, 0.1, 0.1);
  const Complex c(1.2, -0.4);
  CHECK(mp_norm(x * c, 1.5, grid) ==
        doctest::Approx(std::abs(c) * mp_norm(x, 1.5, grid)).epsilon(1e-10));
  CHECK_THROWS_AS(mp_norm(x, 2.0, TFGrid(-1.2, 1.2, -1.2, 1.2, 0.1, 0.1)), numeric_guard_error);
}

TEST_CASE("weighted M1 norm exceeds the unweighted one") {
  const TFGrid grid(-7, 7, -7, 7, 0.05, 0.05);
  const double plain = mp_norm(GaborExpansion::gaussian(), 1.0, grid, false);
  const double weighted = mp_norm(GaborExpansion::gaussian(), 1.0, grid, true);
  CHECK(weighted > plain);
}

TEST_CASE("synthesize singleton and linearity") {
  const SupportSet s({{0, 0}});
  const GaborExpansion y = synthesize(s, {Complex(1, 0)}, GaborExpansion::gaussian());
  REQUIRE(y.terms().size() == 1);
  CHECK(y.terms()[0].loc == Point(0, 0));
  CHECK(y.terms()[0].coeff == Complex(1, 0));
  CHECK_THROWS_AS(synthesize(s, {}, GaborExpansion::gaussian()), std::invalid_argument);

  Rng rng(35);
  const SupportSet ss(oracles::random_separated_points(rng, 5, 1.0, 6.0));
  std::vector<Complex> a(5), b(5);
  for (auto& v : a) v = rng.complex_normal();
  for (auto& v : b) v = rng.complex_normal();
  std::vector<Complex> ab(5);
  for (int i = 0; i < 5; ++i) ab[i] = a[i] + b[i];
  const GaborExpansion lhs = synthesize(ss, ab, GaborExpansion::gaussian());
  const GaborExpansion rhs =
      synthesize(ss, a, GaborExpansion::gaussian()) + synthesize(ss, b, GaborExpansion::gaussian());
  for (double t = -2.0; t <= 8.0; t += 0.61) CHECK(std::abs(lhs.eval(t) - rhs.eval(t)) < 1e-12);
}

TEST_CASE("synthesis norm via the Gram matrix") {
  Rng rng(36);
  const auto pts = oracles::random_separated_points(rng, 5, 1.0, 6.0);
  const SupportSet s(pts);
  std::vector<Complex> alpha(5);
  for (auto& v : alpha) v = rng.complex_normal();
  const double direct = m2_norm(synthesize(s, alpha, GaborExpansion::gaussian()));
  Complex quad(0, 0);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      quad += alpha[static_cast<std::size_t>(i)] * std::conj(alpha[static_cast<std::size_t>(j)]) *
              gabor_inner(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
  CHECK(direct * direct == doctest::Approx(quad.real()).epsilon(1e-8));
}

TEST_CASE("synthesis bound by rel * ||alpha|| * ||x||_M1") {
  Rng rng(37);
  const TFGrid m1grid(-8, 8, -8, 8, 0.05, 0.05);
  const double x_m1 = mp_norm(GaborExpansion::gaussian(), 1.0, m1grid);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto pts = oracles::random_separated_points(rng, 4, 0.8, 5.0);
    const SupportSet s(pts);
    std::vector<Complex> alpha(4);
    double a2 = 0.0;
    for (auto& v : alpha) {
      v = rng.complex_normal();
      a2 += std::norm(v);
    }
    const double lhs = m2_norm(synthesize(s, alpha, GaborExpansion::gaussian()));
    const double rel = relative_separation(s);
    worst = std::max(worst, lhs / (rel * std::sqrt(a2) * x_m1));
  }
  CHECK(worst < 3.0);  // one empirical constant across trials
}

TEST_CASE("adjoint identity <H(alpha), y> = <alpha, analyze(y)>") {
  Rng rng(38);
  for (int trial = 0; trial < 5; ++trial) {
    const auto pts = oracles::random_separated_points(rng, 4, 1.0, 5.0);
    const SupportSet s(pts);
    std::vector<Complex> alpha(4);
    for (auto& v : alpha) v = rng.complex_normal();
    const GaborExpansion y = random_expansion(rng, 3);
    const Complex lhs = inner(synthesize(s, alpha, GaborExpansion::gaussian()), y);
    const auto coeffs = analyze(y, s, GaborExpansion::gaussian());
    Complex rhs(0, 0);
    for (int i = 0; i < 4; ++i)
      rhs += alpha[static_cast<std::size_t>(i)] * std::conj(coeffs[static_cast<std::size_t>(i)]);
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("analyze basics") {
  const auto one = analyze(GaborExpansion::gaussian(), SupportSet({{0, 0}}), GaborExpansion::gaussian());
  REQUIRE(one.size() == 1);
  CHECK(std::abs(one[0] - Complex(1, 0)) < 1e-14);
  const auto zero = analyze(GaborExpansion(), SupportSet({{0, 0}, {1, 1}}), GaborExpansion::gaussian());
  for (const auto& v : zero) CHECK(v == Complex(0, 0));
}

TEST_CASE("sampled analyze matches the exact pairing") {
  const SampledSignal phi = sample_gaussian(-8, 8, 2e-3);
  const SupportSet s({{0.5, -0.3}});
  const TFGrid grid(-6, 6, -6, 6, 0.1, 0.1);
  const auto got = analyze(phi, s, phi, grid);
  const auto want = analyze(GaborExpansion::gaussian(), s, GaborExpansion::gaussian());
  CHECK(std::abs(got[0] - want[0]) < 1e-5);
}

TEST_CASE("weight extraction") {
  const std::vector<double> eps{0.4, 0.2, 0.1};
  // single unit atom at the origin
  CHECK(std::abs(weight_extract(GaborExpansion::gaussian(), Point(0, 0), eps) - Complex(1, 0)) <
        1e-3);
  // zero signal
  CHECK(weight_extract(GaborExpansion(), Point(0, 0), eps) == Complex(0, 0));
  // two atoms at distance 4: overlap e^{-8 pi} is negligible
  const DiscreteMeasure mu({{{-1.3, 0.4}, Complex(0.7, -0.2)}, {{2.7, 0.4}, Complex(-1.1, 0.5)}});
  const GaborExpansion y = synthesize(mu, GaborExpansion::gaussian());
  for (const auto& atom : mu.atoms()) {
    const Complex got = weight_extract(y, atom.location, eps);
    CHECK(std::abs(got - atom.weight) < 1e-3);
  }
  CHECK_THROWS_AS(weight_extract(y, Point(0, 0), {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("single-shift difference ratio converges to the quadrature slope") {
  const double slope = oracles::single_shift_slope_quadrature(-8, 8, 1e-4);
  double prev = 0.0;
  for (int k = 4; k <= 10; ++k) {
    const double eps = std::pow(2.0, -k);
    const GaborExpansion diff = synthesize(SupportSet({{0, 0}}), {Complex(1, 0)}, GaborExpansion::gaussian()) -
                                synthesize(SupportSet({{0, eps}}), {Complex(1, 0)}, GaborExpansion::gaussian());
    const double ratio = m2_norm(diff) / eps;
    if (k > 4) CHECK(std::abs(ratio - prev) / prev < 0.02);
    prev = ratio;
  }
  CHECK(prev == doctest::Approx(slope).epsilon(0.01));
}

TEST_CASE("perturbation bound behaves like a single constant") {
  Rng rng(39);
  std::vector<double> ratios;
  for (int trial = 0; trial < 200; ++trial) {
    const auto pts = oracles::random_separated_points(rng, 2 + trial % 9, 1.0, 8.0);
    const SupportSet s(pts);
    std::vector<Complex> alpha(pts.size());
    double a2 = 0.0;
    for (auto& v : alpha) {
      v = rng.complex_normal();
      a2 += std::norm(v);
    }
    std::vector<Point> eps(pts.size());
    double eps_inf = 0.0;
    for (auto& e : eps) {
      e = Point(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7));
      eps_inf = std::max(eps_inf, e.abs());
    }
    const GaborExpansion diff = synthesize(s, alpha, GaborExpansion::gaussian()) -
                                perturbed_synthesis(s, alpha, eps);
    ratios.push_back(m2_norm(diff) / (eps_inf * std::sqrt(a2)));
  }
  std::sort(ratios.begin(), ratios.end());
  const double median = ratios[ratios.size() / 2];
  CHECK(ratios.back() <= 3.0 * median);
}

}  // TEST_SUITE
