#include <doctest.h>

#include "ddid/density.hpp"
#include "ddid/measures.hpp"
#include "ddid/rng.hpp"
#include "oracles.hpp"

using namespace ddid;

TEST_SUITE("density") {

TEST_CASE("sliding count basics") {
  const SupportSet s({{0, 0}, {0.5, 0}, {3, 3}});
  CHECK(sliding_count(s, 1.0, Boundary::Closed) == 2);
  const SupportSet grid = lattice_points(SquareLattice(1.0), Rect{0, 0, 5, 5});
  CHECK(sliding_count(grid, 2.0, Boundary::Closed) == 9);
  CHECK(sliding_count(grid, 2.0, Boundary::Open) == 4);
  CHECK_THROWS_AS(sliding_count(s, 0.0, Boundary::Closed), std::invalid_argument);
}

TEST_CASE("sliding count equals brute force on random sets") {
  Rng rng(21);
  for (int trial = 0; trial < 3; ++trial) {
    const auto pts = oracles::random_points(rng, 200, 12.0);
    const double r = rng.uniform(0.5, 4.0);
    CHECK(sliding_count(SupportSet(pts), r, Boundary::Closed) ==
          oracles::sliding_count_bruteforce(pts, r, true));
    CHECK(sliding_count(SupportSet(pts), r, Boundary::Open) ==
          oracles::sliding_count_bruteforce(pts, r, false));
  }
}

TEST_CASE("sliding count translation invariance and open<=closed") {
  Rng rng(22);
  const auto pts = oracles::random_points(rng, 60, 9.0);
  const SupportSet s(pts);
  const SupportSet t = translate(s, Point(rng.uniform(-3, 3), rng.uniform(-3, 3)));
  for (double r : {0.7, 1.3, 2.9}) {
    CHECK(sliding_count(s, r, Boundary::Closed) == sliding_count(t, r, Boundary::Closed));
    CHECK(sliding_count(s, r, Boundary::Open) <= sliding_count(s, r, Boundary::Closed));
  }
}

TEST_CASE("density curve of the unit lattice approaches gamma^-2") {
  for (double gamma : {1.0, 1.2}) {
    const SquareLattice lat(gamma);
    const SupportSet pts = lattice_points(lat, Rect{0, 0, 40 * gamma, 40 * gamma});
    std::vector<double> rs;
    for (double r = 6.0; r <= 30.0; r += 4.0) rs.push_back(r);
    const DensityCurve c = density_estimate({pts}, rs);
    const double target = 1.0 / (gamma * gamma);
    CHECK(c.tail_max == doctest::Approx(target).epsilon(0.10));
  }
}

TEST_CASE("density curve of the hexagonal critical lattice approaches 1/2") {
  const double r = 2.0 * std::pow(3.0, -0.25);
  const SupportSet pts = hexagonal_points(r, Rect{0, 0, 40, 40});
  std::vector<double> rs;
  for (double w = 6.0; w <= 30.0; w += 4.0) rs.push_back(w);
  const DensityCurve c = density_estimate({pts}, rs);
  CHECK(c.tail_max == doctest::Approx(0.5).epsilon(0.10));
}

TEST_CASE("density of the empty set is zero") {
  const DensityCurve c = density_estimate({SupportSet()}, {1.0, 2.0});
  for (const auto& e : c.entries) CHECK(e.ratio == 0.0);
}

TEST_CASE("lattice points in boxes") {
  CHECK(lattice_points(SquareLattice(1.0), Rect{0, 0, 2, 2}).size() == 9);
  const SupportSet one = lattice_points(SquareLattice(2.0), Rect{0, 0, 1, 1});
  REQUIRE(one.size() == 1);
  CHECK(one[0] == Point(0, 0));

  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const double g = rng.uniform(0.3, 2.0);
    const double x0 = rng.uniform(-5, 5), y0 = rng.uniform(-5, 5);
    const Rect box{x0, y0, x0 + rng.uniform(0.5, 6), y0 + rng.uniform(0.5, 6)};
    // index-range formula
    const long nx = static_cast<long>(std::floor(box.x1 / g)) - static_cast<long>(std::ceil(box.x0 / g)) + 1;
    const long ny = static_cast<long>(std::floor(box.y1 / g)) - static_cast<long>(std::ceil(box.y0 / g)) + 1;
    CHECK(static_cast<long>(lattice_points(SquareLattice(g), box).size()) ==
          std::max(0L, nx) * std::max(0L, ny));
  }
}

TEST_CASE("uniformly close enumeration: identity on the lattice") {
  // A finite truncation of the unit lattice clears theta = 0.8 only once the
  // window holds the whole set (49 points <= 0.8 * 8^2).
  const SupportSet pts = lattice_points(SquareLattice(1.0), Rect{0, 0, 6, 6});
  const auto res = uniformly_close_enumeration(pts, 1.0, 0.8, 8.0);
  REQUIRE(res.ok);
  double max_offset = 0.0;
  for (const auto& pr : res.pairing) {
    const Complex w(1.0 * pr.m, 1.0 * pr.n);
    max_offset = std::max(max_offset, std::abs(pts[pr.point_index].to_complex() - w));
  }
  CHECK(max_offset == 0.0);  // identity pairing
  CHECK(max_offset <= res.r_prime);
  // indices injective
  std::vector<std::pair<long, long>> idx;
  for (const auto& pr : res.pairing) idx.emplace_back(pr.m, pr.n);
  std::sort(idx.begin(), idx.end());
  CHECK(std::adjacent_find(idx.begin(), idx.end()) == idx.end());
}

TEST_CASE("uniformly close enumeration: jittered lattice") {
  // Any open 4-window captures 4 jittered unit columns, so the Rayleigh
  // bound theta R^2 only clears the count from R = 12 up at theta = 0.8.
  Rng rng(24);
  std::vector<Point> pts;
  for (int m = 0; m <= 8; ++m)
    for (int n = 0; n <= 8; ++n)
      pts.emplace_back(m + rng.uniform(-0.1, 0.1), n + rng.uniform(-0.1, 0.1));
  const auto res = uniformly_close_enumeration(SupportSet(pts), 1.05, 0.8, 12.0);
  REQUIRE(res.ok);
  double max_offset = 0.0;
  for (const auto& pr : res.pairing) {
    const Complex w = SquareLattice(1.05).site(pr.m, pr.n);
    max_offset = std::max(max_offset, std::abs(pts[pr.point_index].to_complex() - w));
  }
  CHECK(max_offset <= res.r_prime);
  CHECK(res.pairing.size() == pts.size());
}

TEST_CASE("uniformly close enumeration: failure reports the window") {
  // 9 points crammed into a unit square violate theta R^2 = 0.5*4 = 2 at R=2.
  std::vector<Point> pts;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) pts.emplace_back(0.2 * i, 0.2 * j);
  const auto res = uniformly_close_enumeration(SupportSet(pts), 1.2, 0.5, 2.0);
  CHECK_FALSE(res.ok);
  CHECK(res.violating_window.has_value());
  CHECK(res.failure.find("Rayleigh") != std::string::npos);

  const auto res2 = uniformly_close_enumeration(SupportSet(pts), 1.2, 0.8, 2.0);
  CHECK_FALSE(res2.ok);  // theta >= gamma^-2
  CHECK(res2.failure.find("gamma") != std::string::npos);
}

TEST_CASE("nested squares: n=0 returns the input square") {
  const NestedSquare k{Point(0, 0), std::sqrt(2.0) * 2.0};
  const SupportSet y({{1, 1}, {0.5, 0.3}});
  const auto chain = nested_squares(k, y, 0);
  REQUIRE(chain.size() == 1);
  CHECK(chain[0].side == doctest::Approx(k.side));
}

TEST_CASE("nested squares: clustered quadrant is found") {
  // side sqrt(2)(2+1), 5 points in the lower-left corner
  const NestedSquare k{Point(0, 0), std::sqrt(2.0) * 3.0};
  std::vector<Point> pts;
  for (int i = 0; i < 5; ++i) pts.emplace_back(0.1 + 0.05 * i, 0.1);
  const auto chain = nested_squares(k, SupportSet(pts), 1);
  REQUIRE(chain.size() == 2);
  CHECK(chain[0].side == doctest::Approx(std::sqrt(2.0) * 2.0));
  CHECK(chain[0].corner == Point(0, 0));
}

TEST_CASE("nested squares: properties hold on random admissible inputs") {
  Rng rng(25);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 2;
    const double side = std::sqrt(2.0) * (std::pow(2.0, n) + 1.0);
    std::vector<Point> pts;
    const long need = (1L << (2 * n)) + 1;
    for (long i = 0; i < need + 5; ++i)
      pts.emplace_back(rng.uniform(0.0, side), rng.uniform(0.0, side));
    const NestedSquare k{Point(0, 0), side};
    const auto chain = nested_squares(k, SupportSet(pts), n);
    REQUIRE(chain.size() == static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
      const auto& sq = chain[static_cast<std::size_t>(j)];
      CHECK(sq.side == doctest::Approx(std::sqrt(2.0) * (std::pow(2.0, j) + 1.0)));
      int cnt = 0;
      for (const auto& p : pts)
        if (sq.contains(p)) ++cnt;
      CHECK(cnt >= (1L << (2 * j)) + 1);
      if (j < n) {
        const auto& up = chain[static_cast<std::size_t>(j) + 1];
        // containment and shared corner
        CHECK(sq.corner.tau >= up.corner.tau - 1e-12);
        CHECK(sq.corner.nu >= up.corner.nu - 1e-12);
        CHECK(sq.corner.tau + sq.side <= up.corner.tau + up.side + 1e-12);
        CHECK(sq.corner.nu + sq.side <= up.corner.nu + up.side + 1e-12);
        const bool shares_x = sq.corner.tau == doctest::Approx(up.corner.tau) ||
                              sq.corner.tau + sq.side == doctest::Approx(up.corner.tau + up.side);
        const bool shares_y = sq.corner.nu == doctest::Approx(up.corner.nu) ||
                              sq.corner.nu + sq.side == doctest::Approx(up.corner.nu + up.side);
        CHECK(shares_x);
        CHECK(shares_y);
      }
    }
  }
}

TEST_CASE("folkman-graham bound") {
  CHECK(folkman_graham_bound(1.0, 4.0, 1.0) == doctest::Approx(2.0 / std::sqrt(3.0) + 3.0));
  // homogeneity: s -> 2s, area -> 4 area, perimeter -> 2 perimeter
  const double b1 = folkman_graham_bound(3.0, 7.0, 0.8);
  const double b2 = folkman_graham_bound(12.0, 14.0, 1.6);
  CHECK(b1 == doctest::Approx(b2));
  CHECK_THROWS_AS(folkman_graham_bound(0.0, 1.0, 1.0), std::invalid_argument);

  Rng rng(26);
  for (int trial = 0; trial < 5; ++trial) {
    const double s = rng.uniform(0.4, 1.0), r = rng.uniform(3.0, 7.0);
    const auto pts = oracles::random_separated_points(rng, 30, s, r);
    CHECK(static_cast<double>(pts.size()) <= folkman_graham_bound(r * r, 4.0 * r, s));
  }
}

TEST_CASE("classifier reproduces the corollary verdicts") {
  const double p = 2.0;
  CHECK(classify_class(ClassDescriptor::separated(1.6), p).verdict ==
        Identifiability::IdentifiableByGaussian);
  CHECK(classify_class(ClassDescriptor::rayleigh(0.5, 0.4, 10.0), p).verdict ==
        Identifiability::IdentifiableByGaussian);
  const auto lat = classify_class(ClassDescriptor::lattice({1, 0, 0, 1}, {0, 0}), p);
  CHECK(lat.verdict == Identifiability::NotIdentifiableByAny);
  CHECK(classify_class(ClassDescriptor::finite(0.2, 50), p).verdict ==
        Identifiability::IdentifiableByGaussian);
  const auto ray = classify_class(ClassDescriptor::rayleigh(0.5, 0.8, 3.0), p);
  CHECK(ray.verdict == Identifiability::NotIdentifiableByAny);
  CHECK(ray.annotation.find("sufficiently large") != std::string::npos);
}

TEST_CASE("classifier flips exactly at the critical separation") {
  const double crit = 2.0 * std::pow(3.0, -0.25);  // ~1.5197
  CHECK(classify_class(ClassDescriptor::separated(crit + 0.01), 2.0).verdict ==
        Identifiability::IdentifiableByGaussian);
  CHECK(classify_class(ClassDescriptor::separated(crit - 0.01), 2.0).verdict ==
        Identifiability::NotIdentifiableByAny);
  CHECK(classify_class(ClassDescriptor::rayleigh(0.9, 0.5, 2.0), 2.0).verdict ==
        Identifiability::Indeterminate);
}

}  // TEST_SUITE
