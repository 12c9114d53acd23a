#include <numbers>
#include <random>

#include "doctest.h"
#include "geometry.hpp"

using namespace wander;

namespace {

// Monte-Carlo estimate of the mask area over its bounding box
double mc_area(const CompactSet& s, int n, std::uint64_t seed) {
  BBox b = s.bbox();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(b.x0, b.x1), uy(b.y0, b.y1);
  int hit = 0;
  for (int i = 0; i < n; ++i) hit += s.contains({ux(rng), uy(rng)});
  return b.width() * b.height() * hit / n;
}

}  // namespace

TEST_CASE("rasterize: disk and square areas against Monte-Carlo") {
  auto d = rasterize(JordanRegion::make_disk(3.0, 0.2), 0.005);
  double a = mc_area(d, 1000000, 1);
  CHECK(std::abs(a - std::numbers::pi * 0.04) < 0.05 * std::numbers::pi * 0.04);
  CHECK(std::abs(d.area() - std::numbers::pi * 0.04) < 0.05 * std::numbers::pi * 0.04);
  CHECK(d.complement_connected());

  auto sq = rasterize(JordanRegion::make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), 0.01);
  CHECK(std::abs(mc_area(sq, 1000000, 2) - 1.0) < 0.02);
  CHECK(sq.contains({0.5, 0.5}));
  CHECK_FALSE(sq.contains({1.2, 0.5}));
}

TEST_CASE("degenerate and coarse regions") {
  CHECK_THROWS_AS(JordanRegion::make_polygon({{0, 0}, {1, 0}, {0, 0}}), Error);
  try {
    JordanRegion::make_polygon({{0, 0}, {1, 0}, {1, 0}, {0, 0}});
    FAIL("expected DegenerateRegion");
  } catch (const Error& e) {
    CHECK(e.code() == Status::DegenerateRegion);
  }
  // bow-tie is not simple
  CHECK_THROWS_AS(JordanRegion::make_polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), Error);
  try {
    rasterize(JordanRegion::make_disk(0.0, 1.0), 0.1);
    FAIL("expected ResolutionTooCoarse");
  } catch (const Error& e) {
    CHECK(e.code() == Status::ResolutionTooCoarse);
  }
}

TEST_CASE("neighborhood of a disk against the distance oracle") {
  auto om = rasterize(JordanRegion::make_disk(3.0, 0.2), 0.005);
  auto U1 = neighborhood(om, 1);
  for (auto z : CompactSet::disk(3.0, 1.19).boundary(512)) CHECK(U1.contains(z));
  for (auto z : CompactSet::disk(3.0, 1.21).boundary(512)) CHECK_FALSE(U1.contains(z));
  auto U2 = neighborhood(om, 2);
  // every cell of U_2 has all eight neighbours in U_1
  int bad = 0;
  for (int j = 0; j < U2.ny(); ++j)
    for (int i = 0; i < U2.nx(); ++i) {
      if (!U2.cell(i, j)) continue;
      cd c = U2.cell_center(i, j);
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) bad += !U1.contains(c + cd(dx * U2.h(), dy * U2.h()));
    }
  CHECK(bad == 0);
}

TEST_CASE("dilation fills the hole of a horseshoe") {
  // U-shaped polygon whose mouth (width 0.2) closes under a 0.15 dilation
  std::vector<cd> v{{0, 0}, {1, 0}, {1, 1}, {0.6, 1}, {0.6, 0.4}, {0.4, 0.4}, {0.4, 1}, {0, 1}};
  auto om = rasterize(JordanRegion::make_polygon(v), 0.005);
  auto U = dilate(om, 0.15);
  CHECK(U.complement_connected());
  CHECK(U.contains({0.5, 0.7}));  // the former inlet
  CHECK(std::abs(U.distance({1.5, 0.5}) - 0.35) < 0.02);
}

TEST_CASE("dilated square area matches s^2 + 4 s r + pi r^2") {
  auto om = rasterize(JordanRegion::make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), 0.005);
  double r = 0.3;
  auto U = dilate(om, r);
  double exact = 1 + 4 * r + std::numbers::pi * r * r;
  CHECK(std::abs(U.area() - exact) < 0.02 * exact);
}

TEST_CASE("tower and boundary sequence") {
  auto om = rasterize(JordanRegion::make_disk(0.0, 1.0), 0.004);
  std::vector<double> radii;
  for (int n = 1; n <= 9; ++n) radii.push_back(1.0 / n);
  auto t = build_tower(om, radii);  // U_0 = 1-neighbourhood ... U_8
  auto xs = boundary_sequence(om, t, 8);
  REQUIRE(xs.size() == 8);
  for (int n = 1; n <= 8; ++n) {
    double d = std::abs(xs[n - 1]) - 1.0;  // distance to the closed unit disk
    CHECK(d > radii[n] - 0.02);
    CHECK(d < radii[n - 1] + 0.02);
    CHECK_FALSE(om.contains(xs[n - 1]));
    CHECK_FALSE(t.sets[n].contains(xs[n - 1]));
    CHECK(t.sets[n - 1].contains(xs[n - 1]));
  }
}

TEST_CASE("boundary sequence covers the boundary") {
  auto om = rasterize(JordanRegion::make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), 0.003);
  std::vector<double> radii;
  for (int n = 0; n <= 44; ++n) radii.push_back(0.5 - 0.01 * n);
  auto t = build_tower(om, radii);
  auto xs = boundary_sequence(om, t, 44);
  std::vector<cd> proj;
  for (auto x : xs) proj.push_back(project_to_boundary(om, x));
  double worst = 0;
  for (auto s : om.boundary(1024)) {
    double d = 1e9;
    for (auto p : proj) d = std::min(d, std::abs(s - p));
    worst = std::max(worst, d);
  }
  CHECK(worst < 0.1 * om.diameter());
}

TEST_CASE("van der Corput") {
  CHECK(van_der_corput(1) == 0.5);
  CHECK(van_der_corput(2) == 0.25);
  CHECK(van_der_corput(3) == 0.75);
  CHECK(van_der_corput(6) == 0.375);
}

TEST_CASE("cover_compact") {
  std::vector<cd> circle = CompactSet::disk(11.0, 1.0).boundary(512);
  auto K = cover_compact(circle, 0.3, {CompactSet::disk(0.0, 5.0)});
  for (auto p : circle) CHECK(K.contains(p));
  CHECK(set_distance(K, CompactSet::disk(0.0, 5.0)) > 0);
  CHECK(K.complement_connected());

  auto single = cover_compact({cd(2.0, 1.0)}, 0.1, {});
  CHECK(single.contains(cd(2.0, 1.0)));
  CHECK(single.diameter() < 0.5);

  // a point 0.1 from the avoided set: either a shrunk cover with clearance or Collision
  try {
    auto c = cover_compact({cd(5.1, 0.0)}, 0.3, {CompactSet::disk(0.0, 5.0)});
    CHECK(c.contains(cd(5.1, 0.0)));
    CHECK(set_distance(c, CompactSet::disk(0.0, 5.0)) >= c.h());
  } catch (const Error& e) {
    CHECK(e.code() == Status::Collision);
  }
}

TEST_CASE("normalize") {
  auto big = JordanRegion::make_disk(0.0, 10.0);
  auto T = normalize(big, Mode::Escaping);
  CHECK(std::abs(T(0.0) - cd(3.0)) < 1e-12);
  auto img = big.transformed(T);
  CHECK(img.contains(3.0));
  CHECK(img.max_radius(3.0) < 1.0);

  auto sq = JordanRegion::make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  auto To = normalize(sq, Mode::Oscillating);
  CHECK(sq.transformed(To).diameter() < 2.0 / 9);
  CHECK(std::abs(To(cd(0.5, 0.5)) - cd(2.0 / 3)) < 1e-12);
  CHECK_THROWS_AS(normalize(big, Mode::Escaping, 1.5), Error);
}

TEST_CASE("enclosing disk against brute force") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cd> p(40);
    for (auto& z : p) z = {g(rng), g(rng)};
    Disk D = enclosing_disk(p);
    for (auto z : p) CHECK(std::abs(z - D.center) <= D.radius * (1 + 1e-9));
    // optimal radius: no smaller disk over any pair/triple; compare with
    // the farthest-pair lower bound and the bounding circle upper bound
    double far = 0;
    for (auto a : p)
      for (auto b : p) far = std::max(far, std::abs(a - b));
    CHECK(D.radius >= far / 2 - 1e-12);
    CHECK(D.radius <= far / std::sqrt(3.0) + 1e-12);
  }
}

TEST_CASE("indexed contour distance equals the brute-force scan") {
  std::vector<cd> v{{0, 0}, {1, 0}, {1, 1}, {0.6, 1}, {0.6, 0.4}, {0.4, 0.4}, {0.4, 1}, {0, 1}};
  auto om = rasterize(JordanRegion::make_polygon(v), 0.005);
  const auto& c = om.contour();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2, 3);
  for (int t = 0; t < 400; ++t) {
    cd z(u(rng), u(rng));
    double brute = 1e300;
    for (std::size_t i = 0; i < c.size(); ++i) {
      cd a = c[i], b = c[(i + 1) % c.size()], ab = b - a;
      double s = std::clamp(((z - a) * std::conj(ab)).real() / std::norm(ab), 0.0, 1.0);
      brute = std::min(brute, std::abs(z - (a + s * ab)));
    }
    CHECK(om.distance_to_boundary(z) == doctest::Approx(brute).epsilon(1e-12));
  }
}
