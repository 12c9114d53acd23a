#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "verification.hpp"

using namespace wander;

TEST_CASE("containment examples") {
  auto r1 = check_containment(Polynomial::affine(1.0, 4.0), CompactSet::disk(3.0, 0.5), 2, TargetRegion::disk(11.0, 1.0));
  CHECK(r1.pass);
  CHECK(r1.margin == doctest::Approx(0.5).epsilon(1e-9));
  auto r2 = check_containment(Polynomial::affine(0.5, 0.0), CompactSet::disk(0.0, 1.0), 1, TargetRegion::disk(0.0, 1.0));
  CHECK(r2.pass);
  CHECK(r2.margin == doctest::Approx(0.5).epsilon(1e-9));
  auto r3 = check_containment(Polynomial::from_complex({0.0, 0.0, 1.0}), CompactSet::disk(0.0, 2.0), 1,
                              TargetRegion::disk(0.0, 1.0));
  CHECK_FALSE(r3.pass);
  CHECK(r3.margin == doctest::Approx(-3.0).epsilon(1e-9));
  auto r4 = check_containment(Polynomial::affine(0.1, 0.25), CompactSet::disk(0.0, 0.1), 1, TargetRegion::annulus(0.2, 0.3));
  CHECK(r4.pass);
  CHECK(r4.margin == doctest::Approx(0.04).epsilon(1e-6));
  CHECK_THROWS(check_containment(Polynomial::affine(1.0, 0.0), CompactSet::disk(0.0, 1.0), 0, TargetRegion::disk(0.0, 2.0)));
}

TEST_CASE("univalence examples") {
  auto om = rasterize(JordanRegion::make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), 0.01);
  CHECK(check_univalence(Polynomial::affine(1.0, 4.0), om, 5).pass);
  CHECK(check_univalence(Polynomial::affine(1.0, 4.0), CompactSet::disk(0.0, 1.0), 5).pass);
  auto sq = check_univalence(Polynomial::from_complex({0.0, 0.0, 1.0}), CompactSet::disk(0.0, 1.0), 1);
  CHECK_FALSE(sq.pass);
  CHECK(sq.details.find("winding=2") != std::string::npos);
  CHECK(check_univalence(Polynomial::from_complex({0.0, 0.5, 1e-4}), CompactSet::disk(0.0, 1.0), 1).pass);
}

TEST_CASE("univalence agrees with the closed-form oracle on random cubics") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1, 1), ur(0.2, 1.5);
  Tolerances tol;
  tol.boundary_samples = 64;
  int disagreements = 0, univalent = 0;
  for (int t = 0; t < 60; ++t) {
    std::vector<cd> c{{u(rng), u(rng)}, {1.0, 0.0}, {0.6 * u(rng), 0.6 * u(rng)}, {0.3 * u(rng), 0.3 * u(rng)}};
    cd center(u(rng), u(rng));
    double r = ur(rng);
    bool expect = oracle::univalent_on_disk(c, center, r);
    bool got = check_univalence(Polynomial::from_complex(c), CompactSet::disk(center, r), 1, tol, &center).pass;
    if (expect != got) MESSAGE("disagree: c=" << c[0] << c[2] << c[3] << " center=" << center << " r=" << r << " oracle=" << expect);
    disagreements += expect != got;
    univalent += expect;
  }
  CHECK(disagreements == 0);
  CHECK(univalent > 5);
  CHECK(univalent < 55);
}

TEST_CASE("fixed points") {
  CHECK(check_fixed_point(Polynomial::affine(0.5, 0.0), 0.0, 0.5).pass);
  CHECK(check_fixed_point(Polynomial::affine(0.5, 0.5), 1.0, 0.5).pass);
  CHECK_FALSE(check_fixed_point(Polynomial::affine(2.0, 0.0), 0.0, 2.0).pass);
  CHECK_FALSE(check_fixed_point(Polynomial::affine(0.5, 0.1), 0.0, 0.5).pass);
}

TEST_CASE("preimage chains") {
  // f(z) = z (z - 1): f(1) = 0, f(0) = 0
  auto f = Polynomial::from_complex({0.0, -1.0, 1.0});
  CHECK(check_preimages(f, {cq(1.0), cq(1.0)}, {1, 2}, 0.0).pass);
  CHECK(check_preimages(f, {}, {}, 0.0).pass);
  CHECK_FALSE(check_preimages(f, {cq(1.01)}, {1}, 0.0).pass);
}

TEST_CASE("accumulation") {
  auto om = rasterize(JordanRegion::make_disk(0.0, 1.0), 0.01);
  std::vector<cd> xs;
  for (unsigned n = 1; n <= 64; ++n) xs.push_back(std::polar(1.1, 2 * std::numbers::pi * van_der_corput(n)));
  CHECK(check_accumulation(xs, om, 0.1 * om.diameter()).pass);
  auto two = check_accumulation({cd(1.1, 0.0), cd(1.1, 0.01)}, om, 0.05);
  CHECK_FALSE(two.pass);
  CHECK(two.margin < -1.5);
  CHECK(check_accumulation({cd(1.1, 0.0)}, om, om.diameter()).pass);
}

TEST_CASE("cauchy and winding") {
  auto r = check_cauchy(Polynomial::affine(0.5, 1e-4), Polynomial::affine(0.5, 0.0), 5.0, 1e-3);
  CHECK(r.pass);
  CHECK(r.margin == doctest::Approx(9e-4).epsilon(1e-6));
  auto circle = CompactSet::disk(0.0, 1.0).boundary(256);
  CHECK(std::lround(winding_number(circle, 0.0)) == 1);
  CHECK(std::lround(winding_number(circle, 3.0)) == 0);
}
