#include <random>

#include "approximation.hpp"
#include "doctest.h"

using namespace wander;

TEST_CASE("hermite interpolant") {
  auto q = hermite_interpolant({{cq(0.0), cq(0.0), cq(0.5)}});
  CHECK(q.degree() == 1);
  CHECK(std::abs(q.eval(cd(2.0)) - cd(1.0)) < 1e-15);

  auto q1 = hermite_interpolant({{cq(1.0), cq(1.0), cq(0.5)}});
  CHECK(std::abs(q1.eval(cd(3.0)) - cd(2.0)) < 1e-15);

  auto q2 = hermite_interpolant({{cq(0.0), cq(0.0), cq(0.5)}, {cq(2.0), cq(0.0), cq(0.0)}});
  CHECK(q2.degree() <= 3);
  auto d2 = q2.derivative();
  CHECK(std::abs(q2.eval(cd(0.0))) < 1e-15);
  CHECK(std::abs(d2.eval(cd(0.0)) - 0.5) < 1e-14);
  CHECK(std::abs(q2.eval(cd(2.0))) < 1e-14);
  CHECK(std::abs(d2.eval(cd(2.0))) < 1e-14);

  // value-only constraints: Lagrange interpolation
  auto q3 = hermite_interpolant({{cq(0.0), cq(1.0), std::nullopt}, {cq(1.0), cq(3.0), std::nullopt}});
  CHECK(std::abs(q3.eval(cd(2.0)) - cd(5.0)) < 1e-14);

  CHECK_THROWS_AS(hermite_interpolant({{cq(0.0), cq(0.0), std::nullopt}, {cq(1e-12), cq(1.0), std::nullopt}}), Error);
}

TEST_CASE("node polynomial") {
  auto w = node_polynomial({cq(0.0)});
  CHECK(w.degree() == 1);
  auto w2 = node_polynomial({cq(0.0), cq(2.0)});
  CHECK(w2.coeffs()[0] == cq(0.0));
  CHECK(w2.coeffs()[1] == cq(-2.0));
  CHECK(w2.coeffs()[2] == cq(1.0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<cq> pts;
  for (int i = 0; i < 6; ++i) pts.push_back(cq(cd(u(rng), u(rng))));
  auto w6 = node_polynomial(pts);
  for (auto& p : pts) CHECK(absd(w6.eval(p)) < 1e-12);
}

TEST_CASE("two disks, z/2 and 0, with Hermite constraints") {
  ApproxProblem pb;
  pb.pieces = {{CompactSet::disk(0.0, 1.0), TargetFn::affine(0.5, 0.0)}, {CompactSet::disk(4.0, 1.0), TargetFn::constant(0.0)}};
  pb.constraints = {{cq(0.0), cq(0.0), cq(0.5)}, {cq(4.0), cq(0.0), std::nullopt}};
  pb.epsilon = 1e-3;
  auto r = constrained_runge(pb);
  REQUIRE(r.success);
  CHECK(r.constraint_residual < 1e-12);
  // independent, 4x denser samples
  auto v = verify_fit(r.poly, pb, 1.25, 0.61);
  CHECK(v.success);
  for (double m : v.per_piece_margin) CHECK(m < 1e-3);
  // dense oracle on 8192 fresh samples per disk
  double worst = 0;
  for (auto z : CompactSet::disk(0.0, 1.0).boundary(8192, 0.3)) worst = std::max(worst, std::abs(r.poly.eval(z) - z / 2.0));
  for (auto z : CompactSet::disk(4.0, 1.0).boundary(8192, 0.3)) worst = std::max(worst, std::abs(r.poly.eval(z)));
  CHECK(worst < 1e-3);
  cq v0, d0;
  r.poly.eval2(cq(0.0), v0, d0);
  CHECK(absd(v0) < 1e-12);
  CHECK(absd(d0 - cq(0.5)) < 1e-12);
}

TEST_CASE("disks mapped to 0 and 1") {
  ApproxProblem pb;
  pb.pieces = {{CompactSet::disk(0.0, 1.0), TargetFn::constant(0.0)}, {CompactSet::disk(4.0, 1.0), TargetFn::constant(1.0)}};
  pb.epsilon = 1e-3;
  auto r = constrained_runge(pb);
  REQUIRE(r.success);
  double worst = 0;
  for (auto z : CompactSet::disk(0.0, 1.0).boundary(8192, 0.7)) worst = std::max(worst, std::abs(r.poly.eval(z)));
  for (auto z : CompactSet::disk(4.0, 1.0).boundary(8192, 0.7)) worst = std::max(worst, std::abs(r.poly.eval(z) - 1.0));
  CHECK(worst < 1e-3);
}

TEST_CASE("exact recovery of a polynomial target") {
  auto target = Polynomial::from_complex({{0.5, 0.0}, {0.0, 1.0}, {-0.25, 0.0}, {0.0, 0.0}, {0.1, 0.2}});
  ApproxProblem pb;
  pb.pieces = {{CompactSet::disk(cd(0.3, 0.1), 0.8), TargetFn::polynomial(target)}};
  pb.epsilon = 1e-6;
  auto r = constrained_runge(pb);
  REQUIRE(r.success);
  CHECK(r.per_piece_margin[0] <= 1e-10);
  CHECK(sup_deviation(r.poly, target, CompactSet::disk(0.0, 1.5).boundary(512)) <= 1e-10);
}

TEST_CASE("verify_fit audits") {
  ApproxProblem pb;
  pb.pieces = {{CompactSet::disk(0.0, 1.0), TargetFn::affine(1.0, 4.0)}};
  pb.epsilon = 1e-3;
  auto exact = verify_fit(Polynomial::affine(1.0, 4.0), pb);
  CHECK(exact.success);
  CHECK(exact.per_piece_margin[0] < 1e-13);
  auto off = verify_fit(Polynomial::affine(1.0, 4.0 + 2e-3), pb);
  CHECK_FALSE(off.success);
  CHECK(off.per_piece_margin[0] == doctest::Approx(2e-3).epsilon(1e-6));
}

TEST_CASE("overlapping pieces and tiny caps") {
  ApproxProblem pb;
  pb.pieces = {{CompactSet::disk(0.0, 1.0), TargetFn::constant(0.0)}, {CompactSet::disk(1.5, 1.0), TargetFn::constant(1.0)}};
  pb.epsilon = 1e-3;
  try {
    constrained_runge(pb);
    FAIL("expected PiecesOverlap");
  } catch (const Error& e) {
    CHECK(e.code() == Status::PiecesOverlap);
  }
  pb.pieces[1].set = CompactSet::disk(4.0, 1.0);
  FitOptions fo;
  fo.degree_cap = 4;
  auto r = constrained_runge(pb, fo);
  CHECK_FALSE(r.success);
  CHECK(r.status == Status::DegreeCapExceeded);
}
