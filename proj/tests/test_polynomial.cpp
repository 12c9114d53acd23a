#include <random>

#include "doctest.h"
#include "polynomial.hpp"

using namespace wander;

TEST_CASE("eval: spec points and naive-summation oracle") {
  CHECK(Polynomial::affine(0.5, 0.0).eval(cd(0.0)) == cd(0.0));
  CHECK(std::abs(Polynomial::affine(1.0, 4.0).eval(cd(3.0)) - cd(7.0)) < 1e-15);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<cd> c(13);
  for (auto& a : c) a = {u(rng), u(rng)};
  auto p = Polynomial::from_complex(c);
  for (int t = 0; t < 100; ++t) {
    cd z(1.3 * u(rng), 1.3 * u(rng));
    cd s = 0, zp = 1;
    for (auto a : c) s += a * zp, zp *= z;
    CHECK(std::abs(p.eval(z) - s) <= 1e-12 * std::max(1.0, std::abs(s)));
    double err = 0;
    cd fz = p.eval_fast(z, &err);
    CHECK(std::abs(fz - s) <= err + 1e-13 * std::abs(s));
  }
}

TEST_CASE("derivative: exact cases and finite differences") {
  auto d = Polynomial::affine(0.5, 0.0).derivative();
  CHECK(d.degree() == 0);
  CHECK(d.eval(cd(3.0)) == cd(0.5));
  CHECK(Polynomial::constant(5.0).derivative().is_zero());

  auto p = Polynomial::from_complex({1.0, -2.0, 1.0});  // (z-1)^2
  auto dp = p.derivative();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 10; ++t) {
    cd z(u(rng), u(rng));
    double h = 1e-6;
    cd fd = (p.eval(z + h) - p.eval(z - h)) / (2 * h);
    CHECK(std::abs(fd - dp.eval(z)) < 1e-5);
    CHECK(std::abs(dp.eval(z) - 2.0 * (z - 1.0)) < 1e-14);
  }
}

TEST_CASE("eval2 matches derivative") {
  auto p = Polynomial::from_complex({{0.3, 0.1}, {1.0, -2.0}, {0.0, 0.5}, {-1.5, 0.0}});
  cq v, dv;
  p.eval2(cq(cd(0.7, -0.4)), v, dv);
  CHECK(std::abs(v.d() - p.eval(cd(0.7, -0.4))) < 1e-15);
  CHECK(std::abs(dv.d() - p.derivative().eval(cd(0.7, -0.4))) < 1e-14);
}

TEST_CASE("orbit: translation, fixed point, overflow flag") {
  auto t = orbit(Polynomial::affine(1.0, 4.0), cq(3.0), 3);
  REQUIRE(t.iterates.size() == 4);
  for (int j = 0; j < 4; ++j) CHECK(t.iterates[j].d() == cd(3.0 + 4 * j));
  CHECK_FALSE(t.overflow);
  auto z = orbit(Polynomial::affine(0.5, 0.0), cq(0.0), 5);
  for (auto& w : z.iterates) CHECK(w.d() == cd(0.0));
  auto sq = orbit(Polynomial::from_complex({0.0, 0.0, 1.0}), cq(2.0), 40);
  CHECK(sq.overflow);
  CHECK(sq.iterates.size() < 41);
}

TEST_CASE("sup_deviation") {
  auto p = Polynomial::affine(0.5, 0.0);
  std::vector<cd> s{0.0, 1.0, cd(0, 2)};
  CHECK(sup_deviation(p, p, s) == 0.0);
  CHECK(sup_deviation(Polynomial::affine(0.5, 1e-4), p, s) == doctest::Approx(1e-4).epsilon(1e-9));
  CHECK_THROWS(sup_deviation(p, p, {}));
}

TEST_CASE("text format round-trips binary128 exactly") {
  std::vector<cq> c{cq(f128(1) / 3, -f128(2) / 7), cq(1e-30, 0), cq(0, 123456.789)};
  Polynomial p(c);
  auto q = Polynomial::from_text(p.to_text());
  REQUIRE(q.degree() == p.degree());
  for (int i = 0; i <= p.degree(); ++i) CHECK(q.coeffs()[i] == p.coeffs()[i]);
  CHECK_THROWS_AS(Polynomial::from_text("degree 2\n1 0\n"), Error);
  CHECK_THROWS_AS(Polynomial::from_text("garbage"), Error);
  CHECK_THROWS_AS(Polynomial::from_text("degree 0\nnan 0\n"), Error);
}

TEST_CASE("format_f128 shortest round trip") {
  for (f128 x : {f128(0.1), f128(1) / 3, f128(-2.5e-300), f128(7)}) CHECK(parse_f128(format_f128(x)) == x);
  CHECK(format_f128(f128(7)) == "7");
}

TEST_CASE("arithmetic") {
  auto a = Polynomial::from_complex({1.0, 1.0});   // 1+z
  auto b = Polynomial::from_complex({-1.0, 1.0});  // z-1
  auto p = a * b;                                  // z^2-1
  CHECK(p.degree() == 2);
  CHECK(std::abs(p.eval(cd(3.0)) - cd(8.0)) < 1e-15);
  CHECK((a - a).is_zero());
  CHECK(std::abs((a + b).eval(cd(2.0)) - cd(4.0)) < 1e-15);
}

TEST_CASE("wide evaluation resolves Horner cancellation") {
  // (z - 1)^40 expanded: binary128 Horner near z = 1 is swamped by
  // cancellation among coefficients of size ~1e11
  auto p = Polynomial::constant(1.0);
  for (int i = 0; i < 40; ++i) p = p * Polynomial::from_complex({-1.0, 1.0});
  cq v, dv;
  p.eval2_wide(cq(1.0), v, dv);
  CHECK(absd(v) == 0.0);
  CHECK(absd(dv) == 0.0);
  // at 1 + 1/2 the exact value is 2^-40, derivative 40 * 2^-39
  p.eval2_wide(cq(1.5), v, dv);
  CHECK(absd(v - cq(std::ldexp(1.0, -40))) < 1e-40);
  CHECK(absd(dv - cq(40 * std::ldexp(1.0, -39))) < 1e-38);
  // agrees with binary128 Horner where there is no cancellation
  auto q = Polynomial::from_complex({{0.3, 0.1}, {1.0, -2.0}, {0.0, 0.5}, {-1.5, 0.0}});
  cq a, da, b, db;
  q.eval2(cq(cd(0.7, -0.4)), a, da);
  q.eval2_wide(cq(cd(0.7, -0.4)), b, db);
  CHECK(absd(a - b) < 1e-30);
  CHECK(absd(da - db) < 1e-30);
}

TEST_CASE("taylor shift") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<cd> c(30);
  for (auto& a : c) a = {u(rng), u(rng)};
  auto p = Polynomial::from_complex(c);
  cq center(cd(0.4, -0.3));
  auto q = p.taylor_shift(center);
  REQUIRE(q.degree() == p.degree());
  for (int t = 0; t < 20; ++t) {
    cd w(0.2 * u(rng), 0.2 * u(rng));
    cq a = p.eval_wide(center + cq(w)), b = q.eval_wide(cq(w));
    CHECK(absd(a - b) < 1e-28 * std::max(1.0, absd(a)));
  }
  // shifting (z - 2)^3 to 2 gives w^3
  auto cube = Polynomial::from_complex({-8.0, 12.0, -6.0, 1.0}).taylor_shift(cq(2.0));
  CHECK(absd(cube.coeffs()[0]) == 0.0);
  CHECK(absd(cube.coeffs()[1]) == 0.0);
  CHECK(absd(cube.coeffs()[2]) == 0.0);
  CHECK(absd(cube.coeffs()[3] - cq(1.0)) == 0.0);
}
