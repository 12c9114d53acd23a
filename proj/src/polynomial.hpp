#pragma once

#include <string>
#include <vector>

#include "common.hpp"

namespace wander {

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<cq> coeffs);
  static Polynomial from_complex(const std::vector<cd>& coeffs);
  static Polynomial affine(cd alpha, cd beta);
  static Polynomial constant(cd c);

  const std::vector<cq>& coeffs() const { return c_; }
  int degree() const { return int(c_.size()) - 1; }  // zero polynomial: 0
  bool is_zero() const;

  // binary128 Horner; throws Overflow past 1e300
  cq eval(cq z) const;
  cd eval(cd z) const { return eval(cq(z)).d(); }
  // value and derivative in one pass
  void eval2(cq z, cq& v, cq& dv) const;
  // same in ~330-bit arithmetic; for residuals where Horner cancellation in
  // binary128 would swamp the answer (slow)
  void eval2_wide(cq z, cq& v, cq& dv) const;
  cq eval_wide(cq z) const;
  // coefficients of p(c + w) in powers of w, computed in wide arithmetic;
  // Horner on the result is accurate for clouds of points clustered at c
  Polynomial taylor_shift(cq c) const;
  // unchecked double Horner on rounded coefficients, plus a running bound on
  // its rounding error; used where speed matters more than the last digits
  cd eval_fast(cd z, double* err_bound = nullptr) const;

  Polynomial derivative() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  std::string to_text() const;
  static Polynomial from_text(const std::string& text);
  void save(const std::string& path) const;
  static Polynomial load(const std::string& path);

 private:
  void trim();
  std::vector<cq> c_{cq()};
  std::vector<cd> cd_{cd()};
  std::vector<double> abs_;
};

struct OrbitTable {
  cq base;
  std::vector<cq> iterates;  // iterates[j] = f^j(base), iterates[0] = base
  int map_stage = 0;
  bool overflow = false;     // table truncated at the first overflowing iterate
};

OrbitTable orbit(const Polynomial& p, cq z, int n, int map_stage = 0);

// f^n(z) in binary128; returns false on overflow
bool iterate(const Polynomial& p, cq& z, int n);
// same with each step in wide arithmetic, for exactly recorded orbits
bool iterate_wide(const Polynomial& p, cq& z, int n);

double sup_deviation(const Polynomial& p, const Polynomial& target, const std::vector<cd>& samples);

}  // namespace wander
