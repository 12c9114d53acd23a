#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "polynomial.hpp"

namespace wander {

struct TargetFn {
  enum class Kind { Affine, Poly, Constant } kind = Kind::Constant;
  cd alpha{0.0}, beta{0.0};  // affine: alpha z + beta; constant: beta
  Polynomial poly;

  static TargetFn affine(cd a, cd b) { return {Kind::Affine, a, b, {}}; }
  static TargetFn constant(cd c) { return {Kind::Constant, 0.0, c, {}}; }
  static TargetFn polynomial(Polynomial p) { return {Kind::Poly, 0.0, 0.0, std::move(p)}; }
  cq eval(cq z) const;
  Polynomial as_polynomial() const;
};

struct ApproxPiece {
  CompactSet set;
  TargetFn target;
};

struct HermiteConstraint {
  cq point;
  cq value;
  std::optional<cq> deriv;  // value-only when absent
};

struct ApproxProblem {
  std::vector<ApproxPiece> pieces;
  std::vector<HermiteConstraint> constraints;
  double epsilon = 0;
};

struct FitOptions {
  int degree_cap = 400;
  double safety = 1.25;
  // radius of a circle on which |p| is penalised (ridge term) to hold back
  // coefficient growth; 0 disables the penalty
  double control_radius = 0;
  double phase = 0;  // offset of the independent verification samples
};

struct FitResult {
  bool success = false;
  Status status = Status::Ok;
  Polynomial poly;
  std::vector<double> per_piece_margin;  // sampled sup |p - h_j| on K_j
  double constraint_residual = 0;
  int degree_used = 0;
  double ridge = 0;                      // penalty weight that was accepted
  std::string message;
};

Polynomial hermite_interpolant(const std::vector<HermiteConstraint>& constraints);
// monic prod (z - x_i)^{m_i}
Polynomial node_polynomial(const std::vector<cq>& points, const std::vector<int>& multiplicity = {});

FitResult constrained_runge(const ApproxProblem& problem, const FitOptions& opt = {});
FitResult verify_fit(const Polynomial& p, const ApproxProblem& problem, double safety = 1.25, double phase = 0.37);

// fit samples per piece for a correction of degree d
int fit_sample_count(int d);

}  // namespace wander
