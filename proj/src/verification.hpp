#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "polynomial.hpp"

namespace wander {

// every tolerance used by the checks, in one place
struct Tolerances {
  double fixed_point = 1e-9;
  double preimage = 1e-8;
  double separation_floor = 1e-3;  // times image perimeter / sample count
  double winding_slack = 0.1;      // accumulated angle must sit this close to 2 pi k
  double max_turn = 1.5707963267948966;  // larger per-sample argument jumps mean undersampling
  int boundary_samples = 1024;
  double containment_slack = 0.02;
  double cauchy_safety = 1.0;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double margin = 0;  // positive = slack
  std::string details;
};

struct Certificate {
  int stage = 0;
  std::vector<CheckResult> checks;
  bool all_pass() const;
  const CheckResult* find(const std::string& name) const;
};

struct TargetRegion {
  enum class Kind { Disk, Annulus } kind = Kind::Disk;
  cd center{0.0};
  double radius = 0;        // disk
  double inner = 0, outer = 0;  // annulus about the centre
  static TargetRegion disk(cd c, double r) { return {Kind::Disk, c, r, 0, 0}; }
  static TargetRegion annulus(double inner, double outer) { return {Kind::Annulus, 0.0, 0, inner, outer}; }
};

// images of `samples` under f^n, computed in binary128; false on overflow
bool iterate_samples(const Polynomial& f, const std::vector<cd>& samples, int n, std::vector<cd>& images,
                     std::vector<double>* deriv_moduli = nullptr);

CheckResult check_univalence(const Polynomial& f, const CompactSet& domain, int n, const Tolerances& tol = {},
                             const cd* witness = nullptr);
CheckResult check_containment(const Polynomial& f, const CompactSet& source, int n, const TargetRegion& target,
                              const Tolerances& tol = {}, const CheckResult* univalence = nullptr);
CheckResult check_fixed_point(const Polynomial& f, cd p0, cd multiplier, const Tolerances& tol = {});
CheckResult check_preimages(const Polynomial& f, const std::vector<cq>& xs, const std::vector<int>& schedule,
                            cd fixed_pt, const Tolerances& tol = {});
CheckResult check_accumulation(const std::vector<cd>& xs, const CompactSet& omega, double delta);
// sampled sup |f - g| over the boundary of a disk
CheckResult check_cauchy(const Polynomial& f, const Polynomial& g, double radius, double bound, int samples = 4096);

// discrete argument sum of a closed curve about c, in turns
double winding_number(const std::vector<cd>& curve, cd c, double* max_step = nullptr);
// zeros of (f^n)' enclosed by the polygonal contour; nullopt when unresolved
std::optional<long> critical_count(const Polynomial& f, const std::vector<cd>& contour, int n);

}  // namespace wander
