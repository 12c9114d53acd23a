#include "verification.hpp"

#include <algorithm>
#include <numbers>
#include <optional>

namespace wander {

bool Certificate::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](auto& c) { return c.pass; });
}

const CheckResult* Certificate::find(const std::string& name) const {
  for (auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool iterate_samples(const Polynomial& f, const std::vector<cd>& samples, int n, std::vector<cd>& images,
                     std::vector<double>* deriv_moduli) {
  std::size_t M = samples.size();
  std::vector<cq> z(M);
  for (std::size_t i = 0; i < M; ++i) z[i] = cq(samples[i]);
  std::vector<f128> dm(M, 1);
  std::vector<char> ok(M, 1);
  for (int k = 0; k < n; ++k) {
    // clustered points: re-centre f at the cloud, where Horner in binary128
    // is far more accurate than in powers of z
    cq c;
    for (auto& w : z) c += w;
    c = cq(c.re / f128(M), c.im / f128(M));
    f128 spread = 0;
    for (auto& w : z) spread = std::max(spread, absq(w - c));
    bool shift = M > 1 && f.degree() > 1 && spread < f128(0.5) * absq(c);
    Polynomial g;
    if (shift) {
      try {
        g = f.taylor_shift(c);
      } catch (const Error&) {
        shift = false;
      }
    }
    const Polynomial& e = shift ? g : f;
    cq off = shift ? c : cq();
    parallel_for(M, [&](std::size_t i) {
      if (!ok[i]) return;
      try {
        cq v, dv;
        e.eval2(z[i] - off, v, dv);
        dm[i] *= absq(dv);
        z[i] = v;
      } catch (const Error&) {
        ok[i] = 0;
      }
    });
  }
  images.assign(M, cd());
  for (std::size_t i = 0; i < M; ++i) images[i] = z[i].d();
  if (deriv_moduli) {
    deriv_moduli->assign(M, 1.0);
    for (std::size_t i = 0; i < M; ++i) (*deriv_moduli)[i] = double(dm[i]);
  }
  return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

namespace {

// unit direction of (f^n)'(z); nullopt on overflow or a vanishing derivative
std::optional<cd> chain_direction(const Polynomial& f, cd z0, int n) {
  try {
    cq z(z0), d(1.0);
    for (int k = 0; k < n; ++k) {
      cq v, dv;
      f.eval2(z, v, dv);
      f128 m = absq(dv);
      if (!(m > 0)) return std::nullopt;
      d = d * (f128(1) / m) * dv;  // keep |d| = 1
      z = v;
    }
    return d.d();
  } catch (const Error&) {
    return std::nullopt;
  }
}

// argument increment of (f^n)' along the segment a -> b, bisecting until
// every step turns by less than `turn`; nullopt if refinement runs out
std::optional<double> arg_increment(const Polynomial& f, int n, cd a, cd b, cd da, cd db, double turn, int depth) {
  double s = std::arg(db / da);
  if (std::abs(s) < turn) return s;
  if (depth == 0) return std::nullopt;
  cd m = 0.5 * (a + b);
  auto dm = chain_direction(f, m, n);
  if (!dm) return std::nullopt;
  auto l = arg_increment(f, n, a, m, da, *dm, turn, depth - 1);
  if (!l) return std::nullopt;
  auto r = arg_increment(f, n, m, b, *dm, db, turn, depth - 1);
  if (!r) return std::nullopt;
  return *l + *r;
}

}  // namespace

// zeros of (f^n)' enclosed by the polygonal contour zs, by the argument
// principle with adaptive refinement near the contour
std::optional<long> critical_count(const Polynomial& f, const std::vector<cd>& zs, int n) {
  std::size_t M = zs.size();
  std::vector<std::optional<cd>> d(M);
  parallel_for(M, [&](std::size_t i) { d[i] = chain_direction(f, zs[i], n); });
  for (auto& x : d)
    if (!x) return std::nullopt;
  std::vector<std::optional<double>> inc(M);
  parallel_for(M, [&](std::size_t i) {
    std::size_t j = (i + 1) % M;
    inc[i] = arg_increment(f, n, zs[i], zs[j], *d[i], *d[j], 0.5, 30);
  });
  double total = 0;
  for (auto& x : inc) {
    if (!x) return std::nullopt;
    total += *x;
  }
  return std::lround(total / (2 * std::numbers::pi));
}

double winding_number(const std::vector<cd>& curve, cd c, double* max_step) {
  double total = 0, mx = 0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    cd a = curve[i] - c, b = curve[(i + 1) % curve.size()] - c;
    double s = std::arg(b / a);
    total += s;
    mx = std::max(mx, std::abs(s));
  }
  if (max_step) *max_step = mx;
  return total / (2 * std::numbers::pi);
}

namespace {

double cross(cd a, cd b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool proper_cross(cd p1, cd p2, cd q1, cd q2) {
  double d1 = cross(p2 - p1, q1 - p1), d2 = cross(p2 - p1, q2 - p1);
  double d3 = cross(q2 - q1, p1 - q1), d4 = cross(q2 - q1, p2 - q1);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace

CheckResult check_univalence(const Polynomial& f, const CompactSet& domain, int n, const Tolerances& tol,
                             const cd* witness) {
  CheckResult r;
  r.name = "univalence n=" + std::to_string(n);
  int M = tol.boundary_samples;
  auto zs = domain.boundary(M);
  std::vector<cd> w;
  std::vector<double> dm;
  cd wit = witness ? *witness : domain.centroid();
  if (!iterate_samples(f, zs, n, w, &dm)) {
    r.margin = -1;
    r.details = "overflow along the boundary orbit";
    return r;
  }
  std::vector<cd> wc;
  if (!iterate_samples(f, {wit}, n, wc)) {
    r.margin = -1;
    r.details = "overflow along the witness orbit";
    return r;
  }
  double min_der = *std::min_element(dm.begin(), dm.end());
  double perim = 0;
  for (int i = 0; i < M; ++i) perim += std::abs(w[(i + 1) % M] - w[i]);
  double floor = tol.separation_floor * perim / M;
  double min_sep = INFINITY;
  for (int i = 0; i < M; ++i)
    for (int j = i + 1; j < M; ++j) min_sep = std::min(min_sep, std::abs(w[i] - w[j]));
  int crossings = 0;
  for (int i = 0; i < M && !crossings; ++i)
    for (int j = i + 2; j < M; ++j) {
      if (i == 0 && j == M - 1) continue;
      if (proper_cross(w[i], w[(i + 1) % M], w[j], w[(j + 1) % M])) {
        ++crossings;
        break;
      }
    }
  double step = 0;
  double turns = winding_number(w, wc[0], &step);
  long k = std::lround(turns);
  bool sampled = step <= tol.max_turn && std::abs(turns - double(k)) * 2 * std::numbers::pi <= tol.winding_slack;
  r.details = "min|(f^n)'|=" + format_double(min_der) + " min_sep=" + format_double(min_sep) +
              " floor=" + format_double(floor) + " winding=" + std::to_string(k) +
              (crossings ? " self-intersecting" : "") + (sampled ? "" : " UnderSampled");
  if (!sampled) {
    r.margin = -1;
    return r;
  }
  if (k != 1) {
    r.margin = -double(std::abs(k - 1));
    return r;
  }
  if (crossings) {
    r.margin = -1;
    return r;
  }
  if (!(min_der > 0)) {
    r.margin = -1;
    return r;
  }
  // a critical point just inside the contour folds the image into a loop far
  // smaller than the sample spacing; count them directly
  auto crit = critical_count(f, zs, n);
  if (!crit || *crit != 0) {
    r.details += crit ? " critical_points=" + std::to_string(*crit) : " critical count unresolved";
    r.margin = -1;
    return r;
  }
  r.margin = std::min(1.0, (min_sep - floor) / floor);
  r.pass = r.margin > 0;
  return r;
}

CheckResult check_containment(const Polynomial& f, const CompactSet& source, int n, const TargetRegion& target,
                              const Tolerances& tol, const CheckResult* univalence) {
  if (n < 1) throw Error(Status::InvalidArgument, "containment needs n >= 1");
  CheckResult r;
  r.name = "containment n=" + std::to_string(n);
  auto zs = source.boundary(tol.boundary_samples);
  std::vector<cd> w;
  if (!iterate_samples(f, zs, n, w)) {
    r.margin = -1e300;
    r.details = "overflow";
    return r;
  }
  if (target.kind == TargetRegion::Kind::Disk) {
    double worst = 0;
    for (auto z : w) worst = std::max(worst, std::abs(z - target.center));
    r.margin = target.radius - worst;
    r.details = "max|f^n - c|=" + format_double(worst);
    CheckResult u = univalence ? *univalence : check_univalence(f, source, n, tol);
    r.pass = r.margin > 0 && u.pass;
    if (!u.pass) {
      r.details += " (no univalence certificate)";
      r.margin = std::min(r.margin, u.margin);
    }
  } else {
    double lo = INFINITY, hi = 0;
    for (auto z : w) lo = std::min(lo, std::abs(z)), hi = std::max(hi, std::abs(z));
    r.margin = std::min(target.outer - hi, lo - target.inner);
    r.details = "modulus in [" + format_double(lo) + ", " + format_double(hi) + "]";
    r.pass = r.margin > 0;
  }
  return r;
}

CheckResult check_fixed_point(const Polynomial& f, cd p0, cd multiplier, const Tolerances& tol) {
  CheckResult r;
  r.name = "fixed point";
  cq v, dv;
  try {
    f.eval2_wide(cq(p0), v, dv);
  } catch (const Error&) {
    r.margin = -1;
    r.details = "overflow";
    return r;
  }
  double e1 = absd(v - cq(p0)), e2 = absd(dv - cq(multiplier));
  r.details = "|f(p)-p|=" + format_double(e1) + " |f'(p)-m|=" + format_double(e2);
  r.margin = std::min({1 - e1 / tol.fixed_point, 1 - e2 / tol.fixed_point, 1 - std::abs(multiplier)});
  r.pass = e1 < tol.fixed_point && e2 < tol.fixed_point && std::abs(multiplier) < 1;
  return r;
}

CheckResult check_preimages(const Polynomial& f, const std::vector<cq>& xs, const std::vector<int>& schedule,
                            cd fixed_pt, const Tolerances& tol) {
  CheckResult r;
  r.name = "preimages";
  double worst = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    // wide arithmetic: at high degree binary128 Horner cancellation alone
    // exceeds the tolerance
    cq z = xs[i];
    double e = iterate_wide(f, z, schedule.at(i)) ? absd(z - cq(fixed_pt)) : INFINITY;
    worst = std::max(worst, e);
    r.details += (i ? " " : "") + format_double(e);
  }
  r.margin = 1 - worst / tol.preimage;
  r.pass = worst < tol.preimage;
  return r;
}

CheckResult check_accumulation(const std::vector<cd>& xs, const CompactSet& omega, double delta) {
  if (!(delta > 0)) throw Error(Status::InvalidArgument, "accumulation needs delta > 0");
  CheckResult r;
  r.name = "accumulation";
  std::vector<cd> proj;
  for (auto x : xs) proj.push_back(project_to_boundary(omega, x));
  double gap = 0;
  for (auto s : omega.boundary(1024)) {
    double d = INFINITY;
    for (auto p : proj) d = std::min(d, std::abs(s - p));
    gap = std::max(gap, d);
  }
  r.margin = delta - gap;
  r.pass = gap <= delta;
  r.details = "worst gap " + format_double(gap) + " vs " + format_double(delta);
  return r;
}

CheckResult check_cauchy(const Polynomial& f, const Polynomial& g, double radius, double bound, int samples) {
  CheckResult r;
  r.name = "cauchy";
  auto zs = CompactSet::disk(0.0, radius).boundary(samples);
  double m = 0;
  try {
    m = sup_deviation(f, g, zs);
  } catch (const Error&) {
    m = INFINITY;
  }
  r.margin = bound - m;
  r.pass = m <= bound;
  r.details = "sup|f_{k+1}-f_k| on |z|=" + format_double(radius) + " is " + format_double(m);
  return r;
}

}  // namespace wander
