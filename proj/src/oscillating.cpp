#include <numbers>

#include "stage_util.hpp"

namespace wander {

using namespace detail;

AnnulusSpec annulus(int k) { return {0.0, 1.0 / (2 * k + 1), 1.0 / (2 * k + 3)}; }

AffineMap linear_into_annulus(const Disk& hull, const AnnulusSpec& a) {
  if (!(hull.radius >= 0)) throw Error(Status::InvalidArgument, "linear_into_annulus: negative hull radius");
  // image disk D(m, g/4) on the positive real axis, clearance g/4 on both sides
  double g = a.outer - a.inner;
  cd m = a.center + 0.5 * (a.inner + a.outer);
  if (hull.radius == 0) return {0.0, m};
  AffineMap T{g / (4 * hull.radius), 0.0};
  T.beta = m - T.alpha * hull.center;
  return T;
}

namespace {

double eps_cap(int k) { return k <= 1 ? 0.5 : std::ldexp(1.0, -(k - 1)); }

// the conditions that stage kk of the oscillating construction must satisfy on
// the set U; m runs over every iterate up to N_kk + kk
std::vector<CheckResult> stage_checks(const Polynomial& f, const CompactSet& U, int kk, const cd& witness,
                                      const Tolerances& tol, const char* label, bool inner = true) {
  std::vector<CheckResult> out;
  if (inner) {
    // the disk that carries the next inward visit out to 4n
    CompactSet D = CompactSet::disk(0.0, 1.0 / (2 * kk + 1));
    for (int n = 1; n <= kk; ++n) {
      cd c0 = 0.0;
      auto u = check_univalence(f, D, n, tol, &c0);
      auto c = check_containment(f, D, n, TargetRegion::disk(4.0 * n, 1.0), tol, &u);
      u.name = "univalence on inner disk, n=" + std::to_string(n);
      c.name = "inner disk containment, n=" + std::to_string(n);
      out.push_back(c);
      out.push_back(u);
    }
  }
  int M = schedule_N(kk) + kk;
  std::vector<CheckResult> uni(std::size_t(M + 1));
  for (int m = 1; m <= M; ++m) {
    uni[std::size_t(m)] = check_univalence(f, U, m, tol, &witness);
    uni[std::size_t(m)].name = std::string("univalence on ") + label + ", n=" + std::to_string(m);
  }
  for (int n = 1; n <= kk; ++n) {
    auto a = annulus(n);
    auto c1 = check_containment(f, U, schedule_N(n), TargetRegion::annulus(a.inner, a.outer), tol);
    c1.name = std::string("annulus on ") + label + ", n=" + std::to_string(n);
    int m = schedule_N(n) + n;
    auto c2 = check_containment(f, U, m, TargetRegion::disk(4.0 * n, 1.0), tol, &uni[std::size_t(m)]);
    c2.name = std::string("outward containment on ") + label + ", n=" + std::to_string(n);
    out.push_back(c1);
    out.push_back(c2);
  }
  for (int m = 1; m <= M; ++m) out.push_back(uni[std::size_t(m)]);
  return out;
}

void add_common(Certificate& c, const Polynomial& f, const std::vector<cq>& xs, const Tolerances& tol) {
  std::vector<int> sched;
  for (std::size_t i = 0; i < xs.size(); ++i) sched.push_back(schedule_N(int(i) + 1));
  auto pre = check_preimages(f, xs, sched, 1.0, tol);
  pre.name = "preimage chains";
  c.checks.push_back(pre);
  c.checks.push_back(check_fixed_point(f, 1.0, 0.5, tol));
}

bool first_failure(const std::vector<CheckResult>& cs, std::string& name, std::string& why) {
  for (auto& c : cs)
    if (!c.pass) {
      name = c.name;
      why = c.details;
      return true;
    }
  return false;
}

}  // namespace

Certificate certify_oscillating(const Polynomial& f, int k, const StageGeometry& geo,
                                const std::map<int, std::vector<cq>>& tables, const Tolerances& tol,
                                const Polynomial* previous) {
  Certificate c;
  c.stage = k;
  c.checks = stage_checks(f, geo.tower.sets.at(std::size_t(k)), k, geo.witness, tol, "U_k");
  std::vector<cq> xs;
  for (int n = 1; n <= k; ++n) xs.push_back(tables.at(n).at(0));
  add_common(c, f, xs, tol);

  CheckResult ot;
  ot.name = "orbit tables";
  double worst = 0;
  for (auto& [n, t] : tables) {
    if (n > k + 1) continue;
    for (std::size_t j = 0; j + 1 < t.size(); ++j) {
      cq z = t[j];
      double e = iterate_wide(f, z, 1) ? absd(z - t[j + 1]) / std::max(1.0, absd(t[j + 1])) : INFINITY;
      worst = std::max(worst, e);
    }
  }
  ot.margin = 1 - worst / 1e-9;
  ot.pass = worst < 1e-9;
  ot.details = "max relative mismatch " + format_double(worst);
  c.checks.push_back(ot);
  if (previous && k >= 2) {
    double R = 4.0 * (k - 1) - 2;
    if (R > 0) c.checks.push_back(check_cauchy(f, *previous, R, eps_cap(k) * tol.cauchy_safety));
  }
  return c;
}

Certificate summary_oscillating(const Polynomial& f, int K, const StageGeometry& geo, const Tolerances& tol) {
  Certificate c;
  c.stage = K;
  c.checks = stage_checks(f, geo.omega, K, geo.witness, tol, "omega", false);
  std::vector<cq> xs;
  for (int n = 1; n <= K && n <= int(geo.xs.size()); ++n) xs.push_back(cq(geo.xs[std::size_t(n - 1)]));
  add_common(c, f, xs, tol);
  double delta = geo.omega.diameter() * std::max(0.1, 4.0 / std::max<std::size_t>(1, geo.xs.size()));
  c.checks.push_back(check_accumulation(geo.xs, geo.omega, delta));
  return c;
}

std::vector<TraceRow> oscillation_trace(const Polynomial& f, int K, const StageGeometry& geo, int samples) {
  std::vector<TraceRow> rows;
  auto bs = geo.omega.boundary(samples);
  for (int n = 1; n <= K; ++n) {
    TraceRow r;
    r.n = n;
    r.inward_iterate = schedule_N(n);
    r.outward_iterate = schedule_N(n) + n;
    std::vector<cd> w;
    if (iterate_samples(f, bs, r.inward_iterate, w)) {
      r.min_modulus = INFINITY;
      for (auto z : w) r.min_modulus = std::min(r.min_modulus, std::abs(z)), r.max_modulus = std::max(r.max_modulus, std::abs(z));
    } else {
      r.min_modulus = r.max_modulus = INFINITY;
    }
    if (iterate_samples(f, bs, r.outward_iterate, w)) {
      cd s = 0;
      for (auto z : w) s += z, r.outward_deviation = std::max(r.outward_deviation, std::abs(z - 4.0 * n));
      r.outward_center = s / double(w.size());
    } else {
      r.outward_deviation = INFINITY;
    }
    rows.push_back(r);
  }
  return rows;
}

namespace {

struct Attempt {
  std::vector<ApproxPiece> pieces;
  std::vector<HermiteConstraint> cons;
  double control_radius = 0;
  double eps = 0;
};

// fits with eps halving until the stage checks on U hold; returns false and
// marks st on failure
bool fit_stage(ConstructionState& st, const Scenario& sc, Attempt at, int kk, const CompactSet& U,
               FitResult& out, int& halvings) {
  std::string label = "fit, stage " + std::to_string(kk);
  for (int halv = 0; halv <= sc.max_halvings; ++halv, at.eps *= 0.5) {
    ApproxProblem pb{at.pieces, at.cons, at.eps};
    FitOptions fo;
    fo.degree_cap = sc.degree_cap;
    fo.control_radius = at.control_radius;
    fo.phase = jitter(sc.seed + std::uint64_t(kk));
    FitResult fr;
    try {
      fr = constrained_runge(pb, fo);
    } catch (const Error& e) {
      mark_failed(st, e.code(), label, e.what());
      return false;
    }
    if (!fr.success) {
      mark_failed(st, Status::DegreeCapExceeded, label, fr.message + " at eps " + format_double(at.eps));
      return false;
    }
    std::string bad, why;
    auto cs = stage_checks(fr.poly, U, kk, st.geo.witness, sc.tol, "U_k");
    if (first_failure(cs, bad, why)) {
      if (halv == sc.max_halvings) {
        mark_failed(st, Status::ConstructionFailed, bad, why);
        return false;
      }
      continue;
    }
    out = fr;
    out.ridge = fr.ridge;
    halvings = halv;
    st.eps_history.push_back(at.eps);
    return true;
  }
  return false;
}

void accept(ConstructionState& st, const Scenario& sc, const FitResult& fr, int halvings, double t0,
            const Polynomial* previous) {
  const auto& g = st.geo;
  int kk = st.k + 1;
  st.k = kk;
  st.f = fr.poly;
  st.history.push_back(fr.poly);
  if (int(g.xs.size()) >= kk + 1)
    st.orbit_tables[kk + 1] = record_orbit(st.f, g.xs[std::size_t(kk)], schedule_N(kk + 1));
  StageRecord rec;
  rec.stage = kk;
  rec.eps = st.eps_history.back();
  rec.degree = fr.poly.degree();
  rec.halvings = halvings;
  rec.ridge = fr.ridge;
  rec.fit_margins = fr.per_piece_margin;
  rec.constraint_residual = fr.constraint_residual;
  rec.certificate = certify_oscillating(st.f, kk, g, st.orbit_tables, sc.tol, previous);
  rec.seconds = now() - t0;
  st.stages.push_back(rec);
  fail_on_certificate(st, rec.certificate);
}

double min_distance(const std::vector<cd>& pts, const std::vector<cd>& to) {
  double d = INFINITY;
  for (auto a : pts)
    for (auto b : to) d = std::min(d, std::abs(a - b));
  return d;
}

}  // namespace

ConstructionState init_oscillating(const Scenario& sc) {
  ConstructionState st;
  st.mode = Mode::Oscillating;
  st.eps_scale = sc.eps_scale;
  try {
    st.geo = prepare_geometry(sc);
  } catch (const Error& e) {
    mark_failed(st, e.code(), "geometry", e.what());
    return st;
  }
  const auto& g = st.geo;
  const CompactSet& U1 = g.tower.sets.at(1);
  double t0 = now();
  auto bs = U1.boundary(sc.tol.boundary_samples);
  Disk hull = enclosing_disk(bs);
  hull.radius *= 1.1;
  AffineMap h4 = linear_into_annulus(hull, annulus(1));
  Attempt at;
  at.pieces = {{CompactSet::disk(0.0, 1.0 / 3), TargetFn::affine(1.0, 4.0)}, {U1, TargetFn::affine(h4.alpha, h4.beta)}};
  at.cons = {{cq(1.0), cq(1.0), cq(0.5)}, {cq(g.xs.at(0)), cq(1.0), std::nullopt}};
  at.control_radius = 4.5;
  at.eps = sc.eps_scale * eps_cap(1);
  FitResult fr;
  int halv = 0;
  if (!fit_stage(st, sc, at, 1, U1, fr, halv)) return st;
  st.orbit_tables[1] = {cq(g.xs[0])};
  accept(st, sc, fr, halv, t0, nullptr);
  return st;
}

void step_oscillating(ConstructionState& st, const Scenario& sc) {
  if (st.failed) return;
  const auto& g = st.geo;
  const int k = st.k;
  if (int(g.tower.sets.size()) <= k + 1 || int(g.xs.size()) < k + 1 || !st.orbit_tables.count(k + 1)) {
    mark_failed(st, Status::ConfigError, "sequence", "not enough tower levels / sequence points");
    return;
  }
  double t0 = now();
  const Polynomial fk = st.f;
  const CompactSet& U = g.tower.sets[std::size_t(k + 1)];
  const int Nk = schedule_N(k);
  const auto& tk1 = st.orbit_tables.at(k + 1);
  if (int(tk1.size()) < Nk + k + 1) {
    mark_failed(st, Status::Overflow, "orbit of x_{k+1}", "orbit table too short");
    return;
  }
  const cq pin = tk1[std::size_t(Nk + k)];
  const double R1 = 4.0 * k - 2;
  const CompactSet K1 = CompactSet::disk(0.0, R1);

  std::vector<cd> c3, c4, wit;
  bool ok = iterate_samples(fk, CompactSet::disk(0.0, 1.0 / (2 * k + 3)).boundary(sc.tol.boundary_samples), k, c3);
  ok = ok && iterate_samples(fk, U.boundary(sc.tol.boundary_samples), Nk + k, c4);
  ok = ok && iterate_samples(fk, {g.witness}, Nk + k, wit);
  if (!ok) {
    mark_failed(st, Status::Overflow, "stage images", "overflow while iterating the stage sets");
    return;
  }
  c4.push_back(wit[0]);
  auto dist_K1 = [&](const std::vector<cd>& c) {
    double d = INFINITY;
    for (auto w : c) d = std::min(d, std::abs(w) - R1);
    return d;
  };
  // c3 is a Jordan curve (the univalent image of a circle); the filled region
  // must stay clear of c4
  JordanRegion fill3;
  try {
    fill3 = JordanRegion::make_polygon(c3);
  } catch (const Error& e) {
    mark_failed(st, Status::Collision, "cover K_3", std::string("image circle is not simple: ") + e.what());
    return;
  }
  double gap34 = INFINITY;
  for (auto w : c4) gap34 = std::min(gap34, fill3.signed_distance(w));
  Disk e3 = enclosing_disk(c3), e4 = enclosing_disk(c4);
  double d3 = std::min({dist_K1(c3), min_distance(c3, {pin.d()}), gap34});
  double delta3 = std::min(0.25 * d3, 0.5 * e3.radius);
  if (!(delta3 > 0)) {
    mark_failed(st, Status::Collision, "cover K_3", "inward image meets K_1, the pinned point or K_4");
    return;
  }
  CompactSet K3, K4;
  try {
    K3 = cover_compact(c3, delta3, {K1, CompactSet::disk(pin.d(), 0.0)});
    double d4 = std::min(dist_K1(c4), min_distance(c4, {pin.d()}));
    for (auto w : c4) d4 = std::min(d4, K3.distance(w));
    double delta4 = std::min(0.25 * d4, 0.09 * e4.radius);
    if (!(delta4 > 0)) throw Error(Status::Collision, "outward image meets K_1, K_3 or the pinned point");
    K4 = cover_compact(c4, delta4, {K1, K3, CompactSet::disk(pin.d(), 0.0)});
  } catch (const Error& e) {
    mark_failed(st, e.code(), "cover K_3/K_4", e.what());
    return;
  }
  Disk hull = e4;
  hull.radius *= 1.1;
  AffineMap h4 = linear_into_annulus(hull, annulus(k + 1));

  Attempt at;
  at.pieces = {{K1, TargetFn::polynomial(fk)},
               {K3, TargetFn::affine(1.0, 4.0)},
               {K4, TargetFn::affine(h4.alpha, h4.beta)}};
  at.cons = {{cq(1.0), cq(1.0), cq(0.5)}};
  for (int n = 1; n <= k + 1; ++n) {
    const auto& t = st.orbit_tables.at(n);
    int len = n <= k ? schedule_N(n) : Nk + k;
    for (int j = 0; j < len && j < int(t.size()); ++j)
      at.cons.push_back({t[std::size_t(j)], fk.eval_wide(t[std::size_t(j)]), std::nullopt});
  }
  at.cons.push_back({pin, cq(1.0), std::nullopt});
  at.control_radius = 4.0 * (k + 1) + 0.5;
  at.eps = st.eps_scale * eps_cap(k + 1);
  FitResult fr;
  int halv = 0;
  if (!fit_stage(st, sc, at, k + 1, U, fr, halv)) return;
  accept(st, sc, fr, halv, t0, &fk);
}

ConstructionState run_oscillating(const Scenario& sc) {
  if (sc.stages < 1) throw Error(Status::ConfigError, "K must be >= 1");
  ConstructionState st = init_oscillating(sc);
  while (!st.failed && st.k < sc.stages) step_oscillating(st, sc);
  return st;
}

}  // namespace wander
