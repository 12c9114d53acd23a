#include "stage_util.hpp"

namespace wander {

using namespace detail;

StageGeometry prepare_geometry(const Scenario& sc) {
  sc.validate();
  StageGeometry g;
  double rho = sc.omega_radius > 0 ? sc.omega_radius : default_omega_radius(sc.mode);
  g.normalization = normalize(sc.region, sc.mode, rho);
  g.region = sc.region.transformed(g.normalization);
  double h = sc.resolution > 0 ? sc.resolution * std::abs(g.normalization.alpha) : g.region.diameter() / 200;
  g.omega = rasterize(g.region, h);
  int levels = sc.sequence_length + 1;
  auto radii = sc.tower.empty() ? default_tower(sc.mode, levels) : sc.tower;
  if (int(radii.size()) < levels) throw Error(Status::ConfigError, "tower has fewer levels than the sequence needs");
  radii.resize(std::size_t(levels));
  g.tower = build_tower(g.omega, radii);
  for (auto z : g.tower.sets[0].boundary(1024)) {
    bool ok = sc.mode == Mode::Escaping
                  ? std::abs(z - 3.0) < 1
                  : (std::abs(z - 2.0 / 3) < 1.0 / 9 && std::abs(z) > 1.0 / 3 && std::abs(z) < 1);
    if (!ok) throw Error(Status::ConfigError, "U_0 does not fit inside the model disk");
  }
  g.xs = boundary_sequence(g.omega, g.tower, sc.sequence_length);
  cd anchor = sc.mode == Mode::Escaping ? cd(3.0) : cd(2.0 / 3);
  g.witness = g.omega.contains(anchor) ? anchor : g.omega.centroid();
  return g;
}

double escaping_eps_cap(int k) { return std::ldexp(1.0, -k); }

Certificate certify_escaping(const Polynomial& f, int k, const StageGeometry& geo,
                             const std::map<int, std::vector<cq>>& tables, const Tolerances& tol,
                             const Polynomial* previous) {
  Certificate c;
  c.stage = k;
  const CompactSet& Uk = geo.tower.sets.at(std::size_t(k));
  for (int n = 1; n <= k; ++n) {
    auto u = check_univalence(f, Uk, n, tol, &geo.witness);
    auto t = check_containment(f, Uk, n, TargetRegion::disk(4.0 * n + 3, 1.0), tol, &u);
    u.name = "univalence on U_k, n=" + std::to_string(n);
    t.name = "escape containment, n=" + std::to_string(n);
    c.checks.push_back(t);
    c.checks.push_back(u);
  }
  std::vector<cq> xs;
  std::vector<int> sched;
  for (int n = 1; n <= k; ++n) {
    xs.push_back(tables.at(n).at(0));
    sched.push_back(n);
  }
  auto pre = check_preimages(f, xs, sched, 0.0, tol);
  pre.name = "preimage chains";
  c.checks.push_back(pre);

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

  auto fp = check_fixed_point(f, 0.0, 0.5, tol);
  c.checks.push_back(fp);
  if (previous && k >= 2) {
    auto ca = check_cauchy(f, *previous, 4.0 * (k - 1) + 1, escaping_eps_cap(k - 1) * tol.cauchy_safety);
    c.checks.push_back(ca);
  }
  return c;
}

Certificate summary_escaping(const Polynomial& f, int K, const StageGeometry& geo, const Tolerances& tol) {
  Certificate c;
  c.stage = K;
  for (int n = 1; n <= K; ++n) {
    auto u = check_univalence(f, geo.omega, n, tol, &geo.witness);
    auto t = check_containment(f, geo.omega, n, TargetRegion::disk(4.0 * n + 3, 1.0), tol, &u);
    u.name = "univalence on omega, n=" + std::to_string(n);
    t.name = "omega containment, n=" + std::to_string(n);
    c.checks.push_back(t);
    c.checks.push_back(u);
  }
  std::vector<cq> xs;
  std::vector<int> sched;
  for (int n = 1; n <= K && n <= int(geo.xs.size()); ++n) {
    xs.push_back(cq(geo.xs[std::size_t(n - 1)]));
    sched.push_back(n);
  }
  auto pre = check_preimages(f, xs, sched, 0.0, tol);
  pre.name = "preimage chains";
  c.checks.push_back(pre);
  c.checks.push_back(check_fixed_point(f, 0.0, 0.5, tol));
  double delta = geo.omega.diameter() * std::max(0.1, 4.0 / std::max<std::size_t>(1, geo.xs.size()));
  c.checks.push_back(check_accumulation(geo.xs, geo.omega, delta));
  return c;
}

ConstructionState init_escaping(const Scenario& sc) {
  ConstructionState st;
  st.mode = Mode::Escaping;
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
  double eps = sc.eps_scale * escaping_eps_cap(1);
  for (int halv = 0; halv <= sc.max_halvings; ++halv, eps *= 0.5) {
    ApproxProblem pb;
    pb.epsilon = eps;
    pb.pieces = {{CompactSet::disk(0.0, 1.0), TargetFn::affine(0.5, 0.0)}, {U1, TargetFn::affine(1.0, 4.0)}};
    pb.constraints = {{cq(0.0), cq(0.0), cq(0.5)}, {cq(g.xs.at(0)), cq(0.0), std::nullopt}};
    FitOptions fo;
    fo.degree_cap = sc.degree_cap;
    fo.control_radius = 7.5;
    fo.phase = jitter(sc.seed);
    FitResult fr;
    try {
      fr = constrained_runge(pb, fo);
    } catch (const Error& e) {
      mark_failed(st, e.code(), "fit, stage 1", e.what());
      return st;
    }
    if (!fr.success) {
      mark_failed(st, Status::DegreeCapExceeded, "fit, stage 1", fr.message);
      return st;
    }
    auto u = check_univalence(fr.poly, U1, 1, sc.tol, &g.witness);
    auto c = check_containment(fr.poly, U1, 1, TargetRegion::disk(7.0, 1.0), sc.tol, &u);
    if (!(u.pass && c.pass)) {
      if (halv == sc.max_halvings)
        mark_failed(st, Status::ConstructionFailed, u.pass ? c.name : u.name, u.pass ? c.details : u.details);
      continue;
    }
    st.k = 1;
    st.f = fr.poly;
    st.history.push_back(fr.poly);
    st.eps_history.push_back(eps);
    st.orbit_tables[1] = {cq(g.xs[0])};
    if (g.xs.size() >= 2) st.orbit_tables[2] = record_orbit(st.f, g.xs[1], 2);
    StageRecord rec;
    rec.stage = 1;
    rec.eps = eps;
    rec.degree = fr.poly.degree();
    rec.halvings = halv;
    rec.ridge = fr.ridge;
    rec.fit_margins = fr.per_piece_margin;
    rec.constraint_residual = fr.constraint_residual;
    rec.certificate = certify_escaping(st.f, 1, g, st.orbit_tables, sc.tol);
    rec.seconds = now() - t0;
    st.stages.push_back(rec);
    fail_on_certificate(st, rec.certificate);
    return st;
  }
  return st;
}

void step_escaping(ConstructionState& st, const Scenario& sc) {
  if (st.failed) return;
  const auto& g = st.geo;
  const int k = st.k;
  if (int(g.tower.sets.size()) <= k + 1 || int(g.xs.size()) < k + 1) {
    mark_failed(st, Status::ConfigError, "sequence", "not enough tower levels / sequence points");
    return;
  }
  double t0 = now();
  const Polynomial fk = st.f;
  const CompactSet& U = g.tower.sets[std::size_t(k + 1)];
  std::vector<cd> cloud;
  if (!iterate_samples(fk, U.boundary(sc.tol.boundary_samples), k, cloud)) {
    mark_failed(st, Status::Overflow, "image of U_{k+1}", "overflow");
    return;
  }
  std::vector<cd> wit;
  iterate_samples(fk, {g.witness}, k, wit);
  cloud.push_back(wit.at(0));
  const cq xk = st.orbit_tables.at(k + 1).at(std::size_t(k));
  const double R1 = 4.0 * k + 1;
  Disk enc = enclosing_disk(cloud);
  double d1 = INFINITY, d2 = INFINITY;
  for (auto w : cloud) {
    d1 = std::min(d1, std::abs(w) - R1);
    d2 = std::min(d2, std::abs(w - xk.d()));
  }
  double delta = std::min(0.25 * std::min(d1, d2), 0.5 * enc.radius);
  if (!(delta > 0)) {
    mark_failed(st, Status::Collision, "cover K_3", "image of U_{k+1} meets K_1 or K_2");
    return;
  }
  CompactSet K1 = CompactSet::disk(0.0, R1);
  CompactSet K3;
  try {
    K3 = cover_compact(cloud, delta, {K1, CompactSet::disk(xk.d(), 0.0)});
  } catch (const Error& e) {
    mark_failed(st, e.code(), "cover K_3", e.what());
    return;
  }
  std::vector<HermiteConstraint> cons{{cq(0.0), cq(0.0), cq(0.5)}};
  for (int n = 1; n <= k + 1; ++n) {
    const auto& t = st.orbit_tables.at(n);
    for (int j = 0; j < n && j < int(t.size()); ++j) {
      if (n == k + 1 && j == k) cons.push_back({t[std::size_t(j)], cq(0.0), std::nullopt});
      else cons.push_back({t[std::size_t(j)], fk.eval_wide(t[std::size_t(j)]), std::nullopt});
    }
  }
  double eps = st.eps_scale * escaping_eps_cap(k + 1);
  for (int halv = 0; halv <= sc.max_halvings; ++halv, eps *= 0.5) {
    ApproxProblem pb;
    pb.epsilon = eps;
    pb.pieces = {{K1, TargetFn::polynomial(fk)}, {K3, TargetFn::affine(1.0, 4.0)}};
    pb.constraints = cons;
    FitOptions fo;
    fo.degree_cap = sc.degree_cap;
    fo.control_radius = 4.0 * (k + 1) + 3.5;
    fo.phase = jitter(sc.seed + std::uint64_t(k));
    FitResult fr;
    try {
      fr = constrained_runge(pb, fo);
    } catch (const Error& e) {
      mark_failed(st, e.code(), "fit, stage " + std::to_string(k + 1), e.what());
      return;
    }
    if (!fr.success) {
      mark_failed(st, Status::DegreeCapExceeded, "fit, stage " + std::to_string(k + 1),
                  fr.message + " at eps " + format_double(eps));
      return;
    }
    const Polynomial& p = fr.poly;
    bool ok = true;
    std::string bad, why;
    for (int n = 1; n <= k + 1 && ok; ++n) {
      auto u = check_univalence(p, U, n, sc.tol, &g.witness);
      auto c = check_containment(p, U, n, TargetRegion::disk(4.0 * n + 3, 1.0), sc.tol, &u);
      if (!u.pass) ok = false, bad = u.name, why = u.details;
      else if (!c.pass) ok = false, bad = c.name, why = c.details;
    }
    if (!ok) {
      if (halv == sc.max_halvings) mark_failed(st, Status::ConstructionFailed, bad, why);
      continue;
    }
    st.k = k + 1;
    st.f = p;
    st.history.push_back(p);
    st.eps_history.push_back(eps);
    if (int(g.xs.size()) >= k + 2) st.orbit_tables[k + 2] = record_orbit(p, g.xs[std::size_t(k + 1)], k + 2);
    StageRecord rec;
    rec.stage = k + 1;
    rec.eps = eps;
    rec.degree = p.degree();
    rec.halvings = halv;
    rec.ridge = fr.ridge;
    rec.fit_margins = fr.per_piece_margin;
    rec.constraint_residual = fr.constraint_residual;
    rec.certificate = certify_escaping(p, k + 1, g, st.orbit_tables, sc.tol, &fk);
    rec.seconds = now() - t0;
    st.stages.push_back(rec);
    fail_on_certificate(st, rec.certificate);
    return;
  }
}

ConstructionState run_escaping(const Scenario& sc) {
  if (sc.stages < 1) throw Error(Status::ConfigError, "K must be >= 1");
  ConstructionState st = init_escaping(sc);
  while (!st.failed && st.k < sc.stages) step_escaping(st, sc);
  return st;
}

BudgetReport stay_away_budget(const ConstructionState& st, cd z_ref, const Tolerances& tol) {
  BudgetReport r;
  const auto& om = st.geo.omega;
  r.dist = om.contains(z_ref) ? om.distance_to_boundary(z_ref) : 0.0;
  // sum_{n>=0} sum_{j>n} eps_j = sum_j j eps_j, recorded values then the cap
  double tail = 0;
  int K = int(st.eps_history.size());
  for (int j = 1; j <= K; ++j) tail += j * st.eps_history[std::size_t(j - 1)];
  for (int j = K + 1; j < 400; ++j) tail += j * st.eps_scale * escaping_eps_cap(j);
  r.tail = tail;
  r.ok = r.dist > 0 && tail < 0.5 * r.dist;
  if (!r.ok) return r;
  auto bs = om.boundary(tol.boundary_samples);
  for (int n = 0; n <= st.k; ++n) {
    std::vector<cd> wb, wz;
    if (!iterate_samples(st.f, bs, n, wb) || !iterate_samples(st.f, {z_ref}, n, wz)) {
      r.ok = false;
      r.min_dist.push_back(0);
      continue;
    }
    double m = INFINITY;
    for (auto w : wb) m = std::min(m, std::abs(w - wz[0]));
    r.min_dist.push_back(m);
    if (!(m > r.dist - 2 * tail)) r.ok = false;
  }
  return r;
}

ConstructionState run(const Scenario& sc) {
  return sc.mode == Mode::Escaping ? run_escaping(sc) : run_oscillating(sc);
}

}  // namespace wander
