#include "approximation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>

namespace wander {

namespace {

bool less_point(const cq& a, const cq& b) {
  if (a.re != b.re) return a.re < b.re;
  return a.im < b.im;
}

std::vector<HermiteConstraint> canonical(std::vector<HermiteConstraint> c) {
  std::stable_sort(c.begin(), c.end(), [](auto& a, auto& b) { return less_point(a.point, b.point); });
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (absd(c[i].point - c[j].point) < 1e-8)
        throw Error(Status::IllConditioned, "constraint points closer than 1e-8");
  return c;
}

std::vector<const ApproxPiece*> canonical(const std::vector<ApproxPiece>& pieces) {
  std::vector<const ApproxPiece*> p;
  for (auto& x : pieces) p.push_back(&x);
  std::stable_sort(p.begin(), p.end(), [](auto a, auto b) {
    cd ca = a->set.centroid(), cb = b->set.centroid();
    if (ca.real() != cb.real()) return ca.real() < cb.real();
    if (ca.imag() != cb.imag()) return ca.imag() < cb.imag();
    return a->set.perimeter() < b->set.perimeter();
  });
  return p;
}

struct Nodes {
  std::vector<cd> roots;  // with multiplicity
  cd eval(cd z) const {
    cd r = 1;
    for (auto x : roots) r *= (z - x);
    return r;
  }
};

// dense sup deviation of p from each piece target; falls back to binary128
// where the double evaluation's error bound is not small against eps
std::vector<double> piece_margins(const Polynomial& p, const std::vector<const ApproxPiece*>& pieces, int m,
                                  double phase, double eps) {
  std::vector<double> out;
  for (auto pc : pieces) {
    auto zs = pc->set.boundary(m, phase);
    std::vector<double> dev(zs.size());
    parallel_for(zs.size(), [&](std::size_t i) {
      double err = 0;
      cd v = p.eval_fast(zs[i], &err);
      cq t = pc->target.eval(cq(zs[i]));
      if (std::isfinite(v.real()) && std::isfinite(v.imag()) && err < 1e-4 * eps &&
          std::abs(t.d()) < 1e300) {
        dev[i] = std::abs(v - t.d()) + err;
      } else {
        try {
          dev[i] = absd(p.eval(cq(zs[i])) - t);
        } catch (const Error&) {
          dev[i] = INFINITY;
        }
      }
    });
    double m1 = 0;
    for (double d : dev) m1 = std::max(m1, std::isnan(d) ? INFINITY : d);
    out.push_back(m1);
  }
  return out;
}

double residual_of(const Polynomial& p, const std::vector<HermiteConstraint>& cons) {
  double r = 0;
  for (auto& c : cons) {
    cq v, dv;
    try {
      p.eval2_wide(c.point, v, dv);
    } catch (const Error&) {
      return INFINITY;
    }
    r = std::max(r, absd(v - c.value));
    if (c.deriv) r = std::max(r, absd(dv - *c.deriv));
  }
  return r;
}

// the stored coefficients carry rounding of order eps * sum |c_j| |z|^j at
// far-out nodes; measure it exactly and subtract the Hermite interpolant of
// the defect
void snap(Polynomial& p, const std::vector<HermiteConstraint>& cons) {
  if (cons.empty()) return;
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<HermiteConstraint> defect;
    for (auto& c : cons) {
      cq v, dv;
      p.eval2_wide(c.point, v, dv);
      defect.push_back({c.point, v - c.value, c.deriv ? std::optional<cq>(dv - *c.deriv) : std::nullopt});
    }
    p = p - hermite_interpolant(defect);
  }
}

}  // namespace

cq TargetFn::eval(cq z) const {
  switch (kind) {
    case Kind::Affine: return cq(alpha) * z + cq(beta);
    case Kind::Constant: return cq(beta);
    case Kind::Poly: return poly.eval(z);
  }
  return {};
}

Polynomial TargetFn::as_polynomial() const {
  switch (kind) {
    case Kind::Affine: return Polynomial::affine(alpha, beta);
    case Kind::Constant: return Polynomial::constant(beta);
    case Kind::Poly: return poly;
  }
  return {};
}

int fit_sample_count(int d) { return std::max(256, 32 * d); }

Polynomial hermite_interpolant(const std::vector<HermiteConstraint>& constraints) {
  auto cons = canonical(constraints);
  std::vector<cq> z, c;
  std::vector<std::optional<cq>> der;
  for (auto& k : cons) {
    z.push_back(k.point);
    c.push_back(k.value);
    der.push_back(std::nullopt);
    if (k.deriv) {
      z.push_back(k.point);
      c.push_back(k.value);
      der.push_back(k.deriv);
    }
  }
  std::size_t m = z.size();
  if (m == 0) return Polynomial();
  for (std::size_t j = 1; j < m; ++j)
    for (std::size_t i = m - 1; i >= j; --i) {
      if (z[i] == z[i - j]) c[i] = *der[i];  // only j == 1 for double nodes
      else c[i] = (c[i] - c[i - 1]) / (z[i] - z[i - j]);
      if (i == j) break;
    }
  std::vector<cq> p{c[m - 1]};
  for (std::size_t i = m - 1; i-- > 0;) {
    // p <- p (z - z_i) + c_i
    std::vector<cq> n(p.size() + 1);
    for (std::size_t k = 0; k < p.size(); ++k) {
      n[k + 1] += p[k];
      n[k] -= z[i] * p[k];
    }
    n[0] += c[i];
    p.swap(n);
  }
  return Polynomial(std::move(p));
}

Polynomial node_polynomial(const std::vector<cq>& points, const std::vector<int>& multiplicity) {
  std::vector<cq> pts = points;
  std::vector<int> mult = multiplicity;
  mult.resize(pts.size(), 1);
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return less_point(pts[a], pts[b]); });
  std::vector<cq> w{cq(1.0)};
  for (auto i : order)
    for (int k = 0; k < mult[i]; ++k) {
      std::vector<cq> n(w.size() + 1);
      for (std::size_t j = 0; j < w.size(); ++j) {
        n[j + 1] += w[j];
        n[j] -= pts[i] * w[j];
      }
      w.swap(n);
    }
  return Polynomial(std::move(w));
}

FitResult verify_fit(const Polynomial& p, const ApproxProblem& problem, double safety, double phase) {
  FitResult r;
  r.poly = p;
  r.degree_used = p.degree();
  auto pieces = canonical(problem.pieces);
  int m = 4 * fit_sample_count(std::max(8, p.degree()));
  r.per_piece_margin = piece_margins(p, pieces, m, phase, problem.epsilon);
  // report in the caller's piece order
  std::vector<double> ordered(problem.pieces.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) ordered[std::size_t(pieces[i] - problem.pieces.data())] = r.per_piece_margin[i];
  r.per_piece_margin = ordered;
  r.constraint_residual = residual_of(p, problem.constraints);
  double worst = 0;
  for (double d : r.per_piece_margin) worst = std::max(worst, d);
  r.success = worst * safety < problem.epsilon && r.constraint_residual < 1e-10;
  r.status = r.success ? Status::Ok : Status::DegreeCapExceeded;
  return r;
}

FitResult constrained_runge(const ApproxProblem& problem, const FitOptions& opt) {
  using Eigen::MatrixXcd;
  using Eigen::VectorXcd;
  if (!(problem.epsilon > 0)) throw Error(Status::InvalidArgument, "epsilon must be positive");
  if (problem.pieces.empty()) throw Error(Status::InvalidArgument, "no pieces");
  auto pieces = canonical(problem.pieces);
  auto cons = canonical(problem.constraints);
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      double h = std::max(pieces[i]->set.h(), pieces[j]->set.h());
      if (set_distance(pieces[i]->set, pieces[j]->set) <= std::max(2 * h, 1e-12))
        throw Error(Status::PiecesOverlap, "approximation pieces intersect");
    }

  Polynomial q = hermite_interpolant(cons);
  Nodes W;
  std::vector<cq> pts;
  std::vector<int> mult;
  for (auto& c : cons) {
    pts.push_back(c.point);
    mult.push_back(c.deriv ? 2 : 1);
    W.roots.push_back(c.point.d());
    if (c.deriv) W.roots.push_back(c.point.d());
  }
  Polynomial Wp = node_polynomial(pts, mult);
  int degW = int(W.roots.size());
  int capR = opt.degree_cap - degW;
  FitResult best;
  best.status = Status::DegreeCapExceeded;
  best.per_piece_margin.assign(problem.pieces.size(), INFINITY);
  if (capR < 0 || q.degree() > opt.degree_cap) {
    best.message = "degree cap below the constraint count";
    return best;
  }
  std::vector<int> degs;
  for (int d = 8; d < capR; d *= 2) degs.push_back(d);
  degs.push_back(capR);

  const double eps = problem.epsilon;
  const std::size_t P = pieces.size();
  double best_worst = INFINITY;

  for (int d : degs) {
    int n = fit_sample_count(d);
    std::size_t N = P * std::size_t(n);
    VectorXcd Z(N), b(N), v0(N), w(N);
    std::vector<std::size_t> owner(N);
    double wt = std::sqrt(double(P) / n);
    for (std::size_t k = 0; k < P; ++k) {
      auto zs = pieces[k]->set.boundary(n);
      parallel_for(zs.size(), [&](std::size_t i) {
        std::size_t r = k * n + i;
        Z(r) = zs[i];
        owner[r] = k;
        w(r) = wt;
        cq diff = pieces[k]->target.eval(cq(zs[i])) - q.eval(cq(zs[i]));
        b(r) = wt * diff.d();
        v0(r) = wt * W.eval(zs[i]);
      });
    }
    if (!b.allFinite() || !v0.allFinite()) continue;

    // Arnoldi: orthonormal basis of {w W(z) z^j} on the samples
    MatrixXcd Q(N, d + 1);
    MatrixXcd H = MatrixXcd::Zero(d + 2, d + 1);
    double nv = v0.norm();
    Q.col(0) = v0 / nv;
    int dd = d;
    for (int j = 0; j < d; ++j) {
      VectorXcd v = Z.cwiseProduct(Q.col(j));
      for (int pass = 0; pass < 2; ++pass) {
        VectorXcd hc = Q.leftCols(j + 1).adjoint() * v;
        v.noalias() -= Q.leftCols(j + 1) * hc;
        H.block(0, j, j + 1, 1) += hc;
      }
      double hn = v.norm();
      if (!(hn > 1e-300)) {
        dd = j;
        break;
      }
      H(j + 1, j) = hn;
      Q.col(j + 1) = v / hn;
    }
    if (dd < d) {
      Q.conservativeResize(Eigen::NoChange, dd + 1);
      H.conservativeResize(dd + 2, dd + 1);
    }
    const int m = dd + 1;
    VectorXcd y0 = Q.adjoint() * b;

    // growth penalty on |p| over a circle
    bool control = opt.control_radius > 0;
    MatrixXcd Rc;
    VectorXcd ch;
    double cn = 0;
    if (control) {
      int nc = std::max(1024, 4 * dd);
      double wc = 1.0 / std::sqrt(double(nc));
      MatrixXcd C(nc, m);
      VectorXcd cc(nc);
      auto zc = CompactSet::disk(0.0, opt.control_radius).boundary(nc, 0.25);
      for (int i = 0; i < nc; ++i) {
        std::vector<cd> B(m);
        B[0] = 1.0 / nv;
        for (int j = 0; j + 1 < m; ++j) {
          cd s = zc[i] * B[j];
          for (int l = 0; l <= j; ++l) s -= B[l] * H(l, j);
          B[j + 1] = s / H(j + 1, j).real();
        }
        cd Wz = wc * W.eval(zc[i]);
        for (int j = 0; j < m; ++j) C(i, j) = Wz * B[j];
        cc(i) = -wc * q.eval(cq(zc[i])).d();
      }
      if (C.allFinite() && cc.allFinite()) {
        Eigen::HouseholderQR<MatrixXcd> qr(C);
        Rc = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
        ch = (qr.householderQ().adjoint() * cc).head(m);
        cn = Rc.squaredNorm();
      }
      control = cn > 0 && std::isfinite(cn);
    }

    const int K = control ? 64 : 0;  // lambda_k = 10^-k / cn, k = K means lambda = 0
    auto lambda_of = [&](int k) { return k >= K ? 0.0 : std::pow(10.0, -k) / cn; };
    auto solve = [&](int k) -> VectorXcd {
      double lam = lambda_of(k);
      if (lam == 0) return y0;
      double s = std::sqrt(lam);
      MatrixXcd A(2 * m, m);
      A.topRows(m).setIdentity();
      A.bottomRows(m) = s * Rc;
      VectorXcd rhs(2 * m);
      rhs.head(m) = y0;
      rhs.tail(m) = s * ch;
      return A.householderQr().solve(rhs);
    };
    auto fit_margins = [&](const VectorXcd& y) {
      VectorXcd r = Q * y - b;
      std::vector<double> mg(P, 0.0);
      for (std::size_t i = 0; i < N; ++i) mg[owner[i]] = std::max(mg[owner[i]], std::abs(r(i)) / w(i).real());
      return mg;
    };
    auto passes = [&](const std::vector<double>& mg) {
      double worst = *std::max_element(mg.begin(), mg.end());
      if (worst < best_worst) best_worst = worst;
      return worst * opt.safety < eps;
    };

    std::vector<int> state(K + 1, -1);
    auto test = [&](int k) {
      if (state[k] < 0) state[k] = passes(fit_margins(solve(k))) ? 1 : 0;
      return state[k] == 1;
    };
    if (!test(K)) {
      if (best_worst < INFINITY) best.message = "best sampled deviation " + format_double(best_worst);
      continue;
    }
    // largest penalty that still fits (assumes the verdict is monotone in k)
    int lo = 0, hi = K;
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (test(mid)) hi = mid;
      else lo = mid + 1;
    }
    for (int k = lo; k <= K; ++k) {
      if (!test(k)) continue;
      VectorXcd y = solve(k);
      // expand r = sum y_j q_j into monomials in binary128
      std::vector<std::vector<cq>> qs;
      qs.push_back({cq(1.0 / nv)});
      std::vector<cq> r(m);
      r[0] = cq(y(0)) * qs[0][0];
      for (int j = 0; j + 1 < m; ++j) {
        std::vector<cq> nxt(j + 2);
        for (int l = 0; l <= j; ++l) nxt[l + 1] += qs[j][l];
        for (int i = 0; i <= j; ++i) {
          cq hij(H(i, j));
          for (int l = 0; l <= i; ++l) nxt[l] -= hij * qs[i][l];
        }
        f128 hd = H(j + 1, j).real();
        for (auto& a : nxt) a = cq(a.re / hd, a.im / hd);
        cq yj(y(j + 1));
        for (int l = 0; l <= j + 1; ++l) r[l] += yj * nxt[l];
        qs.push_back(std::move(nxt));
      }
      Polynomial p;
      try {
        p = q + Wp * Polynomial(r);
      } catch (const Error&) {
        continue;
      }
      auto margins = piece_margins(p, pieces, 4 * n, opt.phase + 0.5, eps);
      double worst = *std::max_element(margins.begin(), margins.end());
      best_worst = std::min(best_worst, worst);
      if (worst * opt.safety < eps) {
        FitResult res;
        res.success = true;
        snap(p, cons);
        res.poly = p;
        res.per_piece_margin.assign(problem.pieces.size(), 0.0);
        for (std::size_t i = 0; i < P; ++i)
          res.per_piece_margin[std::size_t(pieces[i] - problem.pieces.data())] = margins[i];
        res.constraint_residual = residual_of(p, cons);
        res.degree_used = p.degree();
        res.ridge = lambda_of(k);
        return res;
      }
    }
    best.message = "best sampled deviation " + format_double(best_worst);
  }
  best.degree_used = opt.degree_cap;
  if (best.message.empty()) best.message = "no degree up to the cap reached the tolerance";
  best.per_piece_margin.assign(problem.pieces.size(), best_worst);
  return best;
}

}  // namespace wander
