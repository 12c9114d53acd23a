#include "geometry.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

namespace wander {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double seg_dist(cd p, cd a, cd b) {
  cd ab = b - a;
  double L2 = std::norm(ab);
  double t = L2 > 0 ? std::clamp(((p - a) * std::conj(ab)).real() / L2, 0.0, 1.0) : 0.0;
  return std::abs(p - (a + t * ab));
}

double signed_area(const std::vector<cd>& poly) {
  double s = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    cd a = poly[i], b = poly[(i + 1) % poly.size()];
    s += a.real() * b.imag() - b.real() * a.imag();
  }
  return 0.5 * s;
}

double cross(cd a, cd b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(cd p1, cd p2, cd q1, cd q2) {
  double d1 = cross(p2 - p1, q1 - p1), d2 = cross(p2 - p1, q2 - p1);
  double d3 = cross(q2 - q1, p1 - q1), d4 = cross(q2 - q1, p2 - q1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  auto on = [](cd a, cd b, cd p, double d) {
    return d == 0 && std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
  };
  return on(p1, p2, q1, d1) || on(p1, p2, q2, d2) || on(q1, q2, p1, d3) || on(q1, q2, p2, d4);
}

bool point_in_polygon(const std::vector<cd>& poly, cd z) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    cd a = poly[i], b = poly[j];
    if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
      double x = a.real() + (z.imag() - a.imag()) / (b.imag() - a.imag()) * (b.real() - a.real());
      if (z.real() < x) in = !in;
    }
  }
  return in;
}

}  // namespace

double BBox::dist(cd z) const {
  double dx = std::max({x0 - z.real(), 0.0, z.real() - x1});
  double dy = std::max({y0 - z.imag(), 0.0, z.imag() - y1});
  return std::hypot(dx, dy);
}

double BBox::max_dist(cd z) const {
  double dx = std::max(std::abs(z.real() - x0), std::abs(z.real() - x1));
  double dy = std::max(std::abs(z.imag() - y0), std::abs(z.imag() - y1));
  return std::hypot(dx, dy);
}

// ---------------------------------------------------------------- regions

JordanRegion JordanRegion::make_disk(cd center, double radius) {
  if (!(radius > 0) || !std::isfinite(radius) || !std::isfinite(center.real()) || !std::isfinite(center.imag()))
    throw Error(Status::DegenerateRegion, "disk needs a finite positive radius");
  JordanRegion r;
  r.kind_ = Kind::Disk;
  r.disk_ = {center, radius};
  return r;
}

JordanRegion JordanRegion::make_polygon(std::vector<cd> v) {
  std::vector<cd> w;
  for (auto z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(Status::DegenerateRegion, "non-finite polygon vertex");
    if (w.empty() || w.back() != z) w.push_back(z);
  }
  while (w.size() > 1 && w.front() == w.back()) w.pop_back();
  if (w.size() < 3) throw Error(Status::DegenerateRegion, "polygon has fewer than 3 distinct vertices");
  std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_cross(w[i], w[(i + 1) % n], w[j], w[(j + 1) % n]))
        throw Error(Status::DegenerateRegion, "polygon is not simple");
    }
  double a = signed_area(w);
  double diam = 0;
  for (auto p : w)
    for (auto q : w) diam = std::max(diam, std::abs(p - q));
  if (std::abs(a) <= 1e-12 * diam * diam) throw Error(Status::DegenerateRegion, "polygon has empty interior");
  if (a < 0) std::reverse(w.begin(), w.end());
  JordanRegion r;
  r.kind_ = Kind::Polygon;
  r.verts_ = std::move(w);
  return r;
}

JordanRegion JordanRegion::make_mask(int w, int h, std::vector<uint8_t> pixels, cd origin, double pixel) {
  if (w <= 0 || h <= 0 || pixels.size() != std::size_t(w) * std::size_t(h) || !(pixel > 0))
    throw Error(Status::DegenerateRegion, "bad mask dimensions");
  if (std::none_of(pixels.begin(), pixels.end(), [](uint8_t p) { return p != 0; }))
    throw Error(Status::DegenerateRegion, "mask is empty");
  JordanRegion r;
  r.kind_ = Kind::Mask;
  r.mw_ = w;
  r.mh_ = h;
  r.pix_ = std::move(pixels);
  r.to_world_ = {pixel, origin};
  r.resolution_hint = pixel;
  return r;
}

JordanRegion JordanRegion::load_pbm(const std::string& path, cd origin, double pixel) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Status::IoError, "cannot read " + path);
  std::string magic;
  in >> magic;
  auto next_int = [&] {
    int v = -1;
    while (in >> std::ws && in.peek() == '#') {
      std::string line;
      std::getline(in, line);
    }
    in >> v;
    return v;
  };
  int w = next_int(), h = next_int();
  if (w <= 0 || h <= 0 || (magic != "P1" && magic != "P4"))
    throw Error(Status::IoError, "unsupported PBM: " + path);
  std::vector<uint8_t> px(std::size_t(w) * h);
  if (magic == "P1") {
    for (auto& p : px) {
      char c;
      do {
        if (!in.get(c)) throw Error(Status::IoError, "truncated PBM");
      } while (c != '0' && c != '1');
      p = c == '1';
    }
  } else {
    in.get();
    int row = (w + 7) / 8;
    std::vector<unsigned char> buf(row);
    for (int y = 0; y < h; ++y) {
      if (!in.read(reinterpret_cast<char*>(buf.data()), row)) throw Error(Status::IoError, "truncated PBM");
      for (int x = 0; x < w; ++x) px[std::size_t(y) * w + x] = (buf[x / 8] >> (7 - x % 8)) & 1;
    }
  }
  return make_mask(w, h, std::move(px), origin, pixel);
}

JordanRegion JordanRegion::transformed(const AffineMap& t) const {
  JordanRegion r = *this;
  switch (kind_) {
    case Kind::Disk: r.disk_ = {t(disk_.center), disk_.radius * std::abs(t.alpha)}; break;
    case Kind::Polygon:
      for (auto& v : r.verts_) v = t(v);
      break;
    case Kind::Mask: r.to_world_ = {t.alpha * to_world_.alpha, t(to_world_.beta)}; break;
  }
  r.resolution_hint = resolution_hint * std::abs(t.alpha);
  return r;
}

bool JordanRegion::pixel_at(double u, double v) const {
  if (u < 0 || v < 0 || u >= mw_ || v >= mh_) return false;
  int col = int(u), row = mh_ - 1 - int(v);
  return pix_[std::size_t(row) * mw_ + col] != 0;
}

bool JordanRegion::contains(cd z) const {
  switch (kind_) {
    case Kind::Disk: return std::abs(z - disk_.center) <= disk_.radius;
    case Kind::Polygon: return point_in_polygon(verts_, z);
    case Kind::Mask: {
      cd p = to_world_.inverse()(z);
      return pixel_at(p.real(), p.imag());
    }
  }
  return false;
}

double JordanRegion::signed_distance(cd z) const {
  switch (kind_) {
    case Kind::Disk: return std::abs(z - disk_.center) - disk_.radius;
    case Kind::Polygon: {
      double d = 1e300;
      for (std::size_t i = 0; i < verts_.size(); ++i) d = std::min(d, seg_dist(z, verts_[i], verts_[(i + 1) % verts_.size()]));
      return point_in_polygon(verts_, z) ? -d : d;
    }
    case Kind::Mask: {
      double s = 0.5 * std::abs(to_world_.alpha);
      return contains(z) ? -s : s;
    }
  }
  return 0;
}

cd JordanRegion::centroid() const {
  switch (kind_) {
    case Kind::Disk: return disk_.center;
    case Kind::Polygon: {
      double a = 0;
      cd c = 0;
      for (std::size_t i = 0; i < verts_.size(); ++i) {
        cd p = verts_[i], q = verts_[(i + 1) % verts_.size()];
        double cr = cross(p, q);
        a += cr;
        c += (p + q) * cr;
      }
      return c / (3.0 * a);
    }
    case Kind::Mask: {
      cd c = 0;
      double n = 0;
      for (int row = 0; row < mh_; ++row)
        for (int col = 0; col < mw_; ++col)
          if (pix_[std::size_t(row) * mw_ + col]) {
            c += cd(col + 0.5, mh_ - row - 0.5);
            n += 1;
          }
      return to_world_(c / n);
    }
  }
  return 0;
}

double JordanRegion::max_radius(cd about) const {
  switch (kind_) {
    case Kind::Disk: return std::abs(about - disk_.center) + disk_.radius;
    case Kind::Polygon: {
      double r = 0;
      for (auto v : verts_) r = std::max(r, std::abs(v - about));
      return r;
    }
    case Kind::Mask: {
      double r = 0;
      for (int row = 0; row < mh_; ++row)
        for (int col = 0; col < mw_; ++col)
          if (pix_[std::size_t(row) * mw_ + col])
            for (int k = 0; k < 4; ++k) {
              cd corner(col + (k & 1), mh_ - row - 1 + (k >> 1));
              r = std::max(r, std::abs(to_world_(corner) - about));
            }
      return r;
    }
  }
  return 0;
}

BBox JordanRegion::bbox() const {
  std::vector<cd> pts;
  switch (kind_) {
    case Kind::Disk: {
      cd c = disk_.center;
      double r = disk_.radius;
      return {c.real() - r, c.imag() - r, c.real() + r, c.imag() + r};
    }
    case Kind::Polygon: pts = verts_; break;
    case Kind::Mask:
      pts = {to_world_(cd(0, 0)), to_world_(cd(mw_, 0)), to_world_(cd(0, mh_)), to_world_(cd(mw_, mh_))};
      break;
  }
  BBox b{1e300, 1e300, -1e300, -1e300};
  for (auto p : pts) {
    b.x0 = std::min(b.x0, p.real());
    b.x1 = std::max(b.x1, p.real());
    b.y0 = std::min(b.y0, p.imag());
    b.y1 = std::max(b.y1, p.imag());
  }
  return b;
}

double JordanRegion::diameter() const {
  switch (kind_) {
    case Kind::Disk: return 2 * disk_.radius;
    case Kind::Polygon: {
      double d = 0;
      for (auto p : verts_)
        for (auto q : verts_) d = std::max(d, std::abs(p - q));
      return d;
    }
    case Kind::Mask: {
      BBox b = bbox();
      return std::hypot(b.width(), b.height());
    }
  }
  return 0;
}

// ---------------------------------------------------------------- compact sets

CompactSet CompactSet::disk(cd center, double radius) {
  CompactSet s;
  s.is_disk_ = true;
  s.disk_ = {center, std::max(radius, 0.0)};
  return s;
}

bool CompactSet::cell(int i, int j) const {
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return false;
  return mask_[std::size_t(j) * nx_ + i] != 0;
}

std::size_t CompactSet::cell_count() const { return std::size_t(std::count(mask_.begin(), mask_.end(), 1)); }

CompactSet CompactSet::from_field(double x0, double y0, double h, int nx, int ny, std::vector<double> phi) {
  if (nx < 3 || ny < 3 || phi.size() != std::size_t(nx) * ny || !(h > 0))
    throw Error(Status::InvalidArgument, "from_field: bad grid");
  CompactSet s;
  s.x0_ = x0;
  s.y0_ = y0;
  s.h_ = h;
  s.nx_ = nx;
  s.ny_ = ny;
  std::size_t N = phi.size();
  s.mask_.assign(N, 0);
  std::size_t inside = 0;
  for (std::size_t k = 0; k < N; ++k)
    if (phi[k] <= 0) s.mask_[k] = 1, ++inside;
  if (!inside) throw Error(Status::DegenerateRegion, "empty mask");
  for (int i = 0; i < nx; ++i)
    if (s.mask_[i] || s.mask_[std::size_t(ny - 1) * nx + i])
      throw Error(Status::InvalidArgument, "from_field: set touches the grid frame");
  for (int j = 0; j < ny; ++j)
    if (s.mask_[std::size_t(j) * nx] || s.mask_[std::size_t(j) * nx + nx - 1])
      throw Error(Status::InvalidArgument, "from_field: set touches the grid frame");

  // fill holes: 4-connected flood of the complement from the frame
  std::vector<uint8_t> seen(N, 0);
  std::vector<std::size_t> stack;
  auto push = [&](int i, int j) {
    std::size_t k = std::size_t(j) * nx + i;
    if (!s.mask_[k] && !seen[k]) seen[k] = 1, stack.push_back(k);
  };
  for (int i = 0; i < nx; ++i) push(i, 0), push(i, ny - 1);
  for (int j = 0; j < ny; ++j) push(0, j), push(nx - 1, j);
  while (!stack.empty()) {
    std::size_t k = stack.back();
    stack.pop_back();
    int i = int(k % nx), j = int(k / nx);
    if (i > 0) push(i - 1, j);
    if (i + 1 < nx) push(i + 1, j);
    if (j > 0) push(i, j - 1);
    if (j + 1 < ny) push(i, j + 1);
  }
  for (std::size_t k = 0; k < N; ++k)
    if (!s.mask_[k] && !seen[k]) {
      s.mask_[k] = 1;
      phi[k] = -0.5 * h;
    }

  // one 8-connected component
  std::vector<uint8_t> comp(N, 0);
  std::size_t first = std::size_t(std::find(s.mask_.begin(), s.mask_.end(), 1) - s.mask_.begin());
  comp[first] = 1;
  stack.push_back(first);
  std::size_t reached = 1;
  while (!stack.empty()) {
    std::size_t k = stack.back();
    stack.pop_back();
    int i = int(k % nx), j = int(k / nx);
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        int a = i + di, b = j + dj;
        if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
        std::size_t q = std::size_t(b) * nx + a;
        if (s.mask_[q] && !comp[q]) comp[q] = 1, ++reached, stack.push_back(q);
      }
  }
  if (reached != s.cell_count()) throw Error(Status::DegenerateRegion, "mask is disconnected at this resolution");

  // marching squares on the padded field; nodes are cell centres
  int W = nx + 2, H = ny + 2;
  auto val = [&](int a, int b) -> double {
    int i = a - 1, j = b - 1;
    if (i < 0 || j < 0 || i >= nx || j >= ny) return h;
    double v = phi[std::size_t(j) * nx + i];
    return (v <= 0) ? std::min(v, 0.0) : v;
  };
  auto pos = [&](int a, int b) { return cd(x0 + (a - 0.5) * h, y0 + (b - 0.5) * h); };
  auto hid = [&](int a, int b) { return (std::int64_t(b) * W + a) * 2; };
  auto vid = [&](int a, int b) { return (std::int64_t(b) * W + a) * 2 + 1; };
  auto cut = [&](int a0, int b0, int a1, int b1) {
    double v0 = val(a0, b0), v1 = val(a1, b1);
    double t = (v0 == v1) ? 0.5 : std::clamp(v0 / (v0 - v1), 0.0, 1.0);
    return pos(a0, b0) + t * (pos(a1, b1) - pos(a0, b0));
  };
  std::unordered_map<std::int64_t, cd> pts;
  std::unordered_map<std::int64_t, std::array<std::int64_t, 2>> adj;
  auto link = [&](std::int64_t e, std::int64_t f) {
    auto add = [&](std::int64_t x, std::int64_t y) {
      auto it = adj.find(x);
      if (it == adj.end()) adj[x] = {y, -1};
      else it->second[1] = y;
    };
    add(e, f);
    add(f, e);
  };
  for (int b = 0; b + 1 < H; ++b)
    for (int a = 0; a + 1 < W; ++a) {
      double v0 = val(a, b), v1 = val(a + 1, b), v2 = val(a + 1, b + 1), v3 = val(a, b + 1);
      int c = (v0 <= 0) | ((v1 <= 0) << 1) | ((v2 <= 0) << 2) | ((v3 <= 0) << 3);
      if (c == 0 || c == 15) continue;
      std::int64_t e[4] = {hid(a, b), vid(a + 1, b), hid(a, b + 1), vid(a, b)};
      auto P = [&](int k) {
        if (pts.count(e[k])) return;
        switch (k) {
          case 0: pts[e[0]] = cut(a, b, a + 1, b); break;
          case 1: pts[e[1]] = cut(a + 1, b, a + 1, b + 1); break;
          case 2: pts[e[2]] = cut(a, b + 1, a + 1, b + 1); break;
          case 3: pts[e[3]] = cut(a, b, a, b + 1); break;
        }
      };
      auto seg = [&](int p, int q) {
        P(p);
        P(q);
        link(e[p], e[q]);
      };
      bool centre_in = (v0 + v1 + v2 + v3) <= 0;
      switch (c) {
        case 1: case 14: seg(3, 0); break;
        case 2: case 13: seg(0, 1); break;
        case 3: case 12: seg(3, 1); break;
        case 4: case 11: seg(1, 2); break;
        case 6: case 9: seg(0, 2); break;
        case 7: case 8: seg(3, 2); break;
        case 5:
          if (centre_in) seg(0, 1), seg(2, 3);
          else seg(3, 0), seg(1, 2);
          break;
        case 10:
          if (centre_in) seg(3, 0), seg(1, 2);
          else seg(0, 1), seg(2, 3);
          break;
      }
    }
  // walk loops in a deterministic order
  std::vector<std::int64_t> keys;
  keys.reserve(adj.size());
  for (auto& kv : adj) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end());
  std::unordered_map<std::int64_t, bool> used;
  std::vector<cd> best;
  double best_area = -1;
  for (auto k0 : keys) {
    if (used[k0]) continue;
    std::vector<cd> loop;
    std::int64_t prev = -1, cur = k0;
    while (!used[cur]) {
      used[cur] = true;
      loop.push_back(pts[cur]);
      auto& nb = adj[cur];
      std::int64_t nxt = (nb[0] != prev) ? nb[0] : nb[1];
      if (nxt < 0) break;
      prev = cur;
      cur = nxt;
    }
    double a = std::abs(signed_area(loop));
    if (a > best_area) best_area = a, best = std::move(loop);
  }
  std::vector<cd> clean;
  for (auto p : best)
    if (clean.empty() || std::abs(p - clean.back()) > 1e-14 * h) clean.push_back(p);
  while (clean.size() > 1 && std::abs(clean.front() - clean.back()) <= 1e-14 * h) clean.pop_back();
  if (clean.size() < 3) throw Error(Status::DegenerateRegion, "contour extraction failed");
  if (signed_area(clean) < 0) std::reverse(clean.begin(), clean.end());
  s.contour_ = std::move(clean);
  s.finish_contour();
  return s;
}

void CompactSet::finish_contour() {
  arclen_.assign(contour_.size() + 1, 0.0);
  start_ = 0;
  for (std::size_t i = 0; i < contour_.size(); ++i) {
    arclen_[i + 1] = arclen_[i] + std::abs(contour_[(i + 1) % contour_.size()] - contour_[i]);
    cd a = contour_[i], b = contour_[start_];
    if (a.real() > b.real() || (a.real() == b.real() && a.imag() < b.imag())) start_ = i;
  }
  // segment buckets
  std::size_t n = contour_.size();
  gstart_.clear();
  gseg_.clear();
  if (n == 0) return;
  double xa = 1e300, xb = -1e300, ya = 1e300, yb = -1e300;
  for (auto z : contour_) xa = std::min(xa, z.real()), xb = std::max(xb, z.real()), ya = std::min(ya, z.imag()), yb = std::max(yb, z.imag());
  gs_ = std::max({4 * h_, (xb - xa) / 256, (yb - ya) / 256, 1e-300});
  gx0_ = xa, gy0_ = ya;
  gnx_ = int((xb - xa) / gs_) + 1, gny_ = int((yb - ya) / gs_) + 1;
  auto bx = [&](double x) { return std::clamp(int((x - gx0_) / gs_), 0, gnx_ - 1); };
  auto by = [&](double y) { return std::clamp(int((y - gy0_) / gs_), 0, gny_ - 1); };
  std::vector<std::uint32_t> count(std::size_t(gnx_) * gny_ + 1, 0);
  auto visit = [&](auto&& fn) {
    for (std::size_t i = 0; i < n; ++i) {
      cd a = contour_[i], b = contour_[(i + 1) % n];
      for (int j = by(std::min(a.imag(), b.imag())); j <= by(std::max(a.imag(), b.imag())); ++j)
        for (int k = bx(std::min(a.real(), b.real())); k <= bx(std::max(a.real(), b.real())); ++k) fn(std::size_t(j) * gnx_ + k, i);
    }
  };
  visit([&](std::size_t c, std::size_t) { ++count[c + 1]; });
  for (std::size_t c = 1; c < count.size(); ++c) count[c] += count[c - 1];
  gstart_ = count;
  gseg_.resize(count.back());
  visit([&](std::size_t c, std::size_t i) { gseg_[count[c]++] = std::uint32_t(i); });
}

std::vector<cd> CompactSet::boundary(int m, double phase) const {
  std::vector<cd> out(std::size_t(std::max(m, 0)));
  if (m <= 0) return out;
  if (is_disk_) {
    for (int k = 0; k < m; ++k)
      out[k] = disk_.center + disk_.radius * std::polar(1.0, kTwoPi * (k + phase) / m);
    return out;
  }
  double L = arclen_.back(), s0 = arclen_[start_];
  std::size_t n = contour_.size(), seg = start_;
  double base = 0;  // arclength offset once we wrap
  for (int k = 0; k < m; ++k) {
    double s = std::fmod(s0 + L * (k + phase) / m, L);
    if (s < 0) s += L;
    // walk forward from the previous segment
    std::size_t guard = 0;
    while (!(arclen_[seg] <= s && s <= arclen_[seg + 1]) && guard++ <= n) seg = (seg + 1) % n;
    double len = arclen_[seg + 1] - arclen_[seg];
    double t = len > 0 ? (s - arclen_[seg]) / len : 0;
    out[k] = contour_[seg] + t * (contour_[(seg + 1) % n] - contour_[seg]);
  }
  (void)base;
  return out;
}

bool CompactSet::contains(cd z) const {
  if (is_disk_) return std::abs(z - disk_.center) <= disk_.radius;
  double u = (z.real() - x0_) / h_, v = (z.imag() - y0_) / h_;
  if (!(u >= 0 && v >= 0 && u < nx_ && v < ny_)) return false;
  return cell(int(u), int(v));
}

double CompactSet::distance_to_boundary(cd z) const {
  if (is_disk_) return std::abs(std::abs(z - disk_.center) - disk_.radius);
  std::size_t n = contour_.size();
  if (n == 0) return 1e300;
  // rings of buckets around the (clamped) bucket of z; buckets outside ring r
  // are at least r * gs_ away, since clamping to the grid box is a projection
  int cx = std::clamp(int(std::floor((z.real() - gx0_) / gs_)), 0, gnx_ - 1);
  int cy = std::clamp(int(std::floor((z.imag() - gy0_) / gs_)), 0, gny_ - 1);
  double d = 1e300;
  int rmax = std::max(gnx_, gny_);
  for (int r = 0; r <= rmax; ++r) {
    for (int j = cy - r; j <= cy + r; ++j) {
      if (j < 0 || j >= gny_) continue;
      bool edge_row = j == cy - r || j == cy + r;
      for (int k = cx - r; k <= cx + r; k += edge_row ? 1 : 2 * r) {
        if (k >= 0 && k < gnx_) {
          std::size_t c = std::size_t(j) * gnx_ + k;
          for (auto q = gstart_[c]; q < gstart_[c + 1]; ++q) {
            std::size_t i = gseg_[q];
            d = std::min(d, seg_dist(z, contour_[i], contour_[(i + 1) % n]));
          }
        }
        if (r == 0) break;
      }
    }
    if (d <= r * gs_) break;
  }
  return d;
}

double CompactSet::distance(cd z) const {
  if (is_disk_) return std::max(0.0, std::abs(z - disk_.center) - disk_.radius);
  return contains(z) ? 0.0 : distance_to_boundary(z);
}

cd CompactSet::centroid() const {
  if (is_disk_) return disk_.center;
  cd c = 0;
  double n = 0;
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i)
      if (cell(i, j)) c += cell_center(i, j), n += 1;
  return c / n;
}

double CompactSet::perimeter() const {
  if (is_disk_) return kTwoPi * disk_.radius;
  return arclen_.back();
}

double CompactSet::area() const {
  if (is_disk_) return std::numbers::pi * disk_.radius * disk_.radius;
  return double(cell_count()) * h_ * h_;
}

double CompactSet::diameter() const {
  if (is_disk_) return 2 * disk_.radius;
  auto b = boundary(512);
  double d = 0;
  for (auto p : b)
    for (auto q : b) d = std::max(d, std::abs(p - q));
  return d;
}

BBox CompactSet::bbox() const {
  if (is_disk_) {
    cd c = disk_.center;
    double r = disk_.radius;
    return {c.real() - r, c.imag() - r, c.real() + r, c.imag() + r};
  }
  BBox b{1e300, 1e300, -1e300, -1e300};
  for (auto p : contour_) {
    b.x0 = std::min(b.x0, p.real());
    b.x1 = std::max(b.x1, p.real());
    b.y0 = std::min(b.y0, p.imag());
    b.y1 = std::max(b.y1, p.imag());
  }
  return b;
}

bool CompactSet::complement_connected() const {
  if (is_disk_) return true;
  std::size_t N = mask_.size();
  std::vector<uint8_t> seen(N, 0);
  std::vector<std::size_t> stack;
  auto push = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return;
    std::size_t k = std::size_t(j) * nx_ + i;
    if (!mask_[k] && !seen[k]) seen[k] = 1, stack.push_back(k);
  };
  for (int i = 0; i < nx_; ++i) push(i, 0), push(i, ny_ - 1);
  for (int j = 0; j < ny_; ++j) push(0, j), push(nx_ - 1, j);
  while (!stack.empty()) {
    std::size_t k = stack.back();
    stack.pop_back();
    int i = int(k % nx_), j = int(k / nx_);
    push(i - 1, j), push(i + 1, j), push(i, j - 1), push(i, j + 1);
  }
  for (std::size_t k = 0; k < N; ++k)
    if (!mask_[k] && !seen[k]) return false;
  return true;
}

// ---------------------------------------------------------------- operations

CompactSet rasterize(const JordanRegion& region, double h) {
  if (!(h > 0)) throw Error(Status::InvalidArgument, "rasterize: h must be positive");
  double diam = region.diameter();
  if (diam / h < 64) throw Error(Status::ResolutionTooCoarse, "rasterize: fewer than 64 cells across the region");
  BBox b = region.bbox();
  int nx = int(std::ceil(b.width() / h)) + 8, ny = int(std::ceil(b.height() / h)) + 8;
  if (double(nx) * ny > 6e7) throw Error(Status::ResolutionTooCoarse, "rasterize: grid too large");
  double x0 = b.x0 - 4 * h, y0 = b.y0 - 4 * h;
  std::vector<double> phi(std::size_t(nx) * ny);
  parallel_for(std::size_t(ny), [&](std::size_t j) {
    for (int i = 0; i < nx; ++i)
      phi[j * nx + i] = region.signed_distance({x0 + (i + 0.5) * h, y0 + (double(j) + 0.5) * h});
  });
  return CompactSet::from_field(x0, y0, h, nx, ny, std::move(phi));
}

CompactSet dilate(const CompactSet& omega, double r) {
  if (!(r > 0)) throw Error(Status::InvalidArgument, "dilate: radius must be positive");
  if (omega.is_disk()) return CompactSet::disk(omega.as_disk().center, omega.as_disk().radius + r);
  BBox b = omega.bbox();
  double E = std::max(b.width(), b.height()) + 2 * r;
  double h = std::max(omega.h(), E / 400);
  int nx = int(std::ceil((b.width() + 2 * r) / h)) + 10, ny = int(std::ceil((b.height() + 2 * r) / h)) + 10;
  double x0 = b.x0 - r - 5 * h, y0 = b.y0 - r - 5 * h;
  cd mid((b.x0 + b.x1) / 2, (b.y0 + b.y1) / 2);
  double half_diag = 0.5 * std::hypot(b.width(), b.height());
  std::vector<double> phi(std::size_t(nx) * ny);
  parallel_for(std::size_t(ny), [&](std::size_t j) {
    for (int i = 0; i < nx; ++i) {
      cd z(x0 + (i + 0.5) * h, y0 + (double(j) + 0.5) * h);
      double lb = b.dist(z), ub = std::abs(z - mid) + half_diag;
      double v;
      if (lb > r + 3 * h) v = lb - r;
      else if (ub < r - 3 * h) v = ub - r;
      else v = omega.distance(z) - r;
      phi[j * nx + i] = v;
    }
  });
  return CompactSet::from_field(x0, y0, h, nx, ny, std::move(phi));
}

CompactSet neighborhood(const CompactSet& omega, int n) {
  if (n < 1) throw Error(Status::InvalidArgument, "neighborhood: n must be >= 1");
  double gap = 1.0 / n - 1.0 / (n + 1);
  if (gap < 2 * omega.h()) throw Error(Status::ResolutionTooCoarse, "neighborhood: 1/n - 1/(n+1) < 2h");
  return dilate(omega, 1.0 / n);
}

bool strictly_nested(const CompactSet& inner, const CompactSet& outer, double margin) {
  for (auto p : inner.boundary(1024))
    if (!outer.contains(p) || outer.distance_to_boundary(p) < margin) return false;
  return true;
}

Tower build_tower(const CompactSet& omega, const std::vector<double>& radii) {
  Tower t;
  t.radii = radii;
  for (std::size_t n = 0; n < radii.size(); ++n) {
    if (!(radii[n] > 0) || (n > 0 && !(radii[n] < radii[n - 1])))
      throw Error(Status::InvalidArgument, "tower radii must be positive and decreasing");
    t.sets.push_back(dilate(omega, radii[n]));
  }
  for (std::size_t n = 0; n + 1 < radii.size(); ++n) {
    double h = std::max({omega.h(), t.sets[n].h(), t.sets[n + 1].h()});
    if (radii[n] - radii[n + 1] < 2 * h || !strictly_nested(t.sets[n + 1], t.sets[n], h))
      throw Error(Status::ResolutionTooCoarse, "tower level " + std::to_string(n + 1) + " cannot be certified nested");
  }
  return t;
}

double van_der_corput(unsigned n) {
  double v = 0, d = 1;
  while (n) {
    d *= 2;
    v += (n & 1) / d;
    n >>= 1;
  }
  return v;
}

cd project_to_boundary(const CompactSet& omega, cd z) {
  if (omega.is_disk()) {
    auto D = omega.as_disk();
    cd u = z - D.center;
    return D.center + (std::abs(u) > 0 ? D.radius * u / std::abs(u) : cd(D.radius));
  }
  const auto& c = omega.contour();
  double best = 1e300;
  cd bp = c[0];
  for (std::size_t i = 0; i < c.size(); ++i) {
    cd a = c[i], b = c[(i + 1) % c.size()], ab = b - a;
    double L2 = std::norm(ab);
    double t = L2 > 0 ? std::clamp(((z - a) * std::conj(ab)).real() / L2, 0.0, 1.0) : 0.0;
    cd p = a + t * ab;
    if (std::abs(z - p) < best) best = std::abs(z - p), bp = p;
  }
  return bp;
}

std::vector<cd> boundary_sequence(const CompactSet& omega, const Tower& tower, int N) {
  if (N < 0 || std::size_t(N) + 1 > tower.sets.size())
    throw Error(Status::InvalidArgument, "boundary_sequence: tower shorter than the sequence");
  const int M = 4096;
  auto samples = omega.boundary(M);
  std::vector<cd> xs;
  for (int n = 1; n <= N; ++n) {
    const CompactSet& outer = tower.sets[n - 1];
    const CompactSet& inner = tower.sets[n];
    double ro = tower.radii[n - 1], ri = tower.radii[n];
    double hm = std::max({omega.h(), outer.h(), inner.h()});
    double t = std::fmod(van_der_corput(unsigned(n)) + 0.5, 1.0);
    int idx0 = int(t * M) % M;
    bool ok = false;
    for (int shift = 0; shift < M && !ok; shift = shift <= 0 ? 1 - shift : -shift) {
      int idx = ((idx0 + shift) % M + M) % M;
      cd b = samples[idx];
      cd tang = samples[(idx + 1) % M] - samples[(idx + M - 1) % M];
      if (std::abs(tang) == 0) continue;
      cd nu = cd(tang.imag(), -tang.real()) / std::abs(tang);
      for (double frac : {0.85, 0.7, 0.5, 0.3}) {
        cd x = b + (ri + frac * (ro - ri)) * nu;
        if (outer.contains(x) && outer.distance_to_boundary(x) > hm && !inner.contains(x) &&
            inner.distance(x) > hm && omega.distance(x) > ri) {
          xs.push_back(x);
          ok = true;
          break;
        }
      }
      if (std::abs(shift) > 64) break;
    }
    if (!ok) throw Error(Status::NoRoom, "no room for x_" + std::to_string(n));
  }
  return xs;
}

double set_distance(const CompactSet& a, const CompactSet& b, int samples) {
  if (a.is_disk() && b.is_disk()) {
    auto A = a.as_disk(), B = b.as_disk();
    return std::max(0.0, std::abs(A.center - B.center) - A.radius - B.radius);
  }
  auto sa = a.boundary(samples), sb = b.boundary(samples);
  for (auto p : sa)
    if (b.contains(p)) return 0;
  for (auto p : sb)
    if (a.contains(p)) return 0;
  double d = 1e300;
  if (b.is_disk() || !a.is_disk()) {
    for (auto p : sa) d = std::min(d, b.distance(p));
  } else {
    for (auto p : sb) d = std::min(d, a.distance(p));
  }
  return d;
}

CompactSet cover_compact(const std::vector<cd>& points, double delta, const std::vector<CompactSet>& avoid) {
  if (points.empty() || !(delta > 0)) throw Error(Status::InvalidArgument, "cover_compact: need points and delta > 0");
  BBox b{1e300, 1e300, -1e300, -1e300};
  for (auto p : points) {
    b.x0 = std::min(b.x0, p.real());
    b.x1 = std::max(b.x1, p.real());
    b.y0 = std::min(b.y0, p.imag());
    b.y1 = std::max(b.y1, p.imag());
  }
  for (int attempt = 0; attempt <= 20; ++attempt, delta *= 0.5) {
    double E = std::max(b.width(), b.height()) + 2 * delta;
    double h = std::max(delta / 6, E / 300);
    if (h > delta / 2) continue;
    int nx = int(std::ceil((b.width() + 2 * delta) / h)) + 10, ny = int(std::ceil((b.height() + 2 * delta) / h)) + 10;
    double x0 = b.x0 - delta - 5 * h, y0 = b.y0 - delta - 5 * h;
    // bucket the points so each cell only looks at nearby ones
    double bs = delta + 2 * h;
    int bx = int(std::ceil((nx * h) / bs)) + 1, by = int(std::ceil((ny * h) / bs)) + 1;
    std::vector<std::vector<cd>> bucket(std::size_t(bx) * by);
    for (auto p : points) {
      int i = int((p.real() - x0) / bs), j = int((p.imag() - y0) / bs);
      bucket[std::size_t(j) * bx + i].push_back(p);
    }
    std::vector<double> phi(std::size_t(nx) * ny);
    parallel_for(std::size_t(ny), [&](std::size_t j) {
      for (int i = 0; i < nx; ++i) {
        cd z(x0 + (i + 0.5) * h, y0 + (double(j) + 0.5) * h);
        int ci = int((z.real() - x0) / bs), cj = int((z.imag() - y0) / bs);
        double d = bs;
        for (int dj = -1; dj <= 1; ++dj)
          for (int di = -1; di <= 1; ++di) {
            int a = ci + di, c = cj + dj;
            if (a < 0 || c < 0 || a >= bx || c >= by) continue;
            for (auto p : bucket[std::size_t(c) * bx + a]) d = std::min(d, std::abs(z - p));
          }
        phi[j * nx + i] = d - delta;
      }
    });
    CompactSet s;
    try {
      s = CompactSet::from_field(x0, y0, h, nx, ny, std::move(phi));
    } catch (const Error&) {
      continue;
    }
    bool clear = true;
    for (auto& A : avoid)
      if (set_distance(s, A) < 2 * h) {
        clear = false;
        break;
      }
    if (clear) return s;
  }
  throw Error(Status::Collision, "cover_compact: no dilation radius keeps the cover disjoint");
}

AffineMap normalize(const JordanRegion& region, Mode mode, double target_radius) {
  cd anchor = region.centroid();
  if (!region.contains(anchor)) {
    // pole of inaccessibility on a coarse raster
    double h = region.diameter() / 128;
    CompactSet r = rasterize(region, h);
    double best = -1;
    for (int j = 0; j < r.ny(); ++j)
      for (int i = 0; i < r.nx(); ++i)
        if (r.cell(i, j)) {
          double d = r.distance_to_boundary(r.cell_center(i, j));
          if (d > best) best = d, anchor = r.cell_center(i, j);
        }
  }
  double R = region.max_radius(anchor);
  if (!(R > 0) || !std::isfinite(R)) throw Error(Status::DegenerateRegion, "normalize: region has no extent");
  const double safety = 0.3;
  cd target = mode == Mode::Escaping ? cd(3.0) : cd(2.0 / 3.0);
  double limit = mode == Mode::Escaping ? 1.0 : 1.0 / 9.0;
  double rho = target_radius > 0 ? target_radius : 0.5 * limit * safety;
  if (rho >= limit) throw Error(Status::InvalidArgument, "normalize: target radius does not fit the model disk");
  AffineMap T{rho / R, 0.0};
  T.beta = target - T.alpha * anchor;
  JordanRegion img = region.transformed(T);
  if (!img.contains(T(anchor)) || img.max_radius(target) >= limit)
    throw Error(Status::DegenerateRegion, "normalize: post-check failed");
  return T;
}

Disk enclosing_disk(std::vector<cd> pts) {
  if (pts.empty()) return {};
  std::mt19937_64 rng(12345);
  std::shuffle(pts.begin(), pts.end(), rng);
  auto circ2 = [](cd a, cd b) { return Disk{(a + b) / 2.0, std::abs(a - b) / 2}; };
  auto circ3 = [&](cd a, cd b, cd c) {
    cd bb = b - a, cc = c - a;
    double d = 2 * cross(bb, cc);
    if (std::abs(d) < 1e-300) {
      Disk x = circ2(a, b), y = circ2(a, c), z = circ2(b, c);
      Disk m = x;
      if (y.radius > m.radius) m = y;
      if (z.radius > m.radius) m = z;
      return m;
    }
    double ux = (cc.imag() * std::norm(bb) - bb.imag() * std::norm(cc)) / d;
    double uy = (bb.real() * std::norm(cc) - cc.real() * std::norm(bb)) / d;
    cd u(ux, uy);
    return Disk{a + u, std::abs(u)};
  };
  auto in = [](const Disk& D, cd p) { return std::abs(p - D.center) <= D.radius * (1 + 1e-12) + 1e-300; };
  Disk D{pts[0], 0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (in(D, pts[i])) continue;
    D = {pts[i], 0};
    for (std::size_t j = 0; j < i; ++j) {
      if (in(D, pts[j])) continue;
      D = circ2(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k)
        if (!in(D, pts[k])) D = circ3(pts[i], pts[j], pts[k]);
    }
  }
  return D;
}

}  // namespace wander
