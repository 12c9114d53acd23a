#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"

namespace wander {

struct AffineMap {
  cd alpha{1.0}, beta{0.0};
  cd operator()(cd z) const { return alpha * z + beta; }
  AffineMap inverse() const { return {1.0 / alpha, -beta / alpha}; }
};

struct Disk {
  cd center;
  double radius = 0;
};

struct BBox {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double dist(cd z) const;     // 0 inside
  double max_dist(cd z) const; // farthest corner
};

class JordanRegion {
 public:
  enum class Kind { Disk, Polygon, Mask };

  static JordanRegion make_disk(cd center, double radius);
  static JordanRegion make_polygon(std::vector<cd> vertices);
  // pixels row-major, first row at the top; world = to_world(pixel coords)
  static JordanRegion make_mask(int w, int h, std::vector<uint8_t> pixels, cd origin, double pixel);
  static JordanRegion load_pbm(const std::string& path, cd origin, double pixel);

  Kind kind() const { return kind_; }
  const Disk& disk() const { return disk_; }
  const std::vector<cd>& vertices() const { return verts_; }

  JordanRegion transformed(const AffineMap& t) const;
  bool contains(cd z) const;
  double signed_distance(cd z) const;  // negative inside; masks: within one pixel
  cd centroid() const;
  double max_radius(cd about) const;
  BBox bbox() const;
  double diameter() const;
  double resolution_hint = 0;

 private:
  Kind kind_ = Kind::Disk;
  Disk disk_;
  std::vector<cd> verts_;
  int mw_ = 0, mh_ = 0;
  std::vector<uint8_t> pix_;
  AffineMap to_world_;  // maps (column, rows-from-bottom) to the plane
  bool pixel_at(double u, double v) const;
};

// A compact set with connected complement.  Either an exact disk (used for the
// large model disks where rasterizing would be wasteful) or a mask on a grid of
// square cells with its outer contour extracted at sub-cell accuracy.
class CompactSet {
 public:
  CompactSet() = default;
  static CompactSet disk(cd center, double radius);
  // phi sampled at cell centres; the set is {phi <= 0}, holes filled
  static CompactSet from_field(double x0, double y0, double h, int nx, int ny, std::vector<double> phi);

  bool is_disk() const { return is_disk_; }
  const Disk& as_disk() const { return disk_; }

  double h() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double x0() const { return x0_; }
  double y0() const { return y0_; }
  bool cell(int i, int j) const;
  cd cell_center(int i, int j) const { return {x0_ + (i + 0.5) * h_, y0_ + (j + 0.5) * h_}; }
  std::size_t cell_count() const;

  const std::vector<cd>& contour() const { return contour_; }
  // m points, counter-clockwise, uniform in arc length, starting at the
  // rightmost contour point shifted by `phase` sample spacings
  std::vector<cd> boundary(int m, double phase = 0) const;

  bool contains(cd z) const;
  double distance(cd z) const;              // distance to the set, 0 inside
  double distance_to_boundary(cd z) const;  // distance to the contour
  cd centroid() const;
  double perimeter() const;
  double area() const;
  double diameter() const;
  BBox bbox() const;
  bool complement_connected() const;

 private:
  bool is_disk_ = false;
  Disk disk_;
  double x0_ = 0, y0_ = 0, h_ = 0;
  int nx_ = 0, ny_ = 0;
  std::vector<uint8_t> mask_;
  std::vector<cd> contour_;
  std::vector<double> arclen_;  // cumulative, size contour+1
  std::size_t start_ = 0;       // rightmost contour vertex
  // contour segments bucketed on a coarse grid (CSR layout) for distance queries
  double gx0_ = 0, gy0_ = 0, gs_ = 1;
  int gnx_ = 0, gny_ = 0;
  std::vector<std::uint32_t> gstart_, gseg_;
  void finish_contour();
};

CompactSet rasterize(const JordanRegion& region, double h);

// d(z, omega) <= r with bounded complement components filled
CompactSet dilate(const CompactSet& omega, double r);
// the 1/n neighbourhood
CompactSet neighborhood(const CompactSet& omega, int n);

struct Tower {
  std::vector<double> radii;      // r_0 > r_1 > ...
  std::vector<CompactSet> sets;   // U_n = dilate(omega, r_n)
};
Tower build_tower(const CompactSet& omega, const std::vector<double>& radii);
// every contour point of inner sits at least `margin` inside outer
bool strictly_nested(const CompactSet& inner, const CompactSet& outer, double margin);

// x_1..x_N with x_n in int(U_{n-1}) \ U_n, pushed outward from a bit-reversal
// enumeration of boundary samples
std::vector<cd> boundary_sequence(const CompactSet& omega, const Tower& tower, int N);
double van_der_corput(unsigned n);
// nearest point of omega's contour
cd project_to_boundary(const CompactSet& omega, cd z);

CompactSet cover_compact(const std::vector<cd>& points, double delta, const std::vector<CompactSet>& avoid);
// minimum distance between two sets (0 when they meet), sampled on boundaries
double set_distance(const CompactSet& a, const CompactSet& b, int samples = 1024);

enum class Mode { Escaping, Oscillating };
AffineMap normalize(const JordanRegion& region, Mode mode, double target_radius = 0);

// smallest enclosing disk (Welzl, iterative with a fixed shuffle)
Disk enclosing_disk(std::vector<cd> pts);

}  // namespace wander
