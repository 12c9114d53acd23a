#include "render.hpp"

#include <cstdio>
#include <fstream>

namespace wander {

Image::Image(int w, int h, Rgb fill) : width(w), height(h), rgb(std::size_t(w) * std::size_t(h) * 3) {
  if (w <= 0 || h <= 0) throw Error(Status::InvalidArgument, "image size must be positive");
  for (std::size_t i = 0; i < rgb.size(); i += 3) rgb[i] = fill[0], rgb[i + 1] = fill[1], rgb[i + 2] = fill[2];
}

Rgb Image::at(int x, int y) const {
  std::size_t i = (std::size_t(y) * std::size_t(width) + std::size_t(x)) * 3;
  return {rgb[i], rgb[i + 1], rgb[i + 2]};
}

void Image::set(int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  std::size_t i = (std::size_t(y) * std::size_t(width) + std::size_t(x)) * 3;
  rgb[i] = c[0], rgb[i + 1] = c[1], rgb[i + 2] = c[2];
}

void write_ppm(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Status::IoError, "cannot write " + path);
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.rgb.data()), std::streamsize(img.rgb.size()));
  if (!out) throw Error(Status::IoError, "write failed: " + path);
}

Image read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Status::IoError, "cannot read " + path);
  std::string magic;
  int w = 0, h = 0, mx = 0;
  in >> magic >> w >> h >> mx;
  in.get();
  if (magic != "P6" || w <= 0 || h <= 0 || mx != 255) throw Error(Status::IoError, "not a P6 image: " + path);
  Image img(w, h, palette::background);
  in.read(reinterpret_cast<char*>(img.rgb.data()), std::streamsize(img.rgb.size()));
  if (!in) throw Error(Status::IoError, "truncated image: " + path);
  return img;
}

Viewport default_viewport(Mode m, int K) {
  if (m == Mode::Escaping) return {-2.0, 4.0 * K + 6, -4.0, 4.0};
  return {-1.0, 4.0 * K + 2, -2.0, 2.0};
}

namespace {

struct Raster {
  Viewport vp;
  int w, h;
  double px(cd z) const { return (z.real() - vp.x0) / (vp.x1 - vp.x0) * w; }
  double py(cd z) const { return (vp.y1 - z.imag()) / (vp.y1 - vp.y0) * h; }
};

void draw_segment(Image& img, const Raster& r, cd a, cd b, Rgb c) {
  double ax = r.px(a), ay = r.py(a), bx = r.px(b), by = r.py(b);
  if (!std::isfinite(ax + ay + bx + by)) return;
  // long jumps are not part of a curve
  if (std::hypot(bx - ax, by - ay) > 0.25 * r.w) return;
  int steps = int(std::ceil(std::max(std::abs(bx - ax), std::abs(by - ay)))) + 1;
  for (int i = 0; i <= steps; ++i) {
    double t = double(i) / steps;
    img.set(int(std::floor(ax + t * (bx - ax))), int(std::floor(ay + t * (by - ay))), c);
  }
}

void draw_square(Image& img, const Raster& r, cd z, int half, Rgb c) {
  int x = int(std::floor(r.px(z))), y = int(std::floor(r.py(z)));
  for (int dy = -half; dy <= half; ++dy)
    for (int dx = -half; dx <= half; ++dx) img.set(x + dx, y + dy, c);
}

}  // namespace

Image render_figure(const Polynomial& f, const Scenario& sc, const StageGeometry& geo, int ppu) {
  Viewport vp = default_viewport(sc.mode, sc.stages);
  Raster r{vp, int(std::lround((vp.x1 - vp.x0) * ppu)), int(std::lround((vp.y1 - vp.y0) * ppu))};
  Image img(r.w, r.h, palette::background);
  int m = sc.mode == Mode::Escaping ? sc.stages : schedule_N(sc.stages) + sc.stages;
  cd p0 = sc.mode == Mode::Escaping ? cd(0.0) : cd(1.0);

  // markers first so the curves stay intact on top of them
  draw_square(img, r, p0, 2, palette::fixed_point);
  for (std::size_t n = 0; n < geo.xs.size() && int(n) < sc.stages; ++n) draw_square(img, r, geo.xs[n], 1, palette::marker);

  auto bs = geo.omega.boundary(2048);
  std::vector<cd> cur = bs;
  for (int n = 0; n <= m; ++n) {
    if (n > 0) {
      std::vector<cd> nxt;
      nxt.assign(cur.size(), cd());
      parallel_for(cur.size(), [&](std::size_t i) {
        cq z(cur[i]);
        if (std::isfinite(cur[i].real()) && iterate(f, z, 1)) nxt[i] = z.d();
        else nxt[i] = cd(NAN, NAN);
      });
      cur.swap(nxt);
    }
    for (std::size_t i = 0; i < cur.size(); ++i) draw_segment(img, r, cur[i], cur[(i + 1) % cur.size()], palette::curve);
  }
  return img;
}

Orbit classify(const Polynomial& f, cd z, cd p0) {
  for (int n = 0; n <= 200; ++n) {
    if (std::abs(z - p0) < 0.01) return Orbit::Converges;
    if (!(std::abs(z) <= 1e4)) return Orbit::Escapes;
    if (n < 200) z = f.eval_fast(z);
  }
  return Orbit::Undecided;
}

Image render_basin(const Polynomial& f, const Viewport& vp, cd p0, int width, int height) {
  Image img(width, height, palette::background);
  parallel_for(std::size_t(height), [&](std::size_t y) {
    for (int x = 0; x < width; ++x) {
      cd z(vp.x0 + (x + 0.5) * (vp.x1 - vp.x0) / width, vp.y1 - (double(y) + 0.5) * (vp.y1 - vp.y0) / height);
      Rgb c;
      switch (classify(f, z, p0)) {
        case Orbit::Converges: c = {60, 110, 200}; break;
        case Orbit::Escapes: c = {235, 235, 235}; break;
        default: c = {20, 20, 20}; break;
      }
      img.set(x, int(y), c);
    }
  });
  return img;
}

std::vector<Component> color_components(const Image& img, Rgb color, const Viewport& vp) {
  std::vector<int> label(std::size_t(img.width) * std::size_t(img.height), -1);
  std::vector<Component> out;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      if (label[std::size_t(y) * img.width + x] >= 0 || img.at(x, y) != color) continue;
      int id = int(out.size());
      int xmin = x, xmax = x, ymin = y, ymax = y, count = 0;
      stack.push_back({x, y});
      label[std::size_t(y) * img.width + x] = id;
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        ++count;
        xmin = std::min(xmin, cx), xmax = std::max(xmax, cx), ymin = std::min(ymin, cy), ymax = std::max(ymax, cy);
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            int nx = cx + dx, ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= img.width || ny >= img.height) continue;
            auto& l = label[std::size_t(ny) * img.width + nx];
            if (l >= 0 || img.at(nx, ny) != color) continue;
            l = id;
            stack.push_back({nx, ny});
          }
      }
      Component c;
      c.pixels = count;
      double px = 0.5 * (xmin + xmax + 1), py = 0.5 * (ymin + ymax + 1);
      c.cx = vp.x0 + px / img.width * (vp.x1 - vp.x0);
      c.cy = vp.y1 - py / img.height * (vp.y1 - vp.y0);
      out.push_back(c);
    }
  return out;
}

}  // namespace wander
