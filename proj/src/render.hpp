#pragma once

#include <array>
#include <string>
#include <vector>

#include "construct.hpp"

namespace wander {

using Rgb = std::array<std::uint8_t, 3>;

struct Image {
  int width = 0, height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, top row first
  Image() = default;
  Image(int w, int h, Rgb fill);
  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);
};

void write_ppm(const Image& img, const std::string& path);
Image read_ppm(const std::string& path);

struct Viewport {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
};
Viewport default_viewport(Mode m, int K);

namespace palette {
inline constexpr Rgb background{255, 255, 255};
inline constexpr Rgb curve{0, 0, 0};
inline constexpr Rgb marker{220, 30, 30};
inline constexpr Rgb fixed_point{30, 90, 220};
}  // namespace palette

// boundary of omega and its first m images (m = K escaping, N_K + K
// oscillating), the attracting fixed point and the scheduled points x_n
Image render_figure(const Polynomial& f, const Scenario& sc, const StageGeometry& geo, int pixels_per_unit = 50);

enum class Orbit : std::uint8_t { Converges, Escapes, Undecided };
// converges: |f^n(z) - p0| < 0.01 within 200 iterations; escapes: |f^n(z)| > 1e4
Orbit classify(const Polynomial& f, cd z, cd p0);
Image render_basin(const Polynomial& f, const Viewport& vp, cd p0, int width, int height);

// 8-connected components of pixels equal to `color`, as bounding boxes in world units
struct Component {
  int pixels = 0;
  double cx = 0, cy = 0;  // bounding-box centre
};
std::vector<Component> color_components(const Image& img, Rgb color, const Viewport& vp);

}  // namespace wander
