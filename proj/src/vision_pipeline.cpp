#include <cmath>
#include <numeric>
#include <stdexcept>

#include "vision_common.hpp"

namespace follower::vision {

Hsv rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
  double mx = std::max({r, g, b});
  double mn = std::min({r, g, b});
  double delta = mx - mn;
  Hsv out;
  out.v = mx;
  out.s = mx > 0.0 ? delta / mx : 0.0;
  if (delta > 0.0) {
    double h;
    if (mx == r)
      h = (g - b) / delta;
    else if (mx == g)
      h = 2.0 + (b - r) / delta;
    else
      h = 4.0 + (r - g) / delta;
    h *= 60.0;
    if (h < 0.0) h += 360.0;
    out.h = h;
  }
  return out;
}

std::size_t BinaryMask::count() const {
  std::size_t n = 0;
  for (std::uint8_t v : bits) n += v;
  return n;
}

std::vector<double> gaussian_taps(int kernel_px, double sigma) {
  if (kernel_px < 1 || kernel_px % 2 == 0)
    throw std::invalid_argument("gaussian_taps: kernel must be odd");
  if (!(sigma > 0.0))
    throw std::invalid_argument("gaussian_taps: sigma must be positive");
  int half = kernel_px / 2;
  std::vector<double> taps(kernel_px);
  for (int i = -half; i <= half; ++i)
    taps[i + half] = std::exp(-(i * i) / (2.0 * sigma * sigma));
  double sum = std::accumulate(taps.begin(), taps.end(), 0.0);
  for (double& t : taps) t /= sum;
  return taps;
}

std::vector<std::array<int, 2>> hough_ring_offsets(int r) {
  std::vector<std::array<int, 2>> out;
  if (r < 1) return out;
  for (const auto& s : detail::build_ring_spans(r))
    for (int dx = s.lo; dx <= s.hi; ++dx) out.push_back({dx, s.dy});
  return out;
}

namespace {

void put_clipped(Frame& f, int x, int y, std::uint8_t r, std::uint8_t g,
                 std::uint8_t b) {
  if (x < 0 || x >= f.width || y < 0 || y >= f.height) return;
  f.set_pixel(x, y, r, g, b);
}

}  // namespace

void annotate(Frame& frame, const Detection& det) {
  std::uint8_t r = det.proximity == Proximity::Close ? 255 : 0;
  std::uint8_t g = det.proximity == Proximity::Close ? 0 : 255;
  int cx = static_cast<int>(std::lround(det.x_angle));
  int cy = static_cast<int>(std::lround(det.y_px));
  int rad = static_cast<int>(std::lround(det.radius_px));
  if (rad < 0) return;
  if (rad == 0) {
    put_clipped(frame, cx, cy, r, g, 0);
    return;
  }
  // midpoint circle
  int x = rad, y = 0;
  int err = 1 - rad;
  while (x >= y) {
    put_clipped(frame, cx + x, cy + y, r, g, 0);
    put_clipped(frame, cx + y, cy + x, r, g, 0);
    put_clipped(frame, cx - y, cy + x, r, g, 0);
    put_clipped(frame, cx - x, cy + y, r, g, 0);
    put_clipped(frame, cx - x, cy - y, r, g, 0);
    put_clipped(frame, cx - y, cy - x, r, g, 0);
    put_clipped(frame, cx + y, cy - x, r, g, 0);
    put_clipped(frame, cx + x, cy - y, r, g, 0);
    ++y;
    if (err < 0) {
      err += 2 * y + 1;
    } else {
      --x;
      err += 2 * (y - x) + 1;
    }
  }
}

}  // namespace follower::vision
