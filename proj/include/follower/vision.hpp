#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace follower::vision {

inline constexpr int kFrameWidth = 320;
inline constexpr int kFrameHeight = 240;

// Packed RGB frame, row-major, 3 bytes per pixel.
struct Frame {
  int width = kFrameWidth;
  int height = kFrameHeight;
  std::vector<std::uint8_t> rgb;

  Frame()
      : rgb(static_cast<std::size_t>(kFrameWidth) * kFrameHeight * 3, 0) {}
  Frame(int w, int h)
      : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0) {}

  std::size_t idx(int x, int y) const {
    return (static_cast<std::size_t>(y) * width + x) * 3;
  }
  void set_pixel(int x, int y, std::uint8_t r, std::uint8_t g,
                 std::uint8_t b) {
    std::size_t i = idx(x, y);
    rgb[i] = r;
    rgb[i + 1] = g;
    rgb[i + 2] = b;
  }
  const std::uint8_t* pixel(int x, int y) const { return &rgb[idx(x, y)]; }
  void fill(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    for (std::size_t i = 0; i < rgb.size(); i += 3) {
      rgb[i] = r;
      rgb[i + 1] = g;
      rgb[i + 2] = b;
    }
  }
  bool operator==(const Frame&) const = default;
};

// h in [0, 360), s and v in [0, 1].
struct Hsv {
  double h = 0, s = 0, v = 0;
};

Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// Inclusive bounds; hue wraps when h_lo > h_hi.
struct HsvRange {
  double h_lo = 45, h_hi = 75;
  double s_lo = 0.4, s_hi = 1.0;
  double v_lo = 0.3, v_hi = 1.0;
};

struct BinaryMask {
  int width = 0, height = 0;
  std::vector<std::uint8_t> bits;  // one byte per pixel, 0 or 1

  BinaryMask() = default;
  BinaryMask(int w, int h)
      : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}
  std::uint8_t at(int x, int y) const {
    return bits[static_cast<std::size_t>(y) * width + x];
  }
  void set(int x, int y, std::uint8_t v) {
    bits[static_cast<std::size_t>(y) * width + x] = v;
  }
  std::size_t count() const;
  bool operator==(const BinaryMask&) const = default;
};

struct ScalarImage {
  int width = 0, height = 0;
  std::vector<double> px;

  ScalarImage() = default;
  ScalarImage(int w, int h)
      : width(w), height(h), px(static_cast<std::size_t>(w) * h, 0.0) {}
  double at(int x, int y) const {
    return px[static_cast<std::size_t>(y) * width + x];
  }
  bool operator==(const ScalarImage&) const = default;
};

enum class Proximity { Far, Close };

struct Detection {
  double x_angle = 0;    // circle center column, [0, width)
  double y_px = 0;       // circle center row
  double radius_px = 0;  // circle radius in pixels
  Proximity proximity = Proximity::Far;
};

struct VisionConfig {
  HsvRange hsv_range;
  double threshold_radius_px = 40;  // Close iff radius strictly above this
  int open_kernel = 5;
  int blur_kernel = 9;
  double blur_sigma = 2.0;
  int hough_r_min = 5;
  int hough_r_max = 110;
  int hough_min_votes = 16;  // absolute floor; ~0.5 * 2*pi*r_min
};

struct CircleCandidate {
  int cx = 0, cy = 0, r = 0;
  int votes = 0;
};

// Normalized symmetric Gaussian taps (kernel_px odd, sum 1).
std::vector<double> gaussian_taps(int kernel_px, double sigma);

// Lattice offsets counted as radius r by the Hough accumulator: all (dx, dy)
// whose length is within one pixel of r, i.e. (r-1)^2 < dx^2+dy^2 < (r+1)^2.
// Exposed so the quantization is testable.
std::vector<std::array<int, 2>> hough_ring_offsets(int r);

// Production kernels. Loops are OpenMP-parallel; every output element is
// computed independently so results are bit-identical to the ref:: versions.
BinaryMask threshold_mask(const Frame& frame, const HsvRange& range);
BinaryMask morphological_open(const BinaryMask& mask, int kernel_px);
ScalarImage gaussian_blur(const ScalarImage& gray, int kernel_px,
                          double sigma);
std::vector<CircleCandidate> hough_circles(const BinaryMask& mask, int r_min,
                                           int r_max, int min_votes);
std::optional<Detection> detect_object(const Frame& frame,
                                       const VisionConfig& cfg);

// Serial reference implementations kept for testing and benchmarking.
namespace ref {
BinaryMask threshold_mask(const Frame& frame, const HsvRange& range);
BinaryMask morphological_open(const BinaryMask& mask, int kernel_px);
ScalarImage gaussian_blur(const ScalarImage& gray, int kernel_px,
                          double sigma);
std::vector<CircleCandidate> hough_circles(const BinaryMask& mask, int r_min,
                                           int r_max, int min_votes);
std::optional<Detection> detect_object(const Frame& frame,
                                       const VisionConfig& cfg);
}  // namespace ref

// Burns the detection circle into the frame: pure red when Close, pure green
// when Far. Midpoint circle, clipped at the borders.
void annotate(Frame& frame, const Detection& det);

}  // namespace follower::vision
