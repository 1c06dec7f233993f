// Serial reference kernels. Deliberately plain: full-size accumulators,
// straight loops, no scheduling. The production kernels must match these
// byte for byte.
#include "vision_common.hpp"

namespace follower::vision::ref {

using namespace follower::vision::detail;

BinaryMask threshold_mask(const Frame& frame, const HsvRange& range) {
  BinaryMask m(frame.width, frame.height);
  for (int y = 0; y < frame.height; ++y)
    threshold_row(frame, range, y,
                  &m.bits[static_cast<std::size_t>(y) * frame.width]);
  return m;
}

BinaryMask morphological_open(const BinaryMask& mask, int kernel_px) {
  if (kernel_px <= 1) return mask;
  int half = kernel_px / 2;
  BinaryMask tmp(mask.width, mask.height), eroded(mask.width, mask.height);
  for (int y = 0; y < mask.height; ++y)
    morph_h_row<true>(mask, half, y,
                      &tmp.bits[static_cast<std::size_t>(y) * mask.width]);
  for (int y = 0; y < mask.height; ++y)
    morph_v_row<true>(tmp, half, y,
                      &eroded.bits[static_cast<std::size_t>(y) * mask.width]);
  BinaryMask tmp2(mask.width, mask.height), out(mask.width, mask.height);
  for (int y = 0; y < mask.height; ++y)
    morph_h_row<false>(eroded, half, y,
                       &tmp2.bits[static_cast<std::size_t>(y) * mask.width]);
  for (int y = 0; y < mask.height; ++y)
    morph_v_row<false>(tmp2, half, y,
                       &out.bits[static_cast<std::size_t>(y) * mask.width]);
  return out;
}

ScalarImage gaussian_blur(const ScalarImage& gray, int kernel_px,
                          double sigma) {
  std::vector<double> taps = gaussian_taps(kernel_px, sigma);
  ScalarImage tmp(gray.width, gray.height), out(gray.width, gray.height);
  for (int y = 0; y < gray.height; ++y)
    blur_h_row(gray, taps, y,
               &tmp.px[static_cast<std::size_t>(y) * gray.width]);
  for (int y = 0; y < gray.height; ++y)
    blur_v_row(tmp, taps, y,
               &out.px[static_cast<std::size_t>(y) * gray.width]);
  return out;
}

std::vector<CircleCandidate> hough_circles(const BinaryMask& mask, int r_min,
                                           int r_max, int min_votes) {
  std::vector<CircleCandidate> all;
  if (r_min < 1 || r_max < r_min) return all;
  Bbox bbox;
  auto boundary = boundary_pixels(mask, &bbox);
  if (boundary.empty()) return all;

  int w = mask.width, h = mask.height;
  int bins = r_max - r_min + 1;
  std::vector<std::vector<std::uint16_t>> slices(
      bins, std::vector<std::uint16_t>(static_cast<std::size_t>(w) * h, 0));
  for (int b = 0; b < bins; ++b)
    vote_bin(boundary, r_min + b, w, h, slices[b].data());

  Bbox full{0, 0, w - 1, h - 1};
  for (int b = 0; b < bins; ++b) {
    const std::uint16_t* below = b > 0 ? slices[b - 1].data() : nullptr;
    const std::uint16_t* above = b + 1 < bins ? slices[b + 1].data() : nullptr;
    collect_bin_candidates(below, full, slices[b].data(), above, full,
                           r_min + b, w, h, full, min_votes, all);
  }
  return suppress(std::move(all), r_min);
}

namespace {
struct RefKernels {
  static BinaryMask threshold(const Frame& f, const HsvRange& r) {
    return ref::threshold_mask(f, r);
  }
  static BinaryMask open(const BinaryMask& m, int k) {
    return ref::morphological_open(m, k);
  }
  static ScalarImage blur(const ScalarImage& s, int k, double sg) {
    return ref::gaussian_blur(s, k, sg);
  }
  static std::vector<CircleCandidate> hough(const BinaryMask& m, int r0,
                                            int r1, int mv) {
    return ref::hough_circles(m, r0, r1, mv);
  }
};
}  // namespace

std::optional<Detection> detect_object(const Frame& frame,
                                       const VisionConfig& cfg) {
  return detail::detect_impl<RefKernels>(frame, cfg);
}

}  // namespace follower::vision::ref
