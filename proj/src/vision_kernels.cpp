// Production kernels. Loops are OpenMP-parallel; every output element is
// computed independently of iteration order, so results are bit-identical to
// the ref:: versions (test_vision_parallel checks that).
#include "vision_common.hpp"

namespace follower::vision {

using namespace follower::vision::detail;

BinaryMask threshold_mask(const Frame& frame, const HsvRange& range) {
  BinaryMask m(frame.width, frame.height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < frame.height; ++y)
    threshold_row(frame, range, y,
                  &m.bits[static_cast<std::size_t>(y) * frame.width]);
  return m;
}

BinaryMask morphological_open(const BinaryMask& mask, int kernel_px) {
  if (kernel_px <= 1) return mask;
  int half = kernel_px / 2;
  BinaryMask tmp(mask.width, mask.height), eroded(mask.width, mask.height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < mask.height; ++y)
    morph_h_row<true>(mask, half, y,
                      &tmp.bits[static_cast<std::size_t>(y) * mask.width]);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < mask.height; ++y)
    morph_v_row<true>(tmp, half, y,
                      &eroded.bits[static_cast<std::size_t>(y) * mask.width]);
  BinaryMask tmp2(mask.width, mask.height), out(mask.width, mask.height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < mask.height; ++y)
    morph_h_row<false>(eroded, half, y,
                       &tmp2.bits[static_cast<std::size_t>(y) * mask.width]);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < mask.height; ++y)
    morph_v_row<false>(tmp2, half, y,
                       &out.bits[static_cast<std::size_t>(y) * mask.width]);
  return out;
}

ScalarImage gaussian_blur(const ScalarImage& gray, int kernel_px,
                          double sigma) {
  std::vector<double> taps = gaussian_taps(kernel_px, sigma);
  ScalarImage tmp(gray.width, gray.height), out(gray.width, gray.height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < gray.height; ++y)
    blur_h_row(gray, taps, y,
               &tmp.px[static_cast<std::size_t>(y) * gray.width]);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < gray.height; ++y)
    blur_v_row(tmp, taps, y,
               &out.px[static_cast<std::size_t>(y) * gray.width]);
  return out;
}

namespace {

Bbox dilate_clamped(const Bbox& b, int by, int w, int h) {
  return {std::max(0, b.x0 - by), std::max(0, b.y0 - by),
          std::min(w - 1, b.x1 + by), std::min(h - 1, b.y1 + by)};
}

}  // namespace

// Parallel over radius bins. Each bin owns a disjoint slice of one large
// accumulator, so there are no write conflicts and no atomics. Slices are
// only zeroed and scanned inside the reachable window (boundary bbox grown
// by the radius, plus one row/col of margin for the neighbor probes), which
// is what makes reusing the buffer across calls cheap. Ring centers can sit
// at most r away from a boundary pixel, so votes outside that window are
// impossible and the windowed scan sees exactly what a full scan would.
std::vector<CircleCandidate> hough_circles(const BinaryMask& mask, int r_min,
                                           int r_max, int min_votes) {
  std::vector<CircleCandidate> all;
  if (r_min < 1 || r_max < r_min) return all;
  Bbox bbox;
  auto boundary = boundary_pixels(mask, &bbox);
  if (boundary.empty()) return all;

  int w = mask.width, h = mask.height;
  int bins = r_max - r_min + 1;
  for (int b = 0; b < bins; ++b) ring_spans(r_min + b);  // warm the cache

  // Persistent per-thread scratch; stale contents outside the cleared
  // windows are never read.
  static thread_local std::vector<std::uint16_t> scratch;
  std::size_t plane = static_cast<std::size_t>(w) * h;
  if (scratch.size() < plane * bins) scratch.resize(plane * bins);
  std::uint16_t* base = scratch.data();

  std::vector<Bbox> cleared(bins);
  for (int b = 0; b < bins; ++b)
    cleared[b] = dilate_clamped(bbox, r_min + b + 1, w, h);

#pragma omp parallel for schedule(dynamic)
  for (int b = 0; b < bins; ++b) {
    std::uint16_t* slice = base + plane * b;
    const Bbox& cw = cleared[b];
    for (int y = cw.y0; y <= cw.y1; ++y)
      std::fill(slice + static_cast<std::size_t>(y) * w + cw.x0,
                slice + static_cast<std::size_t>(y) * w + cw.x1 + 1,
                std::uint16_t{0});
    vote_bin(boundary, r_min + b, w, h, slice);
  }

  std::vector<std::vector<CircleCandidate>> per_bin(bins);
#pragma omp parallel for schedule(dynamic)
  for (int b = 0; b < bins; ++b) {
    Bbox scan = dilate_clamped(bbox, r_min + b, w, h);
    const std::uint16_t* below = b > 0 ? base + plane * (b - 1) : nullptr;
    const std::uint16_t* above =
        b + 1 < bins ? base + plane * (b + 1) : nullptr;
    Bbox none{0, 0, -1, -1};
    collect_bin_candidates(below, b > 0 ? cleared[b - 1] : none,
                           base + plane * b, above,
                           b + 1 < bins ? cleared[b + 1] : none, r_min + b, w,
                           h, scan, min_votes, per_bin[b]);
  }
  for (int b = 0; b < bins; ++b)
    all.insert(all.end(), per_bin[b].begin(), per_bin[b].end());
  return suppress(std::move(all), r_min);
}

namespace {
struct OmpKernels {
  static BinaryMask threshold(const Frame& f, const HsvRange& r) {
    return vision::threshold_mask(f, r);
  }
  static BinaryMask open(const BinaryMask& m, int k) {
    return vision::morphological_open(m, k);
  }
  static ScalarImage blur(const ScalarImage& s, int k, double sigma) {
    return vision::gaussian_blur(s, k, sigma);
  }
  static std::vector<CircleCandidate> hough(const BinaryMask& m, int r_min,
                                            int r_max, int min_votes) {
    return vision::hough_circles(m, r_min, r_max, min_votes);
  }
};
}  // namespace

std::optional<Detection> detect_object(const Frame& frame,
                                       const VisionConfig& cfg) {
  return detect_impl<OmpKernels>(frame, cfg);
}

}  // namespace follower::vision
