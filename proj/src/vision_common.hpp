#pragma once
// Shared per-element logic for the vision kernels. The OpenMP and serial
// variants both call these helpers, differing only in how the outer loops
// run, which is what keeps their outputs bit-identical.
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <vector>

#include "follower/vision.hpp"

namespace follower::vision::detail {

constexpr double kMinVotesFrac = 0.5;  // detect_object: votes >= frac*2*pi*r

inline bool hsv_in_range(const HsvRange& r, const Hsv& c) {
  bool h_ok = r.h_lo <= r.h_hi ? (c.h >= r.h_lo && c.h <= r.h_hi)
                               : (c.h >= r.h_lo || c.h <= r.h_hi);
  return h_ok && c.s >= r.s_lo && c.s <= r.s_hi && c.v >= r.v_lo &&
         c.v <= r.v_hi;
}

inline void threshold_row(const Frame& f, const HsvRange& r, int y,
                          std::uint8_t* out) {
  const std::uint8_t* px = &f.rgb[f.idx(0, y)];
  for (int x = 0; x < f.width; ++x, px += 3) {
    Hsv c = rgb_to_hsv(px[0], px[1], px[2]);
    out[x] = hsv_in_range(r, c) ? 1 : 0;
  }
}

// Horizontal min/max over a window of half width `half`; out-of-image is 0.
template <bool Erode>
inline void morph_h_row(const BinaryMask& in, int half, int y,
                        std::uint8_t* out) {
  const std::uint8_t* row = &in.bits[static_cast<std::size_t>(y) * in.width];
  for (int x = 0; x < in.width; ++x) {
    std::uint8_t acc = Erode ? 1 : 0;
    for (int dx = -half; dx <= half; ++dx) {
      int xi = x + dx;
      std::uint8_t v = (xi < 0 || xi >= in.width) ? 0 : row[xi];
      if (Erode)
        acc = std::min(acc, v);
      else
        acc = std::max(acc, v);
    }
    out[x] = acc;
  }
}

template <bool Erode>
inline void morph_v_row(const BinaryMask& in, int half, int y,
                        std::uint8_t* out) {
  for (int x = 0; x < in.width; ++x) {
    std::uint8_t acc = Erode ? 1 : 0;
    for (int dy = -half; dy <= half; ++dy) {
      int yi = y + dy;
      std::uint8_t v = (yi < 0 || yi >= in.height) ? 0 : in.at(x, yi);
      if (Erode)
        acc = std::min(acc, v);
      else
        acc = std::max(acc, v);
    }
    out[x] = acc;
  }
}

inline void blur_h_row(const ScalarImage& in, const std::vector<double>& taps,
                       int y, double* out) {
  int half = static_cast<int>(taps.size()) / 2;
  const double* row = &in.px[static_cast<std::size_t>(y) * in.width];
  for (int x = 0; x < in.width; ++x) {
    double s = 0;
    for (int i = -half; i <= half; ++i) {
      int xi = std::clamp(x + i, 0, in.width - 1);  // border clamp
      s += taps[i + half] * row[xi];
    }
    out[x] = s;
  }
}

inline void blur_v_row(const ScalarImage& in, const std::vector<double>& taps,
                       int y, double* out) {
  int half = static_cast<int>(taps.size()) / 2;
  for (int x = 0; x < in.width; ++x) {
    double s = 0;
    for (int i = -half; i <= half; ++i) {
      int yi = std::clamp(y + i, 0, in.height - 1);
      s += taps[i + half] * in.at(x, yi);
    }
    out[x] = s;
  }
}

inline ScalarImage mask_to_scalar(const BinaryMask& m) {
  ScalarImage s(m.width, m.height);
  for (std::size_t i = 0; i < m.bits.size(); ++i)
    s.px[i] = m.bits[i] ? 255.0 : 0.0;
  return s;
}

inline BinaryMask rebinarize(const ScalarImage& s, double cut) {
  BinaryMask m(s.width, s.height);
  for (std::size_t i = 0; i < s.px.size(); ++i)
    m.bits[i] = s.px[i] >= cut ? 1 : 0;
  return m;
}

struct Bbox {
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;  // empty when x1 < x0
  bool empty() const { return x1 < x0; }
};

// Set pixels with at least one clear 4-neighbor (out-of-image counts clear).
inline std::vector<std::array<int, 2>> boundary_pixels(const BinaryMask& m,
                                                       Bbox* bbox) {
  std::vector<std::array<int, 2>> out;
  Bbox bb{m.width, m.height, -1, -1};
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      if (!m.at(x, y)) continue;
      bool edge = x == 0 || x == m.width - 1 || y == 0 || y == m.height - 1;
      if (edge || !m.at(x - 1, y) || !m.at(x + 1, y) || !m.at(x, y - 1) ||
          !m.at(x, y + 1)) {
        out.push_back({x, y});
        bb.x0 = std::min(bb.x0, x);
        bb.y0 = std::min(bb.y0, y);
        bb.x1 = std::max(bb.x1, x);
        bb.y1 = std::max(bb.y1, y);
      }
    }
  }
  if (bbox) *bbox = bb;
  return out;
}

// Horizontal runs of the radius-r ring, one or two spans per dy. A lattice
// offset belongs to ring r iff its distance is within one grid pitch of r:
// |d - r| < 1, i.e. (r-1)^2 < d^2 < (r+1)^2. Rings overlap on purpose; a
// rasterized circle whose radius falls near a half integer would otherwise
// split its votes between two bins and drop below the confidence floor.
struct RingSpan {
  int dy, lo, hi;  // dx in [lo, hi]
};

inline long long isqrt_le(long long n) {  // largest x >= 0 with x*x <= n
  if (n < 0) return -1;
  long long x = static_cast<long long>(std::sqrt(static_cast<double>(n)));
  while (x > 0 && x * x > n) --x;
  while ((x + 1) * (x + 1) <= n) ++x;
  return x;
}

inline std::vector<RingSpan> build_ring_spans(int r) {
  std::vector<RingSpan> spans;
  long long lo_sq = static_cast<long long>(r - 1) * (r - 1);  // exclusive
  long long hi_sq = static_cast<long long>(r + 1) * (r + 1) - 1;  // inclusive
  for (int dy = -r; dy <= r; ++dy) {
    long long d2 = static_cast<long long>(dy) * dy;
    long long b = hi_sq - d2;
    if (b < 0) continue;
    int hi = static_cast<int>(isqrt_le(b));
    long long a = lo_sq - d2;
    if (a < 0) {
      spans.push_back({dy, -hi, hi});
    } else {
      int lo = static_cast<int>(isqrt_le(a)) + 1;
      if (lo > hi) continue;
      spans.push_back({dy, -hi, -lo});
      spans.push_back({dy, lo, hi});
    }
  }
  return spans;
}

// Ring span cache, grown on demand. Guarded: the parallel hough asks for
// spans from several threads at once. Slots are heap vectors so a returned
// reference survives later cache growth.
inline const std::vector<RingSpan>& ring_spans(int r) {
  static std::mutex mu;
  static std::vector<std::unique_ptr<std::vector<RingSpan>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (r >= static_cast<int>(cache.size()))
    cache.resize(static_cast<std::size_t>(r) + 1);
  if (!cache[r])
    cache[r] = std::make_unique<std::vector<RingSpan>>(
        r >= 1 ? build_ring_spans(r) : std::vector<RingSpan>{});
  return *cache[r];
}

// Accumulates votes for one radius bin into `slice` (size w*h, pre-zeroed
// inside [wx0..wx1]x[wy0..wy1], which contains every reachable cell).
inline void vote_bin(const std::vector<std::array<int, 2>>& boundary, int r,
                     int w, int h, std::uint16_t* slice) {
  const auto& spans = ring_spans(r);
  for (const auto& p : boundary) {
    for (const auto& s : spans) {
      int cy = p[1] + s.dy;
      if (cy < 0 || cy >= h) continue;
      int x0 = std::max(0, p[0] + s.lo);
      int x1 = std::min(w - 1, p[0] + s.hi);
      std::uint16_t* row = slice + static_cast<std::size_t>(cy) * w;
      for (int x = x0; x <= x1; ++x) ++row[x];
    }
  }
}

inline bool bbox_contains(const Bbox& b, int x, int y) {
  return x >= b.x0 && x <= b.x1 && y >= b.y0 && y <= b.y1;
}

// Collects local maxima >= min_votes from one bin. Neighbors are the 6 axis
// cells (x+-1, y+-1, r+-1); missing slices count as zero. The windowed
// production path only zeroes a slice inside its valid bbox, so neighbor
// slices are consulted through their own valid region; anything outside is
// unreachable and counts as zero votes.
inline void collect_bin_candidates(const std::uint16_t* below,
                                   const Bbox& below_valid,
                                   const std::uint16_t* slice,
                                   const std::uint16_t* above,
                                   const Bbox& above_valid, int r, int w,
                                   int h, const Bbox& win, int min_votes,
                                   std::vector<CircleCandidate>& out) {
  int floor_votes = std::max(min_votes, 1);
  for (int y = win.y0; y <= win.y1; ++y) {
    const std::uint16_t* row = slice + static_cast<std::size_t>(y) * w;
    for (int x = win.x0; x <= win.x1; ++x) {
      int v = row[x];
      if (v < floor_votes) continue;
      if (x > 0 && row[x - 1] > v) continue;
      if (x < w - 1 && row[x + 1] > v) continue;
      if (y > 0 && slice[static_cast<std::size_t>(y - 1) * w + x] > v)
        continue;
      if (y < h - 1 && slice[static_cast<std::size_t>(y + 1) * w + x] > v)
        continue;
      std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (below && bbox_contains(below_valid, x, y) && below[i] > v) continue;
      if (above && bbox_contains(above_valid, x, y) && above[i] > v) continue;
      out.push_back({x, y, r, v});
    }
  }
}

// Votes-descending order with a total deterministic tie-break.
inline bool candidate_before(const CircleCandidate& a,
                             const CircleCandidate& b) {
  if (a.votes != b.votes) return a.votes > b.votes;
  if (a.r != b.r) return a.r < b.r;
  if (a.cy != b.cy) return a.cy < b.cy;
  return a.cx < b.cx;
}

// Greedy suppression: drop any candidate whose center lies within r_min of a
// stronger accepted one.
inline std::vector<CircleCandidate> suppress(
    std::vector<CircleCandidate> cands, int r_min) {
  std::sort(cands.begin(), cands.end(), candidate_before);
  std::vector<CircleCandidate> kept;
  long long rmin_sq = static_cast<long long>(r_min) * r_min;
  for (const auto& c : cands) {
    bool ok = true;
    for (const auto& k : kept) {
      long long dx = c.cx - k.cx, dy = c.cy - k.cy;
      if (dx * dx + dy * dy < rmin_sq) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(c);
  }
  return kept;
}

template <typename Kernels>
std::optional<Detection> detect_impl(const Frame& frame,
                                     const VisionConfig& cfg) {
  BinaryMask m = Kernels::threshold(frame, cfg.hsv_range);
  if (cfg.open_kernel > 1) m = Kernels::open(m, cfg.open_kernel);
  if (cfg.blur_kernel > 1) {
    ScalarImage s = Kernels::blur(mask_to_scalar(m), cfg.blur_kernel,
                                  cfg.blur_sigma);
    m = rebinarize(s, 128.0);
  }
  auto cands =
      Kernels::hough(m, cfg.hough_r_min, cfg.hough_r_max, cfg.hough_min_votes);
  for (const auto& c : cands) {
    if (c.votes >= kMinVotesFrac * 2.0 * std::numbers::pi * c.r) {
      Detection d;
      d.x_angle = c.cx;
      d.y_px = c.cy;
      d.radius_px = c.r;
      d.proximity = c.r > cfg.threshold_radius_px ? Proximity::Close
                                                  : Proximity::Far;
      return d;
    }
  }
  return std::nullopt;
}

}  // namespace follower::vision::detail
