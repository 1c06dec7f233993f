// Times the OpenMP vision kernels against the serial reference on a
// representative frame and checks the outputs are bit-identical.
#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "follower/vision.hpp"

using namespace follower::vision;

namespace {

Frame make_frame() {
  Frame f;
  f.fill(40, 40, 40);
  // target disc plus speckle the open kernel has to remove
  auto disc = [&](int cx, int cy, int r) {
    for (int y = cy - r; y <= cy + r; ++y)
      for (int x = cx - r; x <= cx + r; ++x) {
        if (x < 0 || x >= f.width || y < 0 || y >= f.height) continue;
        int dx = x - cx, dy = y - cy;
        if (dx * dx + dy * dy <= r * r) f.set_pixel(x, y, 230, 220, 30);
      }
  };
  disc(176, 128, 55);
  disc(30, 40, 1);
  disc(290, 200, 1);
  disc(60, 210, 2);
  return f;
}

ScalarImage to_scalar(const BinaryMask& m) {
  ScalarImage s(m.width, m.height);
  for (std::size_t i = 0; i < m.bits.size(); ++i)
    s.px[i] = m.bits[i] ? 255.0 : 0.0;
  return s;
}

double time_ms(const std::function<void()>& fn) {
  using clock = std::chrono::steady_clock;
  fn();  // warm up
  int iters = 0;
  auto start = clock::now();
  double elapsed = 0.0;
  while (elapsed < 0.3 || iters < 5) {
    fn();
    ++iters;
    elapsed = std::chrono::duration<double>(clock::now() - start).count();
  }
  return 1e3 * elapsed / iters;
}

void row(const char* name, double omp_ms, double ref_ms) {
  std::printf("%-16s %10.3f %10.3f %8.2fx\n", name, omp_ms, ref_ms,
              ref_ms / omp_ms);
}

}  // namespace

int main() {
  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("threads: %d\n", threads);

  VisionConfig cfg;
  Frame frame = make_frame();
  BinaryMask m0 = threshold_mask(frame, cfg.hsv_range);
  BinaryMask m1 = morphological_open(m0, cfg.open_kernel);
  ScalarImage s1 = to_scalar(m1);

  bool same = m0 == ref::threshold_mask(frame, cfg.hsv_range) &&
              m1 == ref::morphological_open(m0, cfg.open_kernel) &&
              gaussian_blur(s1, cfg.blur_kernel, cfg.blur_sigma) ==
                  ref::gaussian_blur(s1, cfg.blur_kernel, cfg.blur_sigma) &&
              detect_object(frame, cfg).has_value() &&
              ref::detect_object(frame, cfg).has_value();
  {
    auto a = hough_circles(m1, cfg.hough_r_min, cfg.hough_r_max,
                           cfg.hough_min_votes);
    auto b = ref::hough_circles(m1, cfg.hough_r_min, cfg.hough_r_max,
                                cfg.hough_min_votes);
    same = same && a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i)
      same = a[i].cx == b[i].cx && a[i].cy == b[i].cy && a[i].r == b[i].r &&
             a[i].votes == b[i].votes;
  }
  if (!same) {
    std::fprintf(stderr, "OpenMP and reference outputs differ\n");
    return 2;
  }
  std::printf("outputs: identical\n\n");
  std::printf("%-16s %10s %10s %8s\n", "kernel", "omp ms", "serial ms",
              "ratio");

  row("threshold",
      time_ms([&] { threshold_mask(frame, cfg.hsv_range); }),
      time_ms([&] { ref::threshold_mask(frame, cfg.hsv_range); }));
  row("open",
      time_ms([&] { morphological_open(m0, cfg.open_kernel); }),
      time_ms([&] { ref::morphological_open(m0, cfg.open_kernel); }));
  row("blur",
      time_ms([&] { gaussian_blur(s1, cfg.blur_kernel, cfg.blur_sigma); }),
      time_ms([&] { ref::gaussian_blur(s1, cfg.blur_kernel, cfg.blur_sigma); }));
  row("hough",
      time_ms([&] {
        hough_circles(m1, cfg.hough_r_min, cfg.hough_r_max,
                      cfg.hough_min_votes);
      }),
      time_ms([&] {
        ref::hough_circles(m1, cfg.hough_r_min, cfg.hough_r_max,
                           cfg.hough_min_votes);
      }));
  row("detect_object",
      time_ms([&] { detect_object(frame, cfg); }),
      time_ms([&] { ref::detect_object(frame, cfg); }));
  return 0;
}
