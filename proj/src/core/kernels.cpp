#include "visionflow/core/kernels.hpp"

#include <algorithm>

#include "visionflow/error.hpp"

#ifdef VISIONFLOW_HAVE_OPENMP
#include <omp.h>
#endif

namespace visionflow::kernels {

namespace {

// Below this many pixels the thread fork costs more than the work.
constexpr long long kParallelMinPixels = 1 << 14;

void check_same(const Bitmap& a, const Bitmap& b) {
  if (a.width != b.width || a.height != b.height) {
    throw Error(ErrorKind::DimensionMismatch, "bitmap dimensions differ");
  }
}

void check_blend(const RgbImage& image, const Bitmap& mask) {
  if (image.width != mask.width || image.height != mask.height) {
    throw Error(ErrorKind::CompositingFailure, "mask dimensions do not match the base image");
  }
}

inline void fill_row(Bitmap& out, std::span<const ShapeFill> shapes, int y) {
  std::uint8_t* row = out.bits.data() + static_cast<std::size_t>(y) * out.width;
  for (const ShapeFill& s : shapes) {
    if (y < s.box.y || y >= s.box.y + s.box.h) continue;
    const int x0 = std::max(s.box.x, 0);
    const int x1 = std::min(s.box.x + s.box.w, out.width);
    if (s.kind == ShapeKind::Rect) {
      std::fill(row + x0, row + x1, std::uint8_t{1});
      continue;
    }
    for (int x = x0; x < x1; ++x) {
      if (shape_contains(s.kind, s.box, x, y)) row[x] = 1;
    }
  }
}

inline void blend_row(RgbImage& image, const Bitmap& mask, Rgb color, int y) {
  const std::uint8_t* m = mask.bits.data() + static_cast<std::size_t>(y) * mask.width;
  std::uint8_t* px = image.pixels.data() + static_cast<std::size_t>(y) * image.width * 3;
  for (int x = 0; x < image.width; ++x) {
    if (!m[x]) continue;
    px[3 * x] = blend_channel(px[3 * x], color.r);
    px[3 * x + 1] = blend_channel(px[3 * x + 1], color.g);
    px[3 * x + 2] = blend_channel(px[3 * x + 2], color.b);
  }
}

}  // namespace

namespace serial {

void fill_shapes(Bitmap& out, std::span<const ShapeFill> shapes) {
  for (int y = 0; y < out.height; ++y) fill_row(out, shapes, y);
}

OverlapCounts overlap_counts(const Bitmap& a, const Bitmap& b) {
  check_same(a, b);
  OverlapCounts c;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    const bool pa = a.bits[i] != 0;
    const bool pb = b.bits[i] != 0;
    c.intersection += (pa && pb) ? 1 : 0;
    c.union_ += (pa || pb) ? 1 : 0;
  }
  return c;
}

void blend_mask(RgbImage& image, const Bitmap& mask, Rgb color) {
  check_blend(image, mask);
  for (int y = 0; y < image.height; ++y) blend_row(image, mask, color, y);
}

}  // namespace serial

namespace parallel {

void fill_shapes(Bitmap& out, std::span<const ShapeFill> shapes) {
  const long long pixels = static_cast<long long>(out.width) * out.height;
#pragma omp parallel for schedule(static) if (pixels >= kParallelMinPixels)
  for (int y = 0; y < out.height; ++y) fill_row(out, shapes, y);
  (void)pixels;
}

OverlapCounts overlap_counts(const Bitmap& a, const Bitmap& b) {
  check_same(a, b);
  const long long n = static_cast<long long>(a.bits.size());
  std::uint64_t inter = 0;
  std::uint64_t uni = 0;
  const std::uint8_t* pa = a.bits.data();
  const std::uint8_t* pb = b.bits.data();
#pragma omp parallel for schedule(static) reduction(+ : inter, uni) if (n >= kParallelMinPixels)
  for (long long i = 0; i < n; ++i) {
    const bool xa = pa[i] != 0;
    const bool xb = pb[i] != 0;
    inter += (xa && xb) ? 1 : 0;
    uni += (xa || xb) ? 1 : 0;
  }
  return {inter, uni};
}

void blend_mask(RgbImage& image, const Bitmap& mask, Rgb color) {
  check_blend(image, mask);
  const long long pixels = static_cast<long long>(image.width) * image.height;
#pragma omp parallel for schedule(static) if (pixels >= kParallelMinPixels)
  for (int y = 0; y < image.height; ++y) blend_row(image, mask, color, y);
  (void)pixels;
}

}  // namespace parallel

bool parallel_enabled() noexcept {
#ifdef VISIONFLOW_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

void fill_shapes(Bitmap& out, std::span<const ShapeFill> shapes) {
  if (parallel_enabled()) {
    parallel::fill_shapes(out, shapes);
  } else {
    serial::fill_shapes(out, shapes);
  }
}

OverlapCounts overlap_counts(const Bitmap& a, const Bitmap& b) {
  return parallel_enabled() ? parallel::overlap_counts(a, b) : serial::overlap_counts(a, b);
}

void blend_mask(RgbImage& image, const Bitmap& mask, Rgb color) {
  if (parallel_enabled()) {
    parallel::blend_mask(image, mask, color);
  } else {
    serial::blend_mask(image, mask, color);
  }
}

}  // namespace visionflow::kernels
