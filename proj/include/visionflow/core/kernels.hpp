#pragma once

// Data-parallel pixel kernels. Each kernel has a plain serial reference in
// kernels::serial and an OpenMP version in kernels::parallel; the unqualified
// entry points dispatch to the parallel build when OpenMP is available. Both
// paths must produce bit-identical results, which the unit tests enforce.

#include <cstdint>
#include <span>

#include "visionflow/core/mask_rle.hpp"
#include "visionflow/core/raster.hpp"
#include "visionflow/core/types.hpp"

namespace visionflow::kernels {

struct ShapeFill {
  ShapeKind kind = ShapeKind::Rect;
  BBox box;
};

struct OverlapCounts {
  std::uint64_t intersection = 0;
  std::uint64_t union_ = 0;
  friend bool operator==(const OverlapCounts&, const OverlapCounts&) = default;
};

namespace serial {
void fill_shapes(Bitmap& out, std::span<const ShapeFill> shapes);
OverlapCounts overlap_counts(const Bitmap& a, const Bitmap& b);
void blend_mask(RgbImage& image, const Bitmap& mask, Rgb color);
}  // namespace serial

namespace parallel {
void fill_shapes(Bitmap& out, std::span<const ShapeFill> shapes);
OverlapCounts overlap_counts(const Bitmap& a, const Bitmap& b);
void blend_mask(RgbImage& image, const Bitmap& mask, Rgb color);
}  // namespace parallel

void fill_shapes(Bitmap& out, std::span<const ShapeFill> shapes);
OverlapCounts overlap_counts(const Bitmap& a, const Bitmap& b);
/// Alpha 0.5 blend of `color` over every set pixel, rounding half up.
void blend_mask(RgbImage& image, const Bitmap& mask, Rgb color);

/// True when the library was built with the OpenMP kernels.
bool parallel_enabled() noexcept;

inline std::uint8_t blend_channel(std::uint8_t base, std::uint8_t over) noexcept {
  return static_cast<std::uint8_t>((static_cast<unsigned>(base) + over + 1) / 2);
}

}  // namespace visionflow::kernels
