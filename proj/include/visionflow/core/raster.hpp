#pragma once

#include <cstdint>
#include <vector>

#include "visionflow/core/mask_rle.hpp"
#include "visionflow/core/types.hpp"

namespace visionflow {

/// Interleaved 8-bit RGB raster.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  RgbImage() = default;
  RgbImage(int w, int h, Rgb fill = {}) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3) {
    for (std::size_t i = 0; i < pixels.size(); i += 3) {
      pixels[i] = fill.r;
      pixels[i + 1] = fill.g;
      pixels[i + 2] = fill.b;
    }
  }

  Rgb at(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    return {pixels[i], pixels[i + 1], pixels[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    pixels[i] = c.r;
    pixels[i + 1] = c.g;
    pixels[i + 2] = c.b;
  }
  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// Pixel-center membership test shared by every rasterization path. The
/// ellipse test is done in integers on doubled coordinates so it is exact.
inline bool shape_contains(ShapeKind kind, const BBox& box, int px, int py) noexcept {
  if (px < box.x || py < box.y || px >= box.x + box.w || py >= box.y + box.h) return false;
  if (kind == ShapeKind::Rect) return true;
  const long long w = box.w;
  const long long h = box.h;
  const long long dx = 2LL * px + 1 - 2LL * box.x - w;
  const long long dy = 2LL * py + 1 - 2LL * box.y - h;
  return dx * dx * h * h + dy * dy * w * w <= w * w * h * h;
}

/// Union of every shape carrying `label` (after normalization). Unknown
/// labels produce an empty mask.
MaskRLE rasterize_scene(const SceneSpec& scene, const Label& label);
MaskRLE rasterize_shape(const SceneSpec& scene, const SceneShape& shape);
MaskRLE box_mask(int width, int height, const BBox& box);

/// Neutral rendering of a scene used as the compositing base: white
/// background with every shape filled in mid gray.
RgbImage render_scene(const SceneSpec& scene);

}  // namespace visionflow
