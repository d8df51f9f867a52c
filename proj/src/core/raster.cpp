#include "visionflow/core/raster.hpp"

#include <vector>

#include "visionflow/core/kernels.hpp"

namespace visionflow {

namespace {
constexpr Rgb kBackground{255, 255, 255};
constexpr Rgb kShapeFill{160, 160, 160};
}  // namespace

MaskRLE rasterize_scene(const SceneSpec& scene, const Label& label) {
  std::vector<kernels::ShapeFill> fills;
  for (const SceneShape& s : scene.shapes) {
    if (s.label == label) fills.push_back({s.kind, s.box()});
  }
  Bitmap bm(scene.width, scene.height);
  kernels::fill_shapes(bm, fills);
  return rle_encode(bm);
}

MaskRLE rasterize_shape(const SceneSpec& scene, const SceneShape& shape) {
  const kernels::ShapeFill fill{shape.kind, shape.box()};
  Bitmap bm(scene.width, scene.height);
  kernels::fill_shapes(bm, std::span<const kernels::ShapeFill>(&fill, 1));
  return rle_encode(bm);
}

MaskRLE box_mask(int width, int height, const BBox& box) {
  const kernels::ShapeFill fill{ShapeKind::Rect, box};
  Bitmap bm(width, height);
  kernels::fill_shapes(bm, std::span<const kernels::ShapeFill>(&fill, 1));
  return rle_encode(bm);
}

RgbImage render_scene(const SceneSpec& scene) {
  RgbImage img(scene.width, scene.height, kBackground);
  for (const SceneShape& s : scene.shapes) {
    const BBox box = s.box();
    for (int y = box.y; y < box.y + box.h; ++y) {
      for (int x = box.x; x < box.x + box.w; ++x) {
        if (shape_contains(s.kind, box, x, y)) img.set(x, y, kShapeFill);
      }
    }
  }
  return img;
}

}  // namespace visionflow
