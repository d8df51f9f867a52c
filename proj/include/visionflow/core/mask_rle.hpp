#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace visionflow {

struct BBox;

/// Row-major 0/1 raster. Values other than 0 are treated as set.
struct Bitmap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  Bitmap() = default;
  Bitmap(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

  std::uint8_t& at(int x, int y) { return bits[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x]; }
  friend bool operator==(const Bitmap&, const Bitmap&) = default;
};

/// Run-length encoded binary mask. Runs alternate between 0-pixels and
/// 1-pixels in row-major order and always begin with the 0-run (which may be
/// zero). Only the leading run may be zero and the runs sum to width*height.
class MaskRLE {
 public:
  MaskRLE() = default;
  /// Throws Error(DimensionMismatch) when the runs violate the invariants.
  MaskRLE(int width, int height, std::vector<std::uint32_t> runs);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const std::vector<std::uint32_t>& runs() const noexcept { return runs_; }

  /// Number of 1-pixels.
  std::uint64_t area() const noexcept;
  bool empty() const noexcept { return area() == 0; }

  friend bool operator==(const MaskRLE&, const MaskRLE&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint32_t> runs_;
};

MaskRLE rle_encode(std::span<const std::uint8_t> bitmap, int width, int height);
MaskRLE rle_encode(const Bitmap& bitmap);
Bitmap rle_decode(const MaskRLE& mask);

/// |a ∩ b| / |a ∪ b| computed directly on the runs; 1.0 when both are empty.
double mask_jaccard(const MaskRLE& a, const MaskRLE& b);

MaskRLE mask_union(const MaskRLE& a, const MaskRLE& b);
MaskRLE mask_clip(const MaskRLE& mask, const BBox& region);
/// Smallest box containing every 1-pixel. Requires a non-empty mask.
BBox mask_bounds(const MaskRLE& mask);

}  // namespace visionflow
