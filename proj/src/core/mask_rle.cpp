#include "visionflow/core/mask_rle.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "visionflow/core/types.hpp"
#include "visionflow/error.hpp"

namespace visionflow {

namespace {

struct Interval {
  std::uint64_t begin;
  std::uint64_t end;
};

// Half-open intervals of 1-pixels in row-major order.
std::vector<Interval> one_intervals(const MaskRLE& m) {
  std::vector<Interval> out;
  std::uint64_t pos = 0;
  const auto& runs = m.runs();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (i % 2 == 1) out.push_back({pos, pos + runs[i]});
    pos += runs[i];
  }
  return out;
}

MaskRLE from_intervals(int width, int height, const std::vector<Interval>& ones) {
  const std::uint64_t total = static_cast<std::uint64_t>(width) * height;
  std::vector<std::uint32_t> runs;
  std::uint64_t pos = 0;
  for (const Interval& iv : ones) {
    if (iv.end <= iv.begin) continue;
    if (!runs.empty() && iv.begin == pos && runs.size() % 2 == 0) {
      // Touches the previous 1-run: extend it.
      runs.back() += static_cast<std::uint32_t>(iv.end - iv.begin);
      pos = iv.end;
      continue;
    }
    runs.push_back(static_cast<std::uint32_t>(iv.begin - pos));
    runs.push_back(static_cast<std::uint32_t>(iv.end - iv.begin));
    pos = iv.end;
  }
  if (pos < total || runs.empty()) runs.push_back(static_cast<std::uint32_t>(total - pos));
  return MaskRLE(width, height, std::move(runs));
}

void require_same_dims(const MaskRLE& a, const MaskRLE& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorKind::DimensionMismatch, std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                                  " vs " + std::to_string(b.width()) + "x" +
                                                  std::to_string(b.height()));
  }
}

}  // namespace

MaskRLE::MaskRLE(int width, int height, std::vector<std::uint32_t> runs)
    : width_(width), height_(height), runs_(std::move(runs)) {
  if (width_ < 1 || height_ < 1) throw Error(ErrorKind::DimensionMismatch, "mask dimensions must be positive");
  if (runs_.empty()) throw Error(ErrorKind::DimensionMismatch, "mask has no runs");
  for (std::size_t i = 1; i < runs_.size(); ++i) {
    if (runs_[i] == 0) throw Error(ErrorKind::DimensionMismatch, "zero-length run at index " + std::to_string(i));
  }
  const std::uint64_t sum = std::accumulate(runs_.begin(), runs_.end(), std::uint64_t{0});
  if (sum != static_cast<std::uint64_t>(width_) * height_) {
    throw Error(ErrorKind::DimensionMismatch, "runs sum to " + std::to_string(sum) + ", expected " +
                                                  std::to_string(static_cast<std::uint64_t>(width_) * height_));
  }
}

std::uint64_t MaskRLE::area() const noexcept {
  std::uint64_t n = 0;
  for (std::size_t i = 1; i < runs_.size(); i += 2) n += runs_[i];
  return n;
}

MaskRLE rle_encode(std::span<const std::uint8_t> bitmap, int width, int height) {
  if (width < 1 || height < 1 || bitmap.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorKind::DimensionMismatch, "bitmap length " + std::to_string(bitmap.size()) +
                                                  " does not match " + std::to_string(width) + "x" +
                                                  std::to_string(height));
  }
  std::vector<std::uint32_t> runs;
  std::uint8_t current = 0;
  std::uint32_t count = 0;
  for (std::uint8_t v : bitmap) {
    const std::uint8_t bit = v ? 1 : 0;
    if (bit != current) {
      runs.push_back(count);
      count = 0;
      current = bit;
    }
    ++count;
  }
  runs.push_back(count);
  return MaskRLE(width, height, std::move(runs));
}

MaskRLE rle_encode(const Bitmap& bitmap) { return rle_encode(bitmap.bits, bitmap.width, bitmap.height); }

Bitmap rle_decode(const MaskRLE& mask) {
  Bitmap out(mask.width(), mask.height());
  std::size_t pos = 0;
  const auto& runs = mask.runs();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (i % 2 == 1) std::fill_n(out.bits.begin() + static_cast<std::ptrdiff_t>(pos), runs[i], std::uint8_t{1});
    pos += runs[i];
  }
  return out;
}

double mask_jaccard(const MaskRLE& a, const MaskRLE& b) {
  require_same_dims(a, b);
  const auto ia = one_intervals(a);
  const auto ib = one_intervals(b);
  std::uint64_t inter = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ia.size() && j < ib.size()) {
    const std::uint64_t lo = std::max(ia[i].begin, ib[j].begin);
    const std::uint64_t hi = std::min(ia[i].end, ib[j].end);
    if (hi > lo) inter += hi - lo;
    if (ia[i].end < ib[j].end) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::uint64_t uni = a.area() + b.area() - inter;
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

MaskRLE mask_union(const MaskRLE& a, const MaskRLE& b) {
  require_same_dims(a, b);
  auto ia = one_intervals(a);
  const auto ib = one_intervals(b);
  ia.insert(ia.end(), ib.begin(), ib.end());
  std::sort(ia.begin(), ia.end(), [](const Interval& l, const Interval& r) { return l.begin < r.begin; });
  std::vector<Interval> merged;
  for (const Interval& iv : ia) {
    if (!merged.empty() && iv.begin <= merged.back().end) {
      merged.back().end = std::max(merged.back().end, iv.end);
    } else {
      merged.push_back(iv);
    }
  }
  return from_intervals(a.width(), a.height(), merged);
}

MaskRLE mask_clip(const MaskRLE& mask, const BBox& region) {
  if (!region.fits(mask.width(), mask.height())) {
    throw Error(ErrorKind::DimensionMismatch, "clip region outside mask bounds");
  }
  const auto ones = one_intervals(mask);
  std::vector<Interval> kept;
  const auto width = static_cast<std::uint64_t>(mask.width());
  std::size_t k = 0;
  for (int y = region.y; y < region.y + region.h; ++y) {
    const std::uint64_t row_lo = y * width + static_cast<std::uint64_t>(region.x);
    const std::uint64_t row_hi = row_lo + static_cast<std::uint64_t>(region.w);
    while (k < ones.size() && ones[k].end <= row_lo) ++k;
    for (std::size_t t = k; t < ones.size() && ones[t].begin < row_hi; ++t) {
      const std::uint64_t lo = std::max(ones[t].begin, row_lo);
      const std::uint64_t hi = std::min(ones[t].end, row_hi);
      if (hi > lo) kept.push_back({lo, hi});
    }
  }
  return from_intervals(mask.width(), mask.height(), kept);
}

BBox mask_bounds(const MaskRLE& mask) {
  const auto ones = one_intervals(mask);
  if (ones.empty()) throw Error(ErrorKind::DimensionMismatch, "bounds of an empty mask");
  const auto width = static_cast<std::uint64_t>(mask.width());
  int x0 = mask.width();
  int x1 = -1;
  const int y0 = static_cast<int>(ones.front().begin / width);
  const int y1 = static_cast<int>((ones.back().end - 1) / width);
  for (const Interval& iv : ones) {
    const std::uint64_t first_row = iv.begin / width;
    const std::uint64_t last_row = (iv.end - 1) / width;
    if (first_row != last_row) {
      // Wraps a row boundary: touches both the last and the first column.
      x0 = 0;
      x1 = mask.width() - 1;
      continue;
    }
    x0 = std::min(x0, static_cast<int>(iv.begin % width));
    x1 = std::max(x1, static_cast<int>((iv.end - 1) % width));
  }
  return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

}  // namespace visionflow
