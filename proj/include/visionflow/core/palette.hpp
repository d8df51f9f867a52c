#pragma once

#include "visionflow/core/types.hpp"

namespace visionflow {

/// Hue in degrees [0, 360) assigned to the k-th emitted instance: golden-angle
/// style stepping by 137 degrees.
int palette_hue(int k) noexcept;

/// Full-saturation, full-value HSV to 8-bit RGB.
Rgb hsv_to_rgb(double hue_degrees, double saturation, double value) noexcept;

Rgb palette_color(int k) noexcept;

}  // namespace visionflow
