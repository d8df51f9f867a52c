#include "visionflow/core/palette.hpp"

#include <algorithm>
#include <cmath>

namespace visionflow {

int palette_hue(int k) noexcept {
  const long long h = (static_cast<long long>(k) * 137) % 360;
  return static_cast<int>(h < 0 ? h + 360 : h);
}

Rgb hsv_to_rgb(double hue_degrees, double saturation, double value) noexcept {
  double h = std::fmod(hue_degrees, 360.0);
  if (h < 0) h += 360.0;
  const double c = value * saturation;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  const double m = value - c;
  auto to8 = [m](double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround((v + m) * 255.0), 0L, 255L));
  };
  return {to8(r), to8(g), to8(b)};
}

Rgb palette_color(int k) noexcept { return hsv_to_rgb(palette_hue(k), 1.0, 1.0); }

}  // namespace visionflow
