#pragma once

#include <filesystem>
#include <string>

#include "visionflow/core/raster.hpp"
#include "visionflow/core/types.hpp"

namespace visionflow {

/// Reads binary PPM (P6) or PGM (P5) with maxval <= 255. PGM samples are
/// replicated into all three channels.
RgbImage read_pnm(const std::filesystem::path& path);
RgbImage decode_pnm(const std::string& bytes);

std::string encode_ppm(const RgbImage& image);
void write_ppm(const std::filesystem::path& path, const RgbImage& image);

SceneSpec load_scene(const std::filesystem::path& path);
SceneSpec parse_scene(const std::string& json_text);
std::string dump_scene(const SceneSpec& scene);

/// Builds an ImageRef for a scene JSON (".json") or PNM raster path by
/// reading just enough of the file to learn its dimensions.
ImageRef probe_image(const std::string& path);

}  // namespace visionflow
