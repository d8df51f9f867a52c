#pragma once

#include <random>
#include <string>
#include <vector>

#include "visionflow/core/types.hpp"
#include "visionflow/exec/executor.hpp"

namespace vf_test {

using namespace visionflow;

/// Up to `max_shapes` rects/ellipses with labels drawn from `labels`, every
/// shape at least 2x2 and fully inside the canvas.
SceneSpec random_scene(std::mt19937& rng, int width, int height, int max_shapes,
                       const std::vector<std::string>& labels);

SceneSpec make_scene(int width, int height, std::vector<SceneShape> shapes);
SceneShape shape(const std::string& label, ShapeKind kind, int x, int y, int w, int h);

/// Registers `scene` in the catalog under "mem/<name>.json" and returns the
/// matching image reference.
ImageRef add_scene(exec::SceneCatalog& catalog, const std::string& name, const SceneSpec& scene);

/// Two dogs and a lemon; two lemons and a dog.
SceneSpec dogs_and_lemon_scene();
SceneSpec lemons_and_dog_scene();

/// Absolute path of a file under tests/fixtures, and its exact bytes.
std::string fixture_path(const std::string& relative);
std::string read_fixture(const std::string& relative);

}  // namespace vf_test
