#include "scenes.hpp"

#include <fstream>
#include <sstream>

#include "visionflow/error.hpp"

namespace vf_test {

SceneShape shape(const std::string& label, ShapeKind kind, int x, int y, int w, int h) {
  return {Label::normalize(label), kind, x, y, w, h};
}

SceneSpec make_scene(int width, int height, std::vector<SceneShape> shapes) {
  SceneSpec s;
  s.width = width;
  s.height = height;
  s.shapes = std::move(shapes);
  validate_scene(s);
  return s;
}

SceneSpec random_scene(std::mt19937& rng, int width, int height, int max_shapes,
                       const std::vector<std::string>& labels) {
  std::uniform_int_distribution<int> count(0, max_shapes);
  std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<SceneShape> shapes;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const int w = std::uniform_int_distribution<int>(2, width / 2)(rng);
    const int h = std::uniform_int_distribution<int>(2, height / 2)(rng);
    const int x = std::uniform_int_distribution<int>(0, width - w)(rng);
    const int y = std::uniform_int_distribution<int>(0, height - h)(rng);
    shapes.push_back(shape(labels[pick(rng)], coin(rng) ? ShapeKind::Ellipse : ShapeKind::Rect, x, y, w, h));
  }
  return make_scene(width, height, std::move(shapes));
}

ImageRef add_scene(exec::SceneCatalog& catalog, const std::string& name, const SceneSpec& scene) {
  ImageRef ref;
  ref.id = name;
  ref.uri = "mem/" + name + ".json";
  ref.width = scene.width;
  ref.height = scene.height;
  ref.kind = ImageSourceKind::Scene;
  catalog.put(ref.uri, scene);
  return ref;
}

SceneSpec dogs_and_lemon_scene() {
  return make_scene(64, 48, {shape("dogs", ShapeKind::Rect, 2, 4, 14, 10), shape("dogs", ShapeKind::Ellipse, 30, 6, 16, 12),
                             shape("lemons", ShapeKind::Ellipse, 10, 30, 10, 8)});
}

SceneSpec lemons_and_dog_scene() {
  return make_scene(64, 48, {shape("lemons", ShapeKind::Ellipse, 4, 4, 10, 8),
                             shape("lemons", ShapeKind::Ellipse, 40, 30, 12, 9),
                             shape("dogs", ShapeKind::Rect, 20, 20, 15, 12)});
}

std::string fixture_path(const std::string& relative) { return std::string(VISIONFLOW_FIXTURES) + "/" + relative; }

std::string read_fixture(const std::string& relative) {
  std::ifstream in(fixture_path(relative), std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidRequest, "missing fixture " + relative);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace vf_test
