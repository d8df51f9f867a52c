#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "visionflow/core/raster.hpp"
#include "visionflow/engine/scheduler.hpp"
#include "visionflow/exec/executor.hpp"
#include "visionflow/planning/dag.hpp"

namespace visionflow::engine {

struct Composite {
  int image_index = 0;
  /// id and uri are the artifact file name, e.g. "composite-0.ppm".
  ImageRef image;
  RgbImage raster;

  friend bool operator==(const Composite&, const Composite&) = default;
};

struct Integration {
  std::vector<Composite> composites;
  nlohmann::ordered_json summary;
};

std::string composite_name(int image_index);

/// Renumbers instance ids per label across the whole run (1, 2, ... in node,
/// image, mask order) and gives the k-th non-empty mask palette colour k.
void assign_instances(std::vector<NodeResult>& results);

/// Scene images are rendered, raster images are read from their uri. Throws
/// CompositingFailure if the pixels cannot be produced or the size is off.
RgbImage base_raster(const ImageRef& image, const exec::SceneCatalog& scenes);

/// Masks of succeeded nodes are alpha-blended over `base`; detection boxes
/// get a 1px outline only for labels that have no mask on this image.
RgbImage composite(RgbImage base, const std::vector<NodeResult>& results, int image_index);

/// One composite per input image plus a JSON summary of the run.
Integration integrate(std::vector<NodeResult>& results, const planning::PlanDAG& dag,
                      const exec::SceneCatalog& scenes, const std::string& planner_backend);

}  // namespace visionflow::engine
