#include "visionflow/exec/mock.hpp"

#include <algorithm>
#include <map>

#include "visionflow/core/raster.hpp"
#include "visionflow/error.hpp"

namespace visionflow::exec {

namespace {

double box_iou(const BBox& a, const BBox& b) {
  const int x0 = std::max(a.x, b.x);
  const int y0 = std::max(a.y, b.y);
  const int x1 = std::min(a.x + a.w, b.x + b.w);
  const int y1 = std::min(a.y + a.h, b.y + b.h);
  if (x1 <= x0 || y1 <= y0) return 0.0;
  const double inter = static_cast<double>(x1 - x0) * (y1 - y0);
  return inter / (static_cast<double>(a.area()) + static_cast<double>(b.area()) - inter);
}

const Label& require_target(const ExecInput& in) {
  if (!in.target) throw Error(ErrorKind::CapabilityMismatch, std::string(op_name(in.op)) + " needs a target");
  return *in.target;
}

}  // namespace

ExecOutput MockDetector::execute(const ExecInput& in) {
  if (in.op != OperationKind::Locate && in.op != OperationKind::Classify) {
    throw Error(ErrorKind::CapabilityMismatch, "mock detector cannot " + std::string(op_name(in.op)));
  }
  const Label& target = require_target(in);
  const auto scene = scenes_->ground_for(in.image);
  ExecOutput out;
  if (in.op == OperationKind::Classify) {
    const bool present = scene && std::any_of(scene->shapes.begin(), scene->shapes.end(),
                                              [&](const SceneShape& s) { return s.label == target; });
    out.labels = std::vector<LabelScore>{{target, present ? kMockConfidence : 0.0}};
    return out;
  }
  if (!scene) return out;
  for (const SceneShape& s : scene->shapes) {
    if (s.label == target) out.detections.push_back({s.label, s.box(), kMockConfidence});
  }
  return out;
}

ExecOutput MockSegmenter::execute(const ExecInput& in) {
  if (in.op != OperationKind::Segment) {
    throw Error(ErrorKind::CapabilityMismatch, "mock segmenter cannot " + std::string(op_name(in.op)));
  }
  const Label& target = require_target(in);
  const auto scene = scenes_->ground_for(in.image);
  ExecOutput out;
  if (!scene) return out;
  std::vector<const SceneShape*> shapes;
  for (const SceneShape& s : scene->shapes) {
    if (s.label == target) shapes.push_back(&s);
  }
  if (!in.regions) {
    int id = 0;
    for (const SceneShape* s : shapes) out.masks.push_back({target, id++, rasterize_shape(*scene, *s), {}});
    return out;
  }
  std::vector<bool> claimed(shapes.size(), false);
  int id = 0;
  for (const BBox& region : *in.regions) {
    if (!region.fits(scene->width, scene->height)) {
      throw Error(ErrorKind::DimensionMismatch, "region outside image bounds");
    }
    std::optional<std::size_t> best;
    double best_iou = 0.0;
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      const double iou = box_iou(shapes[i]->box(), region);
      if (iou <= 0.0) continue;
      const bool better = !best || iou > best_iou || (iou == best_iou && claimed[*best] && !claimed[i]);
      if (better) {
        best = i;
        best_iou = iou;
      }
    }
    if (best) {
      claimed[*best] = true;
      out.masks.push_back({target, id++, mask_clip(rasterize_shape(*scene, *shapes[*best]), region), {}});
    } else {
      const auto pixels = static_cast<std::uint32_t>(scene->width) * static_cast<std::uint32_t>(scene->height);
      out.masks.push_back({target, id++, MaskRLE(scene->width, scene->height, {pixels}), {}});
    }
  }
  return out;
}

ExecOutput MockGenerator::execute(const ExecInput& in) {
  if (in.op != OperationKind::Generate && in.op != OperationKind::Edit) {
    throw Error(ErrorKind::CapabilityMismatch, "mock generator cannot " + std::string(op_name(in.op)));
  }
  ImageRef copy = in.image;
  copy.id = in.image.id + (in.op == OperationKind::Edit ? "+edit" : "+generate");
  copy.provenance = std::string(op_name(in.op));
  if (in.target) copy.provenance += " " + in.target->text();
  if (in.instruction) copy.provenance += " :: " + *in.instruction;
  ExecOutput out;
  out.image_out = std::move(copy);
  return out;
}

ExecOutput MockCaptioner::execute(const ExecInput& in) {
  if (in.op != OperationKind::Caption) {
    throw Error(ErrorKind::CapabilityMismatch, "mock captioner cannot " + std::string(op_name(in.op)));
  }
  const auto scene = scenes_->ground_for(in.image);
  std::string caption = "image " + std::to_string(in.image.width) + "x" + std::to_string(in.image.height);
  if (scene) {
    std::vector<std::pair<std::string, int>> counts;
    for (const SceneShape& s : scene->shapes) {
      auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& c) { return c.first == s.label.text(); });
      if (it == counts.end()) {
        counts.emplace_back(s.label.text(), 1);
      } else {
        ++it->second;
      }
    }
    caption += counts.empty() ? " with no objects" : " with";
    for (std::size_t i = 0; i < counts.size(); ++i) {
      caption += (i == 0 ? " " : " and ") + std::to_string(counts[i].second) + " " + counts[i].first;
    }
  }
  ExecOutput out;
  out.caption = std::move(caption);
  return out;
}

ExecOutput NativeIntegrator::execute(const ExecInput& in) {
  if (in.op != OperationKind::Integrate) {
    throw Error(ErrorKind::CapabilityMismatch, "integrator cannot " + std::string(op_name(in.op)));
  }
  ExecOutput out;
  out.caption = "integrated";
  return out;
}

}  // namespace visionflow::exec
