#include "visionflow/engine/integrate.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "visionflow/core/image_io.hpp"
#include "visionflow/core/kernels.hpp"
#include "visionflow/core/palette.hpp"
#include "visionflow/core/serde.hpp"
#include "visionflow/error.hpp"

namespace visionflow::engine {

using nlohmann::ordered_json;

std::string composite_name(int image_index) { return "composite-" + std::to_string(image_index) + ".ppm"; }

void assign_instances(std::vector<NodeResult>& results) {
  std::map<std::string, int> next_id;
  int k = 0;
  for (NodeResult& r : results) {
    for (ImageOutput& io : r.outputs) {
      for (InstanceMask& m : io.output.masks) {
        m.instance_id = ++next_id[m.label.text()];
        if (!m.mask.empty()) m.color = palette_color(k++);
      }
    }
  }
}

RgbImage base_raster(const ImageRef& image, const exec::SceneCatalog& scenes) {
  RgbImage base;
  try {
    if (const auto scene = scenes.ground_for(image)) {
      base = render_scene(*scene);
    } else {
      base = read_pnm(image.uri);
    }
  } catch (const Error& e) {
    throw Error(ErrorKind::CompositingFailure, image.id + ": " + e.detail());
  }
  if (base.width != image.width || base.height != image.height) {
    throw Error(ErrorKind::CompositingFailure, image.id + ": pixel size differs from the image reference");
  }
  return base;
}

namespace {

void outline(RgbImage& img, const BBox& b, Rgb color) {
  const int x0 = std::max(b.x, 0);
  const int y0 = std::max(b.y, 0);
  const int x1 = std::min(b.x + b.w, img.width) - 1;
  const int y1 = std::min(b.y + b.h, img.height) - 1;
  if (x0 > x1 || y0 > y1) return;
  for (int x = x0; x <= x1; ++x) {
    if (b.y >= 0) img.set(x, b.y, color);
    if (b.y + b.h <= img.height) img.set(x, y1, color);
  }
  for (int y = y0; y <= y1; ++y) {
    if (b.x >= 0) img.set(b.x, y, color);
    if (b.x + b.w <= img.width) img.set(x1, y, color);
  }
}

ordered_json& target_entry(ordered_json& targets, const Label& label) {
  ordered_json& t = targets[label.text()];
  if (t.is_null()) t = {{"detections", 0}, {"masks", 0}};
  return t;
}

const ImageOutput* output_for(const NodeResult& r, int image_index) {
  for (const ImageOutput& io : r.outputs) {
    if (io.image_index == image_index) return &io;
  }
  return nullptr;
}

}  // namespace

RgbImage composite(RgbImage base, const std::vector<NodeResult>& results, int image_index) {
  std::set<std::string> masked;
  for (const NodeResult& r : results) {
    if (r.status != NodeStatus::Succeeded) continue;
    const ImageOutput* io = output_for(r, image_index);
    if (!io) continue;
    for (const InstanceMask& m : io->output.masks) {
      if (m.mask.empty()) continue;
      if (m.mask.width() != base.width || m.mask.height() != base.height) {
        throw Error(ErrorKind::CompositingFailure, "mask size differs from the image");
      }
      kernels::blend_mask(base, rle_decode(m.mask), m.color);
      masked.insert(m.label.text());
    }
  }
  int k = 0;
  for (const NodeResult& r : results) {
    if (r.status != NodeStatus::Succeeded) continue;
    const ImageOutput* io = output_for(r, image_index);
    if (!io) continue;
    for (const Detection& d : io->output.detections) {
      if (masked.contains(d.label.text())) continue;
      outline(base, d.box, palette_color(k++));
    }
  }
  return base;
}

Integration integrate(std::vector<NodeResult>& results, const planning::PlanDAG& dag,
                      const exec::SceneCatalog& scenes, const std::string& planner_backend) {
  assign_instances(results);
  Integration out;
  for (int i = 0; i < static_cast<int>(dag.images.size()); ++i) {
    const ImageRef& src = dag.images[static_cast<std::size_t>(i)];
    Composite c;
    c.image_index = i;
    c.raster = composite(base_raster(src, scenes), results, i);
    c.image = ImageRef{composite_name(i), c.raster.width, c.raster.height, ImageSourceKind::Raster,
                       composite_name(i), "composite of " + src.id};
    out.composites.push_back(std::move(c));
  }

  ordered_json targets = ordered_json::object();
  ordered_json nodes = ordered_json::array();
  ordered_json captions = ordered_json::array();
  ordered_json labels = ordered_json::array();
  ordered_json generated = ordered_json::array();
  std::size_t instances = 0;
  bool looked = false;
  for (const NodeResult& r : results) {
    const planning::PlanNode& node = dag.nodes.at(static_cast<std::size_t>(r.node_id));
    const OperationKind op = node.proposal.op;
    looked = looked || op == OperationKind::Locate || op == OperationKind::Segment;
    ordered_json n;
    n["node_id"] = r.node_id;
    n["op"] = std::string(op_name(op));
    n["target"] = node.proposal.target ? ordered_json(node.proposal.target->text()) : ordered_json(nullptr);
    n["model_id"] = r.model_id ? ordered_json(*r.model_id) : ordered_json(nullptr);
    n["status"] = std::string(node_status_name(r.status));
    n["attempts"] = r.attempts.size();
    const auto best = r.best_score();
    n["best_score"] = best ? ordered_json(*best) : ordered_json(nullptr);
    if (!r.detail.empty()) n["detail"] = r.detail;
    nodes.push_back(std::move(n));
    if (r.status != NodeStatus::Succeeded) continue;

    for (const ImageOutput& io : r.outputs) {
      for (const Detection& d : io.output.detections) {
        ++target_entry(targets, d.label)["detections"].get_ref<ordered_json::number_integer_t&>();
        ++instances;
      }
      for (const InstanceMask& m : io.output.masks) {
        if (m.mask.empty()) continue;
        ++target_entry(targets, m.label)["masks"].get_ref<ordered_json::number_integer_t&>();
        ++instances;
      }
      if (op == OperationKind::Integrate) continue;
      if (io.output.caption) captions.push_back(*io.output.caption);
      if (io.output.labels) {
        for (const exec::LabelScore& l : *io.output.labels) {
          labels.push_back({{"image", io.image_index}, {"label", l.label.text()}, {"confidence", l.confidence}});
        }
      }
      if (io.output.image_out) generated.push_back(*io.output.image_out);
    }
  }

  ordered_json& s = out.summary;
  s["planner_backend"] = planner_backend;
  s["images"] = ordered_json::array();
  for (const ImageRef& img : dag.images) s["images"].push_back(img.id);
  s["targets"] = std::move(targets);
  s["nodes"] = std::move(nodes);
  if (!captions.empty()) s["captions"] = std::move(captions);
  if (!labels.empty()) s["labels"] = std::move(labels);
  if (!generated.empty()) s["generated"] = std::move(generated);
  s["artifacts"] = ordered_json::array();
  for (const Composite& c : out.composites) s["artifacts"].push_back(c.image.id);
  ordered_json notes = ordered_json::array();
  if (looked && instances == 0) notes.push_back("no instances found");
  const bool all_ok = std::all_of(results.begin(), results.end(),
                                  [](const NodeResult& r) { return r.status == NodeStatus::Succeeded; });
  if (!all_ok) notes.push_back("some steps did not succeed");
  s["notes"] = std::move(notes);
  return out;
}

}  // namespace visionflow::engine
