#include "visionflow/exec/types.hpp"

#include "visionflow/core/serde.hpp"
#include "visionflow/error.hpp"

namespace visionflow::exec {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json encode_box(const BBox& b) {
  ordered_json j;
  j["x"] = b.x;
  j["y"] = b.y;
  j["w"] = b.w;
  j["h"] = b.h;
  return j;
}

ordered_json encode_detection(const Detection& d) {
  ordered_json j;
  j["label"] = d.label.text();
  j["box"] = encode_box(d.box);
  j["confidence"] = d.confidence;
  return j;
}

ordered_json encode_mask(const InstanceMask& m) {
  ordered_json rle;
  rle["width"] = m.mask.width();
  rle["height"] = m.mask.height();
  rle["runs"] = m.mask.runs();
  ordered_json j;
  j["label"] = m.label.text();
  j["instance_id"] = m.instance_id;
  j["rle"] = std::move(rle);
  return j;
}

template <typename Fn>
auto malformed_guard(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::RemoteMalformed, e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::RemoteMalformed) throw;
    throw Error(ErrorKind::RemoteMalformed, e.detail());
  }
}

bool present(const json& j, const char* key) { return j.contains(key) && !j.at(key).is_null(); }

}  // namespace

ordered_json encode_image_wire(const ImageRef& image) {
  ordered_json j;
  j["id"] = image.id;
  j["width"] = image.width;
  j["height"] = image.height;
  j["uri"] = image.uri;
  return j;
}

ordered_json encode_exec_input(const ExecInput& in) {
  ordered_json j;
  j["op"] = std::string(op_name(in.op));
  j["target"] = in.target ? ordered_json(in.target->text()) : ordered_json(nullptr);
  j["instruction"] = in.instruction ? ordered_json(*in.instruction) : ordered_json(nullptr);
  j["image"] = encode_image_wire(in.image);
  if (in.regions) {
    ordered_json regions = ordered_json::array();
    for (const BBox& b : *in.regions) regions.push_back(encode_box(b));
    j["regions"] = std::move(regions);
  } else {
    j["regions"] = nullptr;
  }
  return j;
}

ExecInput decode_exec_input(const json& j) {
  try {
    ExecInput in;
    in.op = op_from_name(j.at("op").get<std::string>());
    if (present(j, "target")) in.target = Label::normalize(j.at("target").get<std::string>());
    if (present(j, "instruction")) in.instruction = j.at("instruction").get<std::string>();
    in.image = j.at("image").get<ImageRef>();
    if (present(j, "regions")) in.regions = j.at("regions").get<std::vector<BBox>>();
    return in;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidRequest, e.what());
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidRequest, e.detail());
  }
}

ordered_json encode_exec_output(const ExecOutput& out) {
  ordered_json j;
  j["detections"] = ordered_json::array();
  for (const Detection& d : out.detections) j["detections"].push_back(encode_detection(d));
  j["masks"] = ordered_json::array();
  for (const InstanceMask& m : out.masks) j["masks"].push_back(encode_mask(m));
  j["image_out"] = out.image_out ? encode_image_wire(*out.image_out) : ordered_json(nullptr);
  j["caption"] = out.caption ? ordered_json(*out.caption) : ordered_json(nullptr);
  if (out.labels) {
    ordered_json labels = ordered_json::array();
    for (const LabelScore& l : *out.labels) labels.push_back(ordered_json::array({l.label.text(), l.confidence}));
    j["labels"] = std::move(labels);
  } else {
    j["labels"] = nullptr;
  }
  return j;
}

ExecOutput decode_exec_output(const json& j) {
  return malformed_guard([&] {
    if (!j.is_object()) throw Error(ErrorKind::RemoteMalformed, "response is not an object");
    const bool any = present(j, "detections") || present(j, "masks") || present(j, "image_out") ||
                     present(j, "caption") || present(j, "labels");
    if (!any) throw Error(ErrorKind::RemoteMalformed, "response carries no payload field");
    ExecOutput out;
    if (present(j, "detections")) out.detections = j.at("detections").get<std::vector<Detection>>();
    if (present(j, "masks")) out.masks = j.at("masks").get<std::vector<InstanceMask>>();
    if (present(j, "image_out")) out.image_out = j.at("image_out").get<ImageRef>();
    if (present(j, "caption")) out.caption = j.at("caption").get<std::string>();
    if (present(j, "labels")) {
      std::vector<LabelScore> labels;
      for (const json& pair : j.at("labels")) {
        if (!pair.is_array() || pair.size() != 2) throw Error(ErrorKind::RemoteMalformed, "labels entry must be [str, num]");
        labels.push_back({Label::normalize(pair.at(0).get<std::string>()), pair.at(1).get<double>()});
      }
      out.labels = std::move(labels);
    }
    return out;
  });
}

ordered_json encode_verify_request(const ImageRef& image, const std::string& text) {
  ordered_json j;
  j["image"] = encode_image_wire(image);
  j["text"] = text;
  return j;
}

double decode_verify_response(const json& j) {
  if (!j.is_object() || !j.contains("score") || !j.at("score").is_number()) {
    throw Error(ErrorKind::VerifierUnavailable, "verifier reply has no numeric score");
  }
  const double s = j.at("score").get<double>();
  if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorKind::VerifierUnavailable, "verifier score outside [0,1]");
  return s;
}

json exec_output_to_json(const ExecOutput& out) {
  json j;
  j["detections"] = out.detections;
  j["masks"] = out.masks;
  j["image_out"] = out.image_out ? json(*out.image_out) : json(nullptr);
  j["caption"] = out.caption ? json(*out.caption) : json(nullptr);
  if (out.labels) {
    json labels = json::array();
    for (const LabelScore& l : *out.labels) labels.push_back(json::array({l.label.text(), l.confidence}));
    j["labels"] = std::move(labels);
  } else {
    j["labels"] = nullptr;
  }
  return j;
}

ExecOutput exec_output_from_json(const json& j) {
  ExecOutput out;
  out.detections = j.at("detections").get<std::vector<Detection>>();
  out.masks = j.at("masks").get<std::vector<InstanceMask>>();
  if (present(j, "image_out")) out.image_out = j.at("image_out").get<ImageRef>();
  if (present(j, "caption")) out.caption = j.at("caption").get<std::string>();
  if (present(j, "labels")) {
    std::vector<LabelScore> labels;
    for (const json& pair : j.at("labels")) {
      labels.push_back({Label::normalize(pair.at(0).get<std::string>()), pair.at(1).get<double>()});
    }
    out.labels = std::move(labels);
  }
  return out;
}

}  // namespace visionflow::exec
