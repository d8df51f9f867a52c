#pragma once

// JSON mappings for the core value types. Templated on the json flavour so
// both nlohmann::json and nlohmann::ordered_json (used on the wire, where key
// order is part of the contract) can use them.

#include <json.hpp>

#include "visionflow/core/types.hpp"
#include "visionflow/error.hpp"

namespace visionflow {

ImageSourceKind guess_source_kind(const std::string& uri) noexcept;

template <typename J>
void to_json(J& j, OperationKind op) {
  j = std::string(op_name(op));
}
template <typename J>
void from_json(const J& j, OperationKind& op) {
  op = op_from_name(j.template get<std::string>());
}

template <typename J>
void to_json(J& j, const BBox& b) {
  j = J::object();
  j["x"] = b.x;
  j["y"] = b.y;
  j["w"] = b.w;
  j["h"] = b.h;
}
template <typename J>
void from_json(const J& j, BBox& b) {
  b.x = j.at("x").template get<int>();
  b.y = j.at("y").template get<int>();
  b.w = j.at("w").template get<int>();
  b.h = j.at("h").template get<int>();
}

template <typename J>
void to_json(J& j, const MaskRLE& m) {
  j = J::object();
  j["width"] = m.width();
  j["height"] = m.height();
  j["runs"] = m.runs();
}
template <typename J>
void from_json(const J& j, MaskRLE& m) {
  m = MaskRLE(j.at("width").template get<int>(), j.at("height").template get<int>(),
              j.at("runs").template get<std::vector<std::uint32_t>>());
}

template <typename J>
void to_json(J& j, const Rgb& c) {
  j = J::array({c.r, c.g, c.b});
}
template <typename J>
void from_json(const J& j, Rgb& c) {
  c.r = j.at(0).template get<std::uint8_t>();
  c.g = j.at(1).template get<std::uint8_t>();
  c.b = j.at(2).template get<std::uint8_t>();
}

template <typename J>
void to_json(J& j, const ImageRef& r) {
  j = J::object();
  j["id"] = r.id;
  j["width"] = r.width;
  j["height"] = r.height;
  j["uri"] = r.uri;
  if (!r.provenance.empty()) j["provenance"] = r.provenance;
}
template <typename J>
void from_json(const J& j, ImageRef& r) {
  r.id = j.at("id").template get<std::string>();
  r.width = j.at("width").template get<int>();
  r.height = j.at("height").template get<int>();
  r.uri = j.at("uri").template get<std::string>();
  r.kind = guess_source_kind(r.uri);
  r.provenance = j.value("provenance", std::string{});
}

template <typename J>
void to_json(J& j, const ActionProposal& p) {
  j = J::object();
  j["op"] = std::string(op_name(p.op));
  j["target"] = p.target ? J(p.target->text()) : J(nullptr);
  j["instruction"] = p.instruction ? J(*p.instruction) : J(nullptr);
  j["image_refs"] = p.image_refs;
}
template <typename J>
void from_json(const J& j, ActionProposal& p) {
  p.op = j.at("op").template get<OperationKind>();
  p.target.reset();
  p.instruction.reset();
  if (j.contains("target") && !j.at("target").is_null()) p.target = Label::normalize(j.at("target").template get<std::string>());
  if (j.contains("instruction") && !j.at("instruction").is_null()) {
    p.instruction = j.at("instruction").template get<std::string>();
  }
  p.image_refs = j.value("image_refs", std::vector<int>{});
}

template <typename J>
void to_json(J& j, const ProposalSet& s) {
  j = s.items;
}
template <typename J>
void from_json(const J& j, ProposalSet& s) {
  s.items = j.template get<std::vector<ActionProposal>>();
}

}  // namespace visionflow

// Types holding a Label have no default constructor, so they go through
// adl_serializer specializations that construct the value directly.
namespace nlohmann {

template <>
struct adl_serializer<visionflow::Label> {
  template <typename J>
  static visionflow::Label from_json(const J& j) {
    return visionflow::Label::normalize(j.template get<std::string>());
  }
  template <typename J>
  static void to_json(J& j, const visionflow::Label& l) {
    j = l.text();
  }
};

template <>
struct adl_serializer<visionflow::Detection> {
  template <typename J>
  static visionflow::Detection from_json(const J& j) {
    visionflow::Detection d{j.at("label").template get<visionflow::Label>(),
                            j.at("box").template get<visionflow::BBox>(),
                            j.at("confidence").template get<double>()};
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
      throw visionflow::Error(visionflow::ErrorKind::RemoteMalformed, "detection confidence outside [0,1]");
    }
    return d;
  }
  template <typename J>
  static void to_json(J& j, const visionflow::Detection& d) {
    j = J::object();
    j["label"] = d.label.text();
    j["box"] = d.box;
    j["confidence"] = d.confidence;
  }
};

template <>
struct adl_serializer<visionflow::InstanceMask> {
  template <typename J>
  static visionflow::InstanceMask from_json(const J& j) {
    visionflow::InstanceMask m{j.at("label").template get<visionflow::Label>(),
                               j.at("instance_id").template get<int>(),
                               j.at("rle").template get<visionflow::MaskRLE>(),
                               {}};
    if (j.contains("color")) m.color = j.at("color").template get<visionflow::Rgb>();
    return m;
  }
  template <typename J>
  static void to_json(J& j, const visionflow::InstanceMask& m) {
    j = J::object();
    j["label"] = m.label.text();
    j["instance_id"] = m.instance_id;
    j["rle"] = m.mask;
    j["color"] = m.color;
  }
};

template <>
struct adl_serializer<visionflow::SceneShape> {
  template <typename J>
  static visionflow::SceneShape from_json(const J& j) {
    const auto kind = j.at("kind").template get<std::string>();
    if (kind != "rect" && kind != "ellipse") {
      throw visionflow::Error(visionflow::ErrorKind::InvalidScene, "unknown shape kind '" + kind + "'");
    }
    return {j.at("label").template get<visionflow::Label>(),
            kind == "rect" ? visionflow::ShapeKind::Rect : visionflow::ShapeKind::Ellipse,
            j.at("x").template get<int>(),
            j.at("y").template get<int>(),
            j.at("w").template get<int>(),
            j.at("h").template get<int>()};
  }
  template <typename J>
  static void to_json(J& j, const visionflow::SceneShape& s) {
    j = J::object();
    j["label"] = s.label.text();
    j["kind"] = s.kind == visionflow::ShapeKind::Rect ? "rect" : "ellipse";
    j["x"] = s.x;
    j["y"] = s.y;
    j["w"] = s.w;
    j["h"] = s.h;
  }
};

}  // namespace nlohmann
