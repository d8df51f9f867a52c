#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "visionflow/core/types.hpp"

namespace visionflow::exec {

struct ExecInput {
  OperationKind op = OperationKind::Locate;
  std::optional<Label> target;
  std::optional<std::string> instruction;
  ImageRef image;
  /// Upstream detections; only honoured by models that accept regions.
  /// nullopt means "whole image", an empty list means "nothing to do".
  std::optional<std::vector<BBox>> regions;

  friend bool operator==(const ExecInput&, const ExecInput&) = default;
};

struct LabelScore {
  Label label;
  double confidence = 0.0;
  friend bool operator==(const LabelScore&, const LabelScore&) = default;
};

struct ExecOutput {
  std::vector<Detection> detections;
  std::vector<InstanceMask> masks;
  std::optional<ImageRef> image_out;
  std::optional<std::string> caption;
  std::optional<std::vector<LabelScore>> labels;

  bool has_payload() const noexcept {
    return !detections.empty() || !masks.empty() || image_out || caption || labels;
  }
  friend bool operator==(const ExecOutput&, const ExecOutput&) = default;
};

struct VerifierScoreRecord {
  double score = 0.0;
  std::string method;
  std::string detail;
  friend bool operator==(const VerifierScoreRecord&, const VerifierScoreRecord&) = default;
};

// Executor wire protocol. Key order is fixed so encoded bodies are
// byte-stable.
nlohmann::ordered_json encode_image_wire(const ImageRef& image);
nlohmann::ordered_json encode_exec_input(const ExecInput& in);
ExecInput decode_exec_input(const nlohmann::json& j);
nlohmann::ordered_json encode_exec_output(const ExecOutput& out);
/// Throws Error(RemoteMalformed) when the schema is violated or no payload
/// field is present.
ExecOutput decode_exec_output(const nlohmann::json& j);

nlohmann::ordered_json encode_verify_request(const ImageRef& image, const std::string& text);
/// Throws Error(VerifierUnavailable) if the reply has no numeric score in
/// [0,1].
double decode_verify_response(const nlohmann::json& j);

// Persistence helpers (include mask colours; not part of the wire format).
nlohmann::json exec_output_to_json(const ExecOutput& out);
ExecOutput exec_output_from_json(const nlohmann::json& j);

}  // namespace visionflow::exec
