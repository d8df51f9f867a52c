#include "visionflow/exec/verifier.hpp"

#include <vector>

#include "visionflow/core/http.hpp"
#include "visionflow/core/kernels.hpp"
#include "visionflow/core/raster.hpp"
#include "visionflow/error.hpp"

namespace visionflow::exec {

namespace {

double payload_score(const ExecOutput& out, OperationKind op) {
  switch (op) {
    case OperationKind::Generate:
    case OperationKind::Edit: return out.image_out ? 1.0 : 0.0;
    case OperationKind::Caption: return out.caption && !out.caption->empty() ? 1.0 : 0.0;
    case OperationKind::Classify: return out.labels ? 1.0 : 0.0;
    default: return 1.0;
  }
}

}  // namespace

std::string verification_text(const ExecInput& input) {
  std::string text(op_name(input.op));
  if (input.target) text += " " + input.target->text();
  if (input.instruction) text += " :: " + *input.instruction;
  return text;
}

VerifierScoreRecord MockVerifier::verify(const ExecOutput& output, const ExecInput& input, const SceneSpec* ground) {
  if (!ground) throw Error(ErrorKind::VerifierUnavailable, "mock verifier needs ground truth");
  if (input.op != OperationKind::Locate && input.op != OperationKind::Segment) {
    const double s = payload_score(output, input.op);
    return {s, "payload", s == 1.0 ? "payload present" : "payload missing"};
  }
  if (!input.target) throw Error(ErrorKind::VerifierUnavailable, "region verification needs a target");

  Bitmap predicted(ground->width, ground->height);
  if (input.op == OperationKind::Locate) {
    std::vector<kernels::ShapeFill> boxes;
    for (const Detection& d : output.detections) {
      if (!d.box.fits(ground->width, ground->height)) {
        throw Error(ErrorKind::DimensionMismatch, "detection box outside the image");
      }
      boxes.push_back({ShapeKind::Rect, d.box});
    }
    kernels::fill_shapes(predicted, boxes);
  } else {
    for (const InstanceMask& m : output.masks) {
      const Bitmap bm = rle_decode(m.mask);
      if (bm.width != predicted.width || bm.height != predicted.height) {
        throw Error(ErrorKind::DimensionMismatch, "mask dimensions differ from the image");
      }
      for (std::size_t i = 0; i < bm.bits.size(); ++i) predicted.bits[i] |= bm.bits[i];
    }
  }
  const Bitmap truth = rle_decode(rasterize_scene(*ground, *input.target));
  const kernels::OverlapCounts c = kernels::overlap_counts(predicted, truth);
  const double score = c.union_ == 0 ? 1.0 : static_cast<double>(c.intersection) / static_cast<double>(c.union_);
  return {score, "jaccard",
          "intersection=" + std::to_string(c.intersection) + " union=" + std::to_string(c.union_)};
}

VerifierScoreRecord RemoteVerifier::verify(const ExecOutput& output, const ExecInput& input, const SceneSpec*) {
  const ImageRef& image = output.image_out ? *output.image_out : input.image;
  const std::string body = encode_verify_request(image, verification_text(input)).dump();
  const HttpResult res = http_post_json(endpoint_, "/v1/verify", body, deadline_);
  if (!res.transport_ok) throw Error(ErrorKind::VerifierUnavailable, endpoint_ + ": " + res.error);
  if (res.status != 200) throw Error(ErrorKind::VerifierUnavailable, endpoint_ + ": HTTP " + std::to_string(res.status));
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(res.body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::VerifierUnavailable, e.what());
  }
  return {decode_verify_response(j), "remote", endpoint_};
}

DefaultVerifier::DefaultVerifier(std::optional<std::string> remote_endpoint, std::chrono::milliseconds deadline) {
  if (remote_endpoint) remote_.emplace(*remote_endpoint, deadline);
}

VerifierScoreRecord DefaultVerifier::verify(const ExecOutput& output, const ExecInput& input, const SceneSpec* ground) {
  if (input.op == OperationKind::Integrate) return {1.0, "native", "integration is not verified"};
  if (ground) return mock_.verify(output, input, ground);
  if (remote_) return remote_->verify(output, input, ground);
  const double s = payload_score(output, input.op);
  return {s, "payload", "no ground truth or verifier endpoint"};
}

}  // namespace visionflow::exec
