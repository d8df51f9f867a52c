#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "visionflow/engine/engine.hpp"
#include "visionflow/error.hpp"

namespace visionflow::interface {

struct HttpReply {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// 400 for malformed input, 404 RunNotFound, 409 DuplicateModelId, 422 for
/// requests that cannot be planned or served by any model, 500 otherwise.
int http_status(ErrorKind kind) noexcept;
/// {"error": {"kind": str, "detail": str}}
nlohmann::ordered_json error_body(ErrorKind kind, const std::string& detail);

/// An image is either a path (scene JSON or PPM/PGM) or an explicit
/// {"id", "width", "height", "uri"} object.
using ImageSpec = nlohmann::json;

struct SubmitRequest {
  std::string text;
  std::vector<ImageSpec> images;
  nlohmann::json options;  // null or an object of EngineConfig overrides
};

struct LabelRequest {
  std::string object_name;
  ImageSpec image;
};

/// Throw Error(InvalidRequest) on schema violations.
SubmitRequest decode_submit_request(const nlohmann::json& j);
LabelRequest decode_label_request(const nlohmann::json& j);

nlohmann::ordered_json encode_submit_request(const SubmitRequest& req);
nlohmann::ordered_json encode_label_request(const LabelRequest& req);
/// {"run_id", "planner_backend", "selected", "summary", "artifacts": [url]}
nlohmann::ordered_json encode_submit_response(const engine::RunRecord& rec);
/// {"detections": [...]}
nlohmann::ordered_json encode_label_response(const std::vector<Detection>& detections);

std::string artifact_url(const std::string& run_id, const std::string& name);

/// Resolves an ImageSpec into an image reference. Throws InvalidRequest.
ImageRef resolve_image(const ImageSpec& spec);

/// Routes requests to an engine. handle() is usable without a socket; start()
/// and serve() put it behind an HTTP listener.
class Service {
 public:
  /// Registrations are saved to `registry_path` when one is given.
  explicit Service(engine::Engine& engine, std::optional<std::filesystem::path> registry_path = std::nullopt);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  HttpReply handle(const std::string& method, const std::string& path, const std::string& body);

  /// Listens on a background thread and returns the bound port (an
  /// ephemeral one when `port` is 0). Throws InvalidConfig if binding fails.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  /// Blocks until stop() is called from another thread.
  void serve(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace visionflow::interface
