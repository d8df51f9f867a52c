#include "visionflow/interface/service.hpp"

#include <mutex>
#include <regex>
#include <thread>

#include <httplib.h>

#include "visionflow/core/image_io.hpp"
#include "visionflow/core/serde.hpp"
#include "visionflow/dsl/proposals.hpp"
#include "visionflow/engine/run_store.hpp"

namespace visionflow::interface {

using nlohmann::json;
using nlohmann::ordered_json;

int http_status(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::EmptyLabel:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::InvalidScene:
    case ErrorKind::ImageFormat:
    case ErrorKind::ParseFailed:
    case ErrorKind::EmptyInput:
    case ErrorKind::InvalidDescriptor:
    case ErrorKind::InvalidConfig:
    case ErrorKind::InvalidRequest:
      return 400;
    case ErrorKind::RunNotFound:
      return 404;
    case ErrorKind::DuplicateModelId:
      return 409;
    case ErrorKind::UnplannableRequest:
    case ErrorKind::NoCandidates:
    case ErrorKind::InvalidProposalSet:
    case ErrorKind::NoCapableModel:
    case ErrorKind::CapabilityMismatch:
    case ErrorKind::PlanningFailed:
      return 422;
    default:
      return 500;
  }
}

ordered_json error_body(ErrorKind kind, const std::string& detail) {
  ordered_json inner;
  inner["kind"] = std::string(kind_name(kind));
  inner["detail"] = detail;
  ordered_json j;
  j["error"] = std::move(inner);
  return j;
}

namespace {

template <typename Fn>
auto request_guard(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidRequest, e.what());
  }
}

void check_image_spec(const json& img) {
  if (img.is_string()) {
    if (img.get<std::string>().empty()) throw Error(ErrorKind::InvalidRequest, "image path is empty");
    return;
  }
  if (!img.is_object()) throw Error(ErrorKind::InvalidRequest, "image must be a path or an object");
}

}  // namespace

SubmitRequest decode_submit_request(const json& j) {
  return request_guard([&] {
    if (!j.is_object()) throw Error(ErrorKind::InvalidRequest, "body must be an object");
    SubmitRequest req;
    req.text = j.at("text").get<std::string>();
    if (normalize_text(req.text).empty()) throw Error(ErrorKind::EmptyInput, "text is empty");
    const json& images = j.at("images");
    if (!images.is_array() || images.empty()) throw Error(ErrorKind::InvalidRequest, "images must be a non-empty list");
    for (const json& img : images) {
      check_image_spec(img);
      req.images.push_back(img);
    }
    if (j.contains("options")) req.options = j.at("options");
    return req;
  });
}

LabelRequest decode_label_request(const json& j) {
  return request_guard([&] {
    if (!j.is_object()) throw Error(ErrorKind::InvalidRequest, "body must be an object");
    LabelRequest req;
    req.object_name = j.at("object_name").get<std::string>();
    if (normalize_text(req.object_name).empty()) throw Error(ErrorKind::InvalidRequest, "object_name is empty");
    req.image = j.at("image");
    check_image_spec(req.image);
    return req;
  });
}

ordered_json encode_submit_request(const SubmitRequest& req) {
  ordered_json j;
  j["text"] = req.text;
  j["images"] = ordered_json::array();
  for (const json& img : req.images) j["images"].push_back(ordered_json(img));
  if (!req.options.is_null()) j["options"] = ordered_json(req.options);
  return j;
}

ordered_json encode_label_request(const LabelRequest& req) {
  ordered_json j;
  j["object_name"] = req.object_name;
  j["image"] = ordered_json(req.image);
  return j;
}

std::string artifact_url(const std::string& run_id, const std::string& name) {
  return "/v1/runs/" + run_id + "/artifacts/" + name;
}

ordered_json encode_submit_response(const engine::RunRecord& rec) {
  ordered_json j;
  j["run_id"] = rec.run_id;
  j["planner_backend"] = rec.planner_backend;
  j["selected"] = dsl::serialize_proposals(rec.selected);
  j["summary"] = rec.summary;
  j["artifacts"] = ordered_json::array();
  for (const ImageRef& a : rec.artifacts) j["artifacts"].push_back(artifact_url(rec.run_id, a.id));
  return j;
}

ordered_json encode_label_response(const std::vector<Detection>& detections) {
  ordered_json j;
  j["detections"] = ordered_json::array();
  for (const Detection& d : detections) j["detections"].push_back(d);
  return j;
}

ImageRef resolve_image(const ImageSpec& spec) {
  try {
    if (spec.is_string()) return probe_image(spec.get<std::string>());
    ImageRef ref = spec.get<ImageRef>();
    if (ref.width < 1 || ref.height < 1) throw Error(ErrorKind::InvalidRequest, "image dimensions must be positive");
    return ref;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidRequest, e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidRequest) throw;
    throw Error(ErrorKind::InvalidRequest, e.detail());
  }
}

struct Service::Impl {
  engine::Engine& engine;
  std::optional<std::filesystem::path> registry_path;
  std::mutex registry_mu;
  httplib::Server server;
  std::thread thread;

  Impl(engine::Engine& e, std::optional<std::filesystem::path> p) : engine(e), registry_path(std::move(p)) {
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
      const HttpReply reply = route(req.method, req.path, req.body);
      res.status = reply.status;
      res.set_content(reply.body, reply.content_type);
    };
    server.Get(".*", forward);
    server.Post(".*", forward);
  }

  static HttpReply json_reply(int status, const ordered_json& body) { return {status, "application/json", body.dump()}; }

  HttpReply route(const std::string& method, const std::string& path, const std::string& body) {
    try {
      return dispatch(method, path, body);
    } catch (const Error& e) {
      return json_reply(http_status(e.kind()), error_body(e.kind(), e.detail()));
    } catch (const json::exception& e) {
      return json_reply(400, error_body(ErrorKind::InvalidRequest, e.what()));
    } catch (const std::exception& e) {
      return json_reply(500, error_body(ErrorKind::StorageFailure, e.what()));
    }
  }

  static json parse_body(const std::string& body) {
    try {
      return json::parse(body);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::InvalidRequest, std::string("body is not JSON: ") + e.what());
    }
  }

  HttpReply dispatch(const std::string& method, const std::string& path, const std::string& body) {
    static const std::regex run_re("^/v1/runs/([^/]+)$");
    static const std::regex artifact_re("^/v1/runs/([^/]+)/artifacts/([^/]+)$");
    std::smatch m;
    if (method == "POST" && path == "/v1/requests") {
      const SubmitRequest req = decode_submit_request(parse_body(body));
      std::vector<ImageRef> images;
      for (const ImageSpec& s : req.images) images.push_back(resolve_image(s));
      const engine::EngineConfig cfg = engine::apply_overrides(engine.config(), req.options);
      const engine::RunOutcome out = engine.run_request(req.text, images, cfg);
      return json_reply(200, encode_submit_response(out.record));
    }
    if (method == "POST" && path == "/v1/ops/label") {
      const LabelRequest req = decode_label_request(parse_body(body));
      return json_reply(200, encode_label_response(engine.label_objects(req.object_name, resolve_image(req.image))));
    }
    if (method == "GET" && path == "/v1/models") {
      return json_reply(200, ordered_json(registry::registry_to_json(engine.registry())));
    }
    if (method == "POST" && path == "/v1/models") {
      registry::ModelDescriptor desc;
      try {
        desc = registry::descriptor_from_json(parse_body(body));
      } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidDescriptor, e.what());
      }
      std::lock_guard lock(registry_mu);
      engine.registry().register_model(desc);
      if (registry_path) registry::save_registry(engine.registry(), *registry_path);
      return json_reply(201, ordered_json(registry::descriptor_to_json(desc)));
    }
    if (method == "GET" && std::regex_match(path, m, run_re)) {
      return json_reply(200, engine::record_to_json(engine.store().load(m[1].str())));
    }
    if (method == "GET" && std::regex_match(path, m, artifact_re)) {
      const std::string name = m[2].str();
      const bool ppm = name.size() > 4 && name.ends_with(".ppm");
      return {200, ppm ? "image/x-portable-pixmap" : "application/json",
              engine.store().load_artifact(m[1].str(), name)};
    }
    return json_reply(404, error_body(ErrorKind::InvalidRequest, "no route for " + method + " " + path));
  }
};

Service::Service(engine::Engine& engine, std::optional<std::filesystem::path> registry_path)
    : impl_(std::make_unique<Impl>(engine, std::move(registry_path))) {}

Service::~Service() { stop(); }

HttpReply Service::handle(const std::string& method, const std::string& path, const std::string& body) {
  return impl_->route(method, path, body);
}

int Service::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) throw Error(ErrorKind::InvalidConfig, "cannot listen on " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void Service::serve(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) {
    throw Error(ErrorKind::InvalidConfig, "cannot listen on " + host + ":" + std::to_string(port));
  }
}

void Service::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace visionflow::interface
