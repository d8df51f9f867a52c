#include "visionflow/engine/config.hpp"

#include <algorithm>
#include <fstream>

#include "visionflow/core/serde.hpp"
#include "visionflow/error.hpp"

namespace visionflow::engine {

using nlohmann::json;

void validate_config(const EngineConfig& cfg) {
  if (!(cfg.verify_threshold >= 0.0 && cfg.verify_threshold <= 1.0)) {
    throw Error(ErrorKind::InvalidConfig, "verify_threshold must be in [0,1]");
  }
  if (cfg.retry_budget < 0) throw Error(ErrorKind::InvalidConfig, "retry_budget must be >= 0");
  if (cfg.max_parallel < 1) throw Error(ErrorKind::InvalidConfig, "max_parallel must be >= 1");
  if (!(cfg.lambda > 0.0)) throw Error(ErrorKind::InvalidConfig, "lambda must be > 0");
  if (cfg.run_dir.empty()) throw Error(ErrorKind::InvalidConfig, "run_dir must not be empty");
}

namespace {

prompting::BackendKind backend_kind(const std::string& s) {
  if (s == "rule-based") return prompting::BackendKind::RuleBased;
  if (s == "remote") return prompting::BackendKind::Remote;
  if (s == "scripted") return prompting::BackendKind::Scripted;
  throw Error(ErrorKind::InvalidConfig, "unknown backend kind '" + s + "'");
}

EngineConfig apply_engine_fields(EngineConfig cfg, const json& j) {
  if (j.contains("verify_threshold")) cfg.verify_threshold = j.at("verify_threshold").get<double>();
  if (j.contains("retry_budget")) cfg.retry_budget = j.at("retry_budget").get<int>();
  if (j.contains("max_parallel")) cfg.max_parallel = j.at("max_parallel").get<int>();
  if (j.contains("lambda")) cfg.lambda = j.at("lambda").get<double>();
  if (j.contains("run_dir")) cfg.run_dir = j.at("run_dir").get<std::string>();
  if (j.contains("verifier_endpoint") && !j.at("verifier_endpoint").is_null()) {
    cfg.verifier_endpoint = j.at("verifier_endpoint").get<std::string>();
  }
  if (j.contains("executor_deadline_ms")) {
    cfg.executor_deadline = std::chrono::milliseconds(j.at("executor_deadline_ms").get<long long>());
  }
  return cfg;
}

}  // namespace

AppConfig app_config_from_json(const json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorKind::InvalidConfig, "config must be a JSON object");
    AppConfig cfg;
    cfg.engine = apply_engine_fields(cfg.engine, j);
    validate_config(cfg.engine);
    if (j.contains("registry") && !j.at("registry").is_null()) cfg.registry_path = j.at("registry").get<std::string>();
    if (j.contains("prompt")) {
      const json& p = j.at("prompt");
      if (p.contains("op_candidates")) {
        cfg.prompt.op_candidates.clear();
        for (const auto& name : p.at("op_candidates")) cfg.prompt.op_candidates.push_back(name.get<OperationKind>());
      }
      if (p.contains("examples")) {
        cfg.prompt.examples.clear();
        for (const auto& ex : p.at("examples")) {
          cfg.prompt.examples.push_back({ex.at("input").get<std::string>(), ex.at("output").get<std::string>()});
        }
      }
      if (p.contains("max_examples")) cfg.prompt.max_examples = p.at("max_examples").get<int>();
      prompting::validate_prompt_config(cfg.prompt);
    }
    if (j.contains("backends")) {
      for (const auto& b : j.at("backends")) {
        prompting::PlannerBackendDescriptor d;
        d.id = b.at("id").get<std::string>();
        d.kind = backend_kind(b.value("kind", std::string("rule-based")));
        if (b.contains("endpoint") && !b.at("endpoint").is_null()) d.endpoint = b.at("endpoint").get<std::string>();
        d.n_candidates = b.value("n_candidates", 1);
        d.deadline = std::chrono::milliseconds(b.value("deadline_ms", 30000LL));
        if (b.contains("script") && !b.at("script").is_null()) d.script_path = b.at("script").get<std::string>();
        prompting::validate_descriptor(d);
        cfg.backends.push_back(std::move(d));
      }
    }
    return cfg;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, e.what());
  }
}

AppConfig load_app_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open config " + path.string());
  try {
    return app_config_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, e.what());
  }
}

EngineConfig apply_overrides(EngineConfig base, const json& overrides) {
  if (overrides.is_null()) return base;
  if (!overrides.is_object()) throw Error(ErrorKind::InvalidRequest, "options must be an object");
  static const char* kAllowed[] = {"verify_threshold", "retry_budget", "max_parallel", "lambda"};
  for (const auto& [key, value] : overrides.items()) {
    if (std::find(std::begin(kAllowed), std::end(kAllowed), key) == std::end(kAllowed)) {
      throw Error(ErrorKind::InvalidRequest, "unknown option '" + key + "'");
    }
  }
  try {
    EngineConfig cfg = apply_engine_fields(base, overrides);
    validate_config(cfg);
    return cfg;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidRequest, e.what());
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidRequest, e.detail());
  }
}

}  // namespace visionflow::engine
