#include "visionflow/registry/registry.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>

#include "visionflow/core/serde.hpp"
#include "visionflow/error.hpp"

namespace visionflow::registry {

using nlohmann::json;

bool ModelDescriptor::is_remote() const {
  return endpoint && (endpoint->rfind("http://", 0) == 0 || endpoint->rfind("https://", 0) == 0);
}

void validate_descriptor(const ModelDescriptor& desc) {
  if (desc.id.empty()) throw Error(ErrorKind::InvalidDescriptor, "model id must not be empty");
  if (desc.capabilities.empty()) throw Error(ErrorKind::InvalidDescriptor, desc.id + ": capabilities must not be empty");
  if (!(desc.quality >= 0.0 && desc.quality <= 1.0)) {
    throw Error(ErrorKind::InvalidDescriptor, desc.id + ": quality must be in [0,1]");
  }
  if (!(desc.cost >= 0.0)) throw Error(ErrorKind::InvalidDescriptor, desc.id + ": cost must be non-negative");
}

bool policy_less(const ModelDescriptor& a, const ModelDescriptor& b) {
  if (a.quality != b.quality) return a.quality > b.quality;
  if (a.cost != b.cost) return a.cost < b.cost;
  return a.id < b.id;
}

Registry::Registry(const Registry& other) {
  std::shared_lock lock(other.mu_);
  models_ = other.models_;
}

Registry& Registry::operator=(const Registry& other) {
  if (this == &other) return *this;
  std::vector<ModelDescriptor> copy;
  {
    std::shared_lock lock(other.mu_);
    copy = other.models_;
  }
  std::unique_lock lock(mu_);
  models_ = std::move(copy);
  return *this;
}

void Registry::register_model(ModelDescriptor desc) {
  validate_descriptor(desc);
  std::unique_lock lock(mu_);
  const bool dup = std::any_of(models_.begin(), models_.end(), [&](const ModelDescriptor& m) { return m.id == desc.id; });
  if (dup) throw Error(ErrorKind::DuplicateModelId, desc.id);
  models_.push_back(std::move(desc));
}

std::vector<ModelDescriptor> Registry::list() const {
  std::shared_lock lock(mu_);
  auto out = models_;
  std::sort(out.begin(), out.end(), [](const ModelDescriptor& a, const ModelDescriptor& b) { return a.id < b.id; });
  return out;
}

std::optional<ModelDescriptor> Registry::find(const std::string& id) const {
  std::shared_lock lock(mu_);
  for (const ModelDescriptor& m : models_) {
    if (m.id == id) return m;
  }
  return std::nullopt;
}

std::size_t Registry::size() const {
  std::shared_lock lock(mu_);
  return models_.size();
}

ModelDescriptor Registry::select_model(OperationKind op, const std::set<std::string>& exclude) const {
  std::shared_lock lock(mu_);
  const ModelDescriptor* best = nullptr;
  for (const ModelDescriptor& m : models_) {
    if (!m.can(op) || exclude.contains(m.id)) continue;
    if (!best || policy_less(m, *best)) best = &m;
  }
  if (!best) throw Error(ErrorKind::NoCapableModel, "no model supports " + std::string(op_name(op)));
  return *best;
}

std::vector<ModelDescriptor> Registry::fallback_chain(OperationKind op) const {
  std::vector<ModelDescriptor> out;
  {
    std::shared_lock lock(mu_);
    std::copy_if(models_.begin(), models_.end(), std::back_inserter(out),
                 [op](const ModelDescriptor& m) { return m.can(op); });
  }
  if (out.empty()) throw Error(ErrorKind::NoCapableModel, "no model supports " + std::string(op_name(op)));
  std::sort(out.begin(), out.end(), policy_less);
  return out;
}

Registry default_registry() {
  Registry reg;
  reg.register_model({"mock-detector", {OperationKind::Locate, OperationKind::Classify}, 0.8, 0.1, false,
                      ConcurrencyClass::Concurrent, "mock-detector"});
  reg.register_model({"mock-segmenter", {OperationKind::Segment}, 0.9, 0.2, true, ConcurrencyClass::Concurrent,
                      "mock-segmenter"});
  reg.register_model({"mock-generator", {OperationKind::Generate, OperationKind::Edit}, 0.7, 0.5, false,
                      ConcurrencyClass::Serial, "mock-generator"});
  reg.register_model({"mock-captioner", {OperationKind::Caption}, 0.6, 0.1, false, ConcurrencyClass::Concurrent,
                      "mock-captioner"});
  reg.register_model({"engine-native", {OperationKind::Integrate}, 1.0, 0.0, false, ConcurrencyClass::Concurrent,
                      "engine-native"});
  return reg;
}

json descriptor_to_json(const ModelDescriptor& desc) {
  json caps = json::array();
  for (OperationKind op : kAllOperations) {
    if (desc.can(op)) caps.push_back(std::string(op_name(op)));
  }
  return {{"id", desc.id},
          {"capabilities", caps},
          {"quality", desc.quality},
          {"cost", desc.cost},
          {"accepts_regions", desc.accepts_regions},
          {"concurrency_class", desc.concurrency_class == ConcurrencyClass::Serial ? "serial" : "concurrent"},
          {"endpoint", desc.endpoint ? json(*desc.endpoint) : json(nullptr)}};
}

ModelDescriptor descriptor_from_json(const json& j) {
  try {
    ModelDescriptor d;
    d.id = j.at("id").get<std::string>();
    for (const auto& c : j.at("capabilities")) d.capabilities.insert(op_from_name(c.get<std::string>()));
    d.quality = j.value("quality", 0.0);
    d.cost = j.value("cost", 0.0);
    d.accepts_regions = j.value("accepts_regions", false);
    const std::string cc = j.value("concurrency_class", std::string("concurrent"));
    if (cc != "concurrent" && cc != "serial") throw Error(ErrorKind::InvalidDescriptor, "bad concurrency_class");
    d.concurrency_class = cc == "serial" ? ConcurrencyClass::Serial : ConcurrencyClass::Concurrent;
    if (j.contains("endpoint") && !j.at("endpoint").is_null()) d.endpoint = j.at("endpoint").get<std::string>();
    validate_descriptor(d);
    return d;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidDescriptor, e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidDescriptor) throw;
    throw Error(ErrorKind::InvalidDescriptor, e.detail());
  }
}

json registry_to_json(const Registry& reg) {
  json models = json::array();
  for (const ModelDescriptor& m : reg.list()) models.push_back(descriptor_to_json(m));
  return {{"models", models}};
}

Registry registry_from_json(const json& j) {
  if (!j.is_object() || !j.contains("models") || !j.at("models").is_array()) {
    throw Error(ErrorKind::InvalidDescriptor, "registry must be {\"models\": [...]}");
  }
  Registry reg;
  for (const json& m : j.at("models")) reg.register_model(descriptor_from_json(m));
  return reg;
}

Registry load_registry(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open registry " + path.string());
  try {
    return registry_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidDescriptor, e.what());
  }
}

void save_registry(const Registry& reg, const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << registry_to_json(reg).dump(2) << '\n';
    if (!out) throw Error(ErrorKind::StorageFailure, "cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::StorageFailure, "cannot replace " + path.string() + ": " + ec.message());
}

}  // namespace visionflow::registry
