#include "visionflow/prompting/backend.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "visionflow/core/http.hpp"
#include "visionflow/dsl/proposals.hpp"
#include "visionflow/error.hpp"
#include "visionflow/prompting/prompt.hpp"
#include "visionflow/prompting/rule_planner.hpp"

namespace visionflow::prompting {

using nlohmann::json;

std::string_view backend_kind_name(BackendKind kind) noexcept {
  switch (kind) {
    case BackendKind::RuleBased: return "rule-based";
    case BackendKind::Remote: return "remote";
    case BackendKind::Scripted: return "scripted";
  }
  return "";
}

void validate_descriptor(const PlannerBackendDescriptor& desc) {
  if (desc.id.empty()) throw Error(ErrorKind::InvalidConfig, "backend id must not be empty");
  if (desc.n_candidates < 1) throw Error(ErrorKind::InvalidConfig, "n_candidates must be at least 1");
  if ((desc.kind == BackendKind::Remote) != desc.endpoint.has_value()) {
    throw Error(ErrorKind::InvalidConfig, "endpoint must be set exactly for remote backends");
  }
}

RuleBasedBackend::RuleBasedBackend(PlannerBackendDescriptor desc) : desc_(std::move(desc)) {
  desc_.kind = BackendKind::RuleBased;
  validate_descriptor(desc_);
}

std::vector<std::string> RuleBasedBackend::generate(const std::string& prompt) {
  const std::string input = extract_user_input(prompt);
  try {
    return {dsl::serialize_proposals(rule_based_plan(input))};
  } catch (const Error& e) {
    throw Error(ErrorKind::BackendMalformed, e.detail());
  }
}

ScriptedBackend::ScriptedBackend(PlannerBackendDescriptor desc, std::vector<std::vector<std::string>> replies)
    : desc_(std::move(desc)), replies_(replies.begin(), replies.end()) {
  desc_.kind = BackendKind::Scripted;
  validate_descriptor(desc_);
}

std::unique_ptr<ScriptedBackend> ScriptedBackend::from_file(PlannerBackendDescriptor desc) {
  if (!desc.script_path) throw Error(ErrorKind::InvalidConfig, "scripted backend needs script_path");
  std::ifstream in(*desc.script_path);
  if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open " + *desc.script_path);
  try {
    const json j = json::parse(in);
    auto replies = j.at("replies").get<std::vector<std::vector<std::string>>>();
    return std::make_unique<ScriptedBackend>(std::move(desc), std::move(replies));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("bad script file: ") + e.what());
  }
}

std::vector<std::string> ScriptedBackend::generate(const std::string& /*prompt*/) {
  std::lock_guard lock(mu_);
  if (replies_.empty()) throw Error(ErrorKind::BackendUnavailable, "scripted backend exhausted");
  auto reply = std::move(replies_.front());
  replies_.pop_front();
  return reply;
}

std::size_t ScriptedBackend::remaining() const {
  std::lock_guard lock(mu_);
  return replies_.size();
}

RemoteBackend::RemoteBackend(PlannerBackendDescriptor desc) : desc_(std::move(desc)) {
  desc_.kind = BackendKind::Remote;
  validate_descriptor(desc_);
}

std::vector<std::string> RemoteBackend::generate(const std::string& prompt) {
  const json body = {{"prompt", prompt}, {"n", desc_.n_candidates}};
  const HttpResult res = http_post_json(*desc_.endpoint, "/v1/complete", body.dump(), desc_.deadline);
  if (!res.transport_ok) throw Error(ErrorKind::BackendUnavailable, desc_.id + ": " + res.error);
  if (res.status != 200) {
    throw Error(ErrorKind::BackendUnavailable, desc_.id + ": HTTP " + std::to_string(res.status));
  }
  try {
    const json j = json::parse(res.body);
    return j.at("candidates").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BackendMalformed, desc_.id + ": " + e.what());
  }
}

std::unique_ptr<PlannerBackend> make_backend(const PlannerBackendDescriptor& desc) {
  switch (desc.kind) {
    case BackendKind::RuleBased: return std::make_unique<RuleBasedBackend>(desc);
    case BackendKind::Remote: return std::make_unique<RemoteBackend>(desc);
    case BackendKind::Scripted: return ScriptedBackend::from_file(desc);
  }
  throw Error(ErrorKind::InvalidConfig, "unknown backend kind");
}

std::vector<std::string> generate_candidates(PlannerBackend& backend, const std::string& prompt) {
  std::vector<std::string> out = backend.generate(prompt);
  const auto& desc = backend.descriptor();
  if (out.empty()) throw Error(ErrorKind::BackendMalformed, desc.id + ": no candidates");
  for (const std::string& c : out) {
    if (collapse_whitespace(c).empty()) throw Error(ErrorKind::BackendMalformed, desc.id + ": blank candidate");
  }
  if (out.size() > static_cast<std::size_t>(desc.n_candidates)) out.resize(static_cast<std::size_t>(desc.n_candidates));
  return out;
}

}  // namespace visionflow::prompting
