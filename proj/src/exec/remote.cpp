#include "visionflow/exec/remote.hpp"

#include "visionflow/core/http.hpp"
#include "visionflow/error.hpp"

namespace visionflow::exec {

ExecOutput remote_execute(const std::string& endpoint, const ExecInput& input, std::chrono::milliseconds deadline) {
  const HttpResult res = http_post_json(endpoint, "/v1/execute", encode_exec_input(input).dump(), deadline);
  if (!res.transport_ok) throw Error(ErrorKind::RemoteUnavailable, endpoint + ": " + res.error);
  if (res.status != 200) throw Error(ErrorKind::RemoteUnavailable, endpoint + ": HTTP " + std::to_string(res.status));
  nlohmann::json body;
  try {
    body = nlohmann::json::parse(res.body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::RemoteMalformed, endpoint + ": " + e.what());
  }
  return decode_exec_output(body);
}

}  // namespace visionflow::exec
