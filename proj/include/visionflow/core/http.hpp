#pragma once

#include <chrono>
#include <string>

namespace visionflow {

struct HttpResult {
  bool transport_ok = false;
  int status = 0;
  std::string body;
  std::string error;
};

/// Synchronous JSON POST to `base_url` + `path`. `base_url` is
/// "http://host[:port][/prefix]". The deadline bounds connect, read and
/// write separately. Transport failures are reported in the result rather
/// than thrown so each caller can map them onto its own error vocabulary.
HttpResult http_post_json(const std::string& base_url, const std::string& path, const std::string& body,
                          std::chrono::milliseconds deadline);

}  // namespace visionflow
