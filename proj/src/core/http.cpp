#include "visionflow/core/http.hpp"

#include <httplib.h>

namespace visionflow {

namespace {

struct SplitUrl {
  std::string origin;
  std::string prefix;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const std::size_t host_begin = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto path_begin = url.find('/', host_begin);
  if (path_begin == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path_begin);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path_begin), prefix};
}

}  // namespace

HttpResult http_post_json(const std::string& base_url, const std::string& path, const std::string& body,
                          std::chrono::milliseconds deadline) {
  HttpResult result;
  const SplitUrl url = split_url(base_url);
  httplib::Client client(url.origin);
  if (!client.is_valid()) {
    result.error = "invalid endpoint '" + base_url + "'";
    return result;
  }
  const auto secs = static_cast<time_t>(deadline.count() / 1000);
  const auto usecs = static_cast<time_t>((deadline.count() % 1000) * 1000);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  auto res = client.Post(url.prefix + path, body, "application/json");
  if (!res) {
    result.error = httplib::to_string(res.error());
    return result;
  }
  result.transport_ok = true;
  result.status = res->status;
  result.body = res->body;
  return result;
}

}  // namespace visionflow
