#pragma once

#include <chrono>
#include <string>

#include "visionflow/exec/executor.hpp"

namespace visionflow::exec {

/// POST {endpoint}/v1/execute. Transport failures, timeouts and non-200
/// replies raise RemoteUnavailable; schema violations RemoteMalformed.
ExecOutput remote_execute(const std::string& endpoint, const ExecInput& input,
                          std::chrono::milliseconds deadline = std::chrono::seconds(120));

class RemoteExecutor final : public Executor {
 public:
  RemoteExecutor(std::string endpoint, std::chrono::milliseconds deadline)
      : endpoint_(std::move(endpoint)), deadline_(deadline) {}
  ExecOutput execute(const ExecInput& input) override { return remote_execute(endpoint_, input, deadline_); }

 private:
  std::string endpoint_;
  std::chrono::milliseconds deadline_;
};

}  // namespace visionflow::exec
