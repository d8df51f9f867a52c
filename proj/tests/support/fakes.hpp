#pragma once

#include <atomic>
#include <chrono>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "visionflow/engine/scheduler.hpp"
#include "visionflow/exec/executor.hpp"
#include "visionflow/exec/verifier.hpp"

namespace vf_test {

using namespace visionflow;

/// Returns a canned output for every call; optionally fails the first N.
class ScriptedExecutor final : public exec::Executor {
 public:
  explicit ScriptedExecutor(exec::ExecOutput output = {}, int failures = 0)
      : output_(std::move(output)), failures_(failures) {}
  exec::ExecOutput execute(const exec::ExecInput& input) override;
  int calls() const { return calls_.load(); }
  std::vector<exec::ExecInput> inputs() const;

 private:
  exec::ExecOutput output_;
  int failures_;
  std::atomic<int> calls_{0};
  mutable std::mutex mu_;
  std::vector<exec::ExecInput> inputs_;
};

/// Hands out scores from a list, repeating the last one once exhausted.
class ScriptedVerifier final : public exec::Verifier {
 public:
  explicit ScriptedVerifier(std::vector<double> scores) : scores_(std::move(scores)) {}
  exec::VerifierScoreRecord verify(const exec::ExecOutput&, const exec::ExecInput&, const SceneSpec*) override;
  int calls() const;

 private:
  mutable std::mutex mu_;
  std::vector<double> scores_;
  std::size_t next_ = 0;
};

/// Executor that records how many calls overlap in time.
class ConcurrencyProbe final : public exec::Executor {
 public:
  explicit ConcurrencyProbe(std::chrono::microseconds hold = std::chrono::microseconds(300)) : hold_(hold) {}
  exec::ExecOutput execute(const exec::ExecInput& input) override;
  int peak() const { return peak_.load(); }

 private:
  std::chrono::microseconds hold_;
  std::atomic<int> active_{0};
  std::atomic<int> peak_{0};
};

/// Thread-safe start/finish log, in the order the scheduler reported them.
class EventLog final : public engine::ScheduleObserver {
 public:
  struct Event {
    bool start;
    int node_id;
    engine::NodeStatus status;
  };
  void node_started(int node_id) override;
  void node_finished(const engine::NodeResult& result) override;
  std::vector<Event> events() const;

 private:
  mutable std::mutex mu_;
  std::vector<Event> events_;
};

/// httplib server on an ephemeral localhost port, stopped on destruction.
class FakeServer {
 public:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;
  explicit FakeServer(Handler post_handler);
  ~FakeServer();
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int hits() const { return hits_.load(); }
  std::string last_body() const;

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
  mutable std::mutex mu_;
  std::string last_body_;
};

/// A URL nothing listens on.
std::string dead_url();

}  // namespace vf_test
