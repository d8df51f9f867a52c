#include "visionflow/engine/run_store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "visionflow/core/image_io.hpp"
#include "visionflow/core/serde.hpp"
#include "visionflow/engine/run_id.hpp"
#include "visionflow/error.hpp"

namespace visionflow::engine {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kRecordFile = "record.json";
constexpr const char* kIndexFile = "index.json";
constexpr const char* kTempPrefix = ".tmp-";

template <typename T>
ordered_json opt(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <typename T>
std::optional<T> opt_get(const ordered_json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

ordered_json config_to_json(const EngineConfig& c) {
  ordered_json j;
  j["verify_threshold"] = c.verify_threshold;
  j["retry_budget"] = c.retry_budget;
  j["max_parallel"] = c.max_parallel;
  j["lambda"] = c.lambda;
  j["run_dir"] = c.run_dir.string();
  j["verifier_endpoint"] = opt(c.verifier_endpoint);
  j["executor_deadline_ms"] = c.executor_deadline.count();
  return j;
}

EngineConfig config_from_json(const ordered_json& j) {
  EngineConfig c;
  c.verify_threshold = j.at("verify_threshold").get<double>();
  c.retry_budget = j.at("retry_budget").get<int>();
  c.max_parallel = j.at("max_parallel").get<int>();
  c.lambda = j.at("lambda").get<double>();
  c.run_dir = j.at("run_dir").get<std::string>();
  c.verifier_endpoint = opt_get<std::string>(j, "verifier_endpoint");
  c.executor_deadline = std::chrono::milliseconds(j.at("executor_deadline_ms").get<long long>());
  return c;
}

NodeResult node_result_from_json(const ordered_json& j) {
  NodeResult r;
  r.node_id = j.at("node_id").get<int>();
  r.status = node_status_from_name(j.at("status").get<std::string>());
  r.model_id = opt_get<std::string>(j, "model_id");
  r.detail = j.value("detail", std::string{});
  for (const auto& a : j.at("attempts")) {
    r.attempts.push_back({a.at("model_id").get<std::string>(),
                          attempt_outcome_from_name(a.at("outcome").get<std::string>()), opt_get<double>(a, "score"),
                          a.value("detail", std::string{})});
  }
  for (const auto& o : j.at("outputs")) {
    ImageOutput io;
    io.image_index = o.at("image_index").get<int>();
    io.output = exec::exec_output_from_json(json(o.at("output")));
    const auto& v = o.at("verification");
    io.verification = {v.at("score").get<double>(), v.at("method").get<std::string>(),
                       v.value("detail", std::string{})};
    r.outputs.push_back(std::move(io));
  }
  return r;
}

planning::PlanDAG dag_from_json(const ordered_json& j) {
  planning::PlanDAG dag;
  dag.request = j.at("request").get<std::string>();
  dag.images = j.at("images").get<std::vector<ImageRef>>();
  for (const auto& n : j.at("nodes")) {
    planning::PlanNode node;
    node.node_id = n.at("node_id").get<int>();
    node.proposal = n.at("proposal").get<ActionProposal>();
    node.depends_on = n.at("depends_on").get<std::vector<int>>();
    node.model_id = opt_get<std::string>(n, "model_id");
    node.whole_image = n.at("whole_image").get<bool>();
    dag.nodes.push_back(std::move(node));
  }
  return dag;
}

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::StorageFailure, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_all(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw Error(ErrorKind::StorageFailure, "cannot write " + p.string());
}

}  // namespace

ordered_json node_result_to_json(const NodeResult& r) {
  ordered_json j;
  j["node_id"] = r.node_id;
  j["status"] = std::string(node_status_name(r.status));
  j["model_id"] = opt(r.model_id);
  j["detail"] = r.detail;
  j["attempts"] = ordered_json::array();
  for (const Attempt& a : r.attempts) {
    ordered_json aj;
    aj["model_id"] = a.model_id;
    aj["outcome"] = std::string(attempt_outcome_name(a.outcome));
    aj["score"] = opt(a.score);
    aj["detail"] = a.detail;
    j["attempts"].push_back(std::move(aj));
  }
  j["outputs"] = ordered_json::array();
  for (const ImageOutput& io : r.outputs) {
    ordered_json oj;
    oj["image_index"] = io.image_index;
    oj["output"] = ordered_json(exec::exec_output_to_json(io.output));
    oj["verification"] = {{"score", io.verification.score},
                          {"method", io.verification.method},
                          {"detail", io.verification.detail}};
    j["outputs"].push_back(std::move(oj));
  }
  return j;
}

ordered_json dag_to_json(const planning::PlanDAG& dag) {
  ordered_json j;
  j["request"] = dag.request;
  j["images"] = dag.images;
  j["nodes"] = ordered_json::array();
  for (const planning::PlanNode& n : dag.nodes) {
    ordered_json nj;
    nj["node_id"] = n.node_id;
    nj["proposal"] = n.proposal;
    nj["depends_on"] = n.depends_on;
    nj["model_id"] = opt(n.model_id);
    nj["whole_image"] = n.whole_image;
    j["nodes"].push_back(std::move(nj));
  }
  return j;
}

ordered_json record_to_json(const RunRecord& rec) {
  ordered_json j;
  j["run_id"] = rec.run_id;
  j["request"] = rec.request;
  j["config"] = config_to_json(rec.config);
  j["prompt"] = rec.prompt;
  j["planner_backend"] = rec.planner_backend;
  j["candidates"] = rec.candidates;
  j["selected"] = rec.selected;
  j["score"] = {{"congruence", rec.score.congruence},
                {"regularizer", rec.score.regularizer},
                {"lambda", rec.score.lambda},
                {"total", rec.score.total}};
  j["dag"] = dag_to_json(rec.dag);
  j["node_results"] = ordered_json::array();
  for (const NodeResult& r : rec.node_results) j["node_results"].push_back(node_result_to_json(r));
  j["artifacts"] = rec.artifacts;
  j["summary"] = rec.summary;
  j["started_at_ms"] = rec.started_at_ms;
  j["finished_at_ms"] = rec.finished_at_ms;
  return j;
}

RunRecord record_from_json(const ordered_json& j) {
  try {
    RunRecord rec;
    rec.run_id = j.at("run_id").get<std::string>();
    rec.request = j.at("request").get<std::string>();
    rec.config = config_from_json(j.at("config"));
    rec.prompt = j.at("prompt").get<std::string>();
    rec.planner_backend = j.at("planner_backend").get<std::string>();
    rec.candidates = j.at("candidates").get<std::vector<std::string>>();
    rec.selected = j.at("selected").get<ProposalSet>();
    const auto& s = j.at("score");
    rec.score = {s.at("congruence").get<double>(), s.at("regularizer").get<double>(), s.at("lambda").get<double>(),
                 s.at("total").get<double>()};
    rec.dag = dag_from_json(j.at("dag"));
    for (const auto& r : j.at("node_results")) rec.node_results.push_back(node_result_from_json(r));
    rec.artifacts = j.at("artifacts").get<std::vector<ImageRef>>();
    rec.summary = j.at("summary");
    rec.started_at_ms = j.at("started_at_ms").get<std::int64_t>();
    rec.finished_at_ms = j.at("finished_at_ms").get<std::int64_t>();
    return rec;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::StorageFailure, std::string("bad run record: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::StorageFailure) throw;
    throw Error(ErrorKind::StorageFailure, "bad run record: " + e.detail());
  }
}

RunStore::RunStore(fs::path root) : root_(std::move(root)) {}

void RunStore::set_fault_hook(std::function<void(std::string_view)> hook) {
  std::lock_guard lock(mu_);
  fault_hook_ = std::move(hook);
}

fs::path RunStore::run_path(const std::string& run_id) const {
  if (!is_run_id(run_id)) throw Error(ErrorKind::RunNotFound, "no run '" + run_id + "'");
  return root_ / run_id;
}

void RunStore::write_index(const std::vector<std::string>& ids) const {
  const fs::path tmp = root_ / (std::string(kIndexFile) + ".tmp");
  write_all(tmp, ordered_json(ids).dump(2) + "\n");
  std::error_code ec;
  fs::rename(tmp, root_ / kIndexFile, ec);
  if (ec) throw Error(ErrorKind::StorageFailure, "cannot publish index: " + ec.message());
}

std::vector<std::string> RunStore::index() const {
  const fs::path p = root_ / kIndexFile;
  if (!fs::exists(p)) return {};
  try {
    return json::parse(read_all(p)).get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::StorageFailure, std::string("bad index: ") + e.what());
  }
}

void RunStore::persist(const RunRecord& rec, const std::vector<Composite>& composites) {
  std::lock_guard lock(mu_);
  const fs::path final_dir = run_path(rec.run_id);
  const fs::path tmp_dir = root_ / (kTempPrefix + rec.run_id);
  if (fs::exists(final_dir)) throw Error(ErrorKind::StorageFailure, "run " + rec.run_id + " already stored");
  auto stage = [&](std::string_view name) {
    if (fault_hook_) fault_hook_(name);
  };

  std::error_code ec;
  fs::remove_all(tmp_dir, ec);
  fs::create_directories(tmp_dir, ec);
  if (ec) throw Error(ErrorKind::StorageFailure, "cannot create " + tmp_dir.string() + ": " + ec.message());
  stage("files");
  for (const Composite& c : composites) write_ppm(tmp_dir / c.image.id, c.raster);
  write_all(tmp_dir / kRecordFile, record_to_json(rec).dump(2) + "\n");

  stage("publish");
  fs::rename(tmp_dir, final_dir, ec);
  if (ec) throw Error(ErrorKind::StorageFailure, "cannot publish run: " + ec.message());

  stage("index");
  std::vector<std::string> ids = index();
  ids.push_back(rec.run_id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  write_index(ids);
}

bool RunStore::contains(const std::string& run_id) const {
  if (!is_run_id(run_id)) return false;
  return fs::exists(root_ / run_id / kRecordFile);
}

RunRecord RunStore::load(const std::string& run_id) const {
  const fs::path p = run_path(run_id) / kRecordFile;
  if (!fs::exists(p)) throw Error(ErrorKind::RunNotFound, "no run '" + run_id + "'");
  try {
    return record_from_json(ordered_json::parse(read_all(p)));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::StorageFailure, std::string("bad run record: ") + e.what());
  }
}

std::string RunStore::load_artifact(const std::string& run_id, const std::string& name) const {
  const fs::path dir = run_path(run_id);
  if (!fs::exists(dir / kRecordFile)) throw Error(ErrorKind::RunNotFound, "no run '" + run_id + "'");
  if (name != kRecordFile) {
    const RunRecord rec = load(run_id);
    const bool known = std::any_of(rec.artifacts.begin(), rec.artifacts.end(),
                                   [&](const ImageRef& a) { return a.id == name; });
    if (!known) throw Error(ErrorKind::RunNotFound, "run " + run_id + " has no artifact '" + name + "'");
  }
  return read_all(dir / name);
}

std::size_t RunStore::recover() {
  std::lock_guard lock(mu_);
  std::size_t removed = 0;
  if (!fs::is_directory(root_)) return removed;
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(root_)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_directory() && name.rfind(kTempPrefix, 0) == 0) {
      fs::remove_all(entry.path());
      ++removed;
    } else if (entry.is_directory() && is_run_id(name) && fs::exists(entry.path() / kRecordFile)) {
      ids.push_back(name);
    }
  }
  std::error_code ec;
  fs::remove(root_ / (std::string(kIndexFile) + ".tmp"), ec);
  std::sort(ids.begin(), ids.end());
  if (ids != index()) write_index(ids);
  return removed;
}

}  // namespace visionflow::engine
