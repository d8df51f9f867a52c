#include "visionflow/interface/cli.hpp"

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "visionflow/dsl/proposals.hpp"
#include "visionflow/engine/engine.hpp"
#include "visionflow/error.hpp"
#include "visionflow/interface/service.hpp"
#include "visionflow/planning/evaluation.hpp"
#include "visionflow/registry/registry.hpp"

namespace visionflow::interface {

namespace {

struct Options {
  std::string config_path;
  std::string registry_path;

  std::string plan_text;
  double lambda = -1.0;

  std::string run_text;
  std::vector<std::string> run_images;
  double tau = -1.0;
  int retries = -1;
  int parallel = -1;
  std::string out_dir;

  std::string models_file;
  std::string corpus;
  std::string host = "127.0.0.1";
  int port = 8080;
};

engine::AppConfig load_config(const Options& o) {
  engine::AppConfig cfg = o.config_path.empty() ? engine::AppConfig{} : engine::load_app_config(o.config_path);
  if (!o.registry_path.empty()) cfg.registry_path = o.registry_path;
  if (o.lambda > 0) cfg.engine.lambda = o.lambda;
  if (o.tau >= 0) cfg.engine.verify_threshold = o.tau;
  if (o.retries >= 0) cfg.engine.retry_budget = o.retries;
  if (o.parallel >= 0) cfg.engine.max_parallel = o.parallel;
  if (!o.out_dir.empty()) cfg.engine.run_dir = o.out_dir;
  engine::validate_config(cfg.engine);
  return cfg;
}

registry::Registry load_or_default(const std::filesystem::path& path) {
  return std::filesystem::exists(path) ? registry::load_registry(path) : registry::default_registry();
}

int cmd_plan(const Options& o, std::ostream& out) {
  const auto eng = engine::Engine::from_config(load_config(o));
  out << dsl::serialize_proposals(eng->plan(o.plan_text).selected) << "\n";
  return 0;
}

int cmd_run(const Options& o, std::ostream& out) {
  const auto eng = engine::Engine::from_config(load_config(o));
  std::vector<ImageRef> images;
  for (const std::string& p : o.run_images) images.push_back(resolve_image(nlohmann::json(p)));
  const engine::RunOutcome result = eng->run_request(o.run_text, images);
  out << encode_submit_response(result.record).dump(2) << "\n";
  return 0;
}

int cmd_models_list(const Options& o, std::ostream& out) {
  const engine::AppConfig cfg = load_config(o);
  const registry::Registry reg = cfg.registry_path ? load_or_default(*cfg.registry_path) : registry::default_registry();
  out << registry::registry_to_json(reg).dump(2) << "\n";
  return 0;
}

int cmd_models_register(const Options& o, std::ostream& out) {
  const engine::AppConfig cfg = load_config(o);
  if (!cfg.registry_path) {
    throw Error(ErrorKind::InvalidConfig, "no registry file; pass --registry or set \"registry\" in the config");
  }
  std::ifstream in(o.models_file);
  if (!in) throw Error(ErrorKind::InvalidDescriptor, "cannot open " + o.models_file);
  registry::ModelDescriptor desc;
  try {
    desc = registry::descriptor_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidDescriptor, e.what());
  }
  registry::Registry reg = load_or_default(*cfg.registry_path);
  reg.register_model(desc);
  registry::save_registry(reg, *cfg.registry_path);
  out << "registered " << desc.id << "\n";
  return 0;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const engine::AppConfig cfg = load_config(o);
  const auto corpus = planning::load_corpus(o.corpus);
  std::unique_ptr<prompting::PlannerBackend> backend =
      cfg.backends.empty() ? prompting::make_backend({}) : prompting::make_backend(cfg.backends.front());
  const auto report = planning::evaluate_backend(*backend, corpus, cfg.prompt, cfg.engine.lambda);
  const auto j = planning::report_to_json(report);
  out << j.dump(2) << "\n";
  return planning::check_report_schema(nlohmann::json(j)).empty() ? 0 : 1;
}

int cmd_serve(const Options& o, std::ostream& out) {
  const engine::AppConfig cfg = load_config(o);
  const auto eng = engine::Engine::from_config(cfg);
  Service service(*eng, cfg.registry_path);
  out << "listening on " << o.host << ":" << o.port << std::endl;
  service.serve(o.host, o.port);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Plans and runs multi-step vision requests", "visionflow"};
  app.require_subcommand(1);
  app.add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--registry", o.registry_path, "Model registry file");

  auto* plan = app.add_subcommand("plan", "Print the proposal set chosen for a request");
  plan->add_option("text", o.plan_text, "Request text")->required();
  plan->add_option("--lambda", o.lambda, "Regularizer weight")->check(CLI::PositiveNumber);

  auto* run = app.add_subcommand("run", "Plan, execute and store a request");
  run->add_option("--text", o.run_text, "Request text")->required();
  run->add_option("--image", o.run_images, "Scene JSON or PPM/PGM image")->required();
  run->add_option("--lambda", o.lambda, "Regularizer weight")->check(CLI::PositiveNumber);
  run->add_option("--tau", o.tau, "Verification threshold")->check(CLI::Range(0.0, 1.0));
  run->add_option("--retries", o.retries, "Retry budget per model")->check(CLI::NonNegativeNumber);
  run->add_option("--parallel", o.parallel, "Maximum concurrent nodes")->check(CLI::PositiveNumber);
  run->add_option("--out", o.out_dir, "Run store directory");

  auto* models = app.add_subcommand("models", "Inspect or extend the model registry");
  models->require_subcommand(1);
  auto* models_list = models->add_subcommand("list", "Print registered models");
  auto* models_register = models->add_subcommand("register", "Register a model descriptor");
  models_register->add_option("--file", o.models_file, "Descriptor JSON")->required()->check(CLI::ExistingFile);

  auto* eval = app.add_subcommand("eval", "Score the planner against a gold corpus");
  eval->add_option("--corpus", o.corpus, "JSON lines corpus")->required()->check(CLI::ExistingFile);
  eval->add_option("--lambda", o.lambda, "Regularizer weight")->check(CLI::PositiveNumber);

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--host", o.host, "Listen address");
  serve->add_option("--port", o.port, "Listen port")->check(CLI::Range(1, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*plan) return cmd_plan(o, out);
    if (*run) return cmd_run(o, out);
    if (*models_list) return cmd_models_list(o, out);
    if (*models_register) return cmd_models_register(o, out);
    if (*eval) return cmd_eval(o, out);
    if (*serve) return cmd_serve(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << app.help();
  return 2;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace visionflow::interface
