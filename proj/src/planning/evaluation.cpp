#include "visionflow/planning/evaluation.hpp"

#include <fstream>
#include <sstream>

#include "visionflow/dsl/proposals.hpp"
#include "visionflow/error.hpp"
#include "visionflow/planning/scoring.hpp"

namespace visionflow::planning {

using nlohmann::json;

std::vector<CorpusItem> parse_corpus(const std::string& jsonl) {
  std::vector<CorpusItem> out;
  std::istringstream in(jsonl);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (collapse_whitespace(line).empty()) continue;
    try {
      const json j = json::parse(line);
      CorpusItem item{j.at("input").get<std::string>(), dsl::parse_proposals(j.at("gold").get<std::string>())};
      if (!dsl::validate_set(item.gold).empty()) {
        throw Error(ErrorKind::InvalidConfig, "gold set does not validate");
      }
      out.push_back(std::move(item));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::InvalidConfig, "corpus line " + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorKind::InvalidConfig, "corpus line " + std::to_string(lineno) + ": " + e.detail());
    }
  }
  return out;
}

std::vector<CorpusItem> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open corpus " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_corpus(ss.str());
}

EvaluationReport evaluate_backend(prompting::PlannerBackend& backend, const std::vector<CorpusItem>& corpus,
                                  const prompting::PromptConfig& cfg, double lambda) {
  if (corpus.empty()) throw Error(ErrorKind::InvalidConfig, "corpus is empty");
  EvaluationReport report;
  report.backend = backend.descriptor().id;
  report.items = corpus.size();
  double sum_disc = 0.0;
  double sum_reg = 0.0;
  std::size_t matches = 0;
  std::size_t parsed_items = 0;
  for (const CorpusItem& item : corpus) {
    const std::string prompt = prompting::build_prompt(cfg, item.input);
    std::vector<std::string> raw;
    try {
      raw = prompting::generate_candidates(backend, prompt);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BackendMalformed) throw;
    }
    std::vector<ProposalSet> parsed;
    for (const std::string& text : raw) {
      if (auto out = dsl::try_parse_proposals(text); out.set) parsed.push_back(std::move(*out.set));
    }
    ItemResult r;
    r.input = item.input;
    if (parsed.empty()) {
      ++report.parse_failures;
    } else {
      const Selection sel = select_best(item.input, parsed, lambda);
      r.parsed = true;
      r.discrepancy = discrepancy(sel.set, item.gold);
      r.regularizer = sel.score.regularizer;
      r.exact_match = sel.set == item.gold;
      r.selected = dsl::serialize_proposals(sel.set);
      ++parsed_items;
      sum_reg += r.regularizer;
    }
    sum_disc += r.discrepancy;
    matches += r.exact_match ? 1 : 0;
    report.per_item.push_back(std::move(r));
  }
  const auto n = static_cast<double>(corpus.size());
  report.exact_match_rate = static_cast<double>(matches) / n;
  report.mean_discrepancy = sum_disc / n;
  report.mean_regularizer = parsed_items == 0 ? 0.0 : sum_reg / static_cast<double>(parsed_items);
  return report;
}

nlohmann::ordered_json report_to_json(const EvaluationReport& report) {
  nlohmann::ordered_json j;
  j["backend"] = report.backend;
  j["items"] = report.items;
  j["parse_failures"] = report.parse_failures;
  j["exact_match_rate"] = report.exact_match_rate;
  j["mean_discrepancy"] = report.mean_discrepancy;
  j["mean_regularizer"] = report.mean_regularizer;
  j["per_item"] = nlohmann::ordered_json::array();
  for (const ItemResult& r : report.per_item) {
    nlohmann::ordered_json e;
    e["input"] = r.input;
    e["parsed"] = r.parsed;
    e["exact_match"] = r.exact_match;
    e["discrepancy"] = r.discrepancy;
    e["regularizer"] = r.regularizer;
    e["selected"] = r.selected;
    j["per_item"].push_back(std::move(e));
  }
  return j;
}

std::vector<std::string> check_report_schema(const json& j) {
  std::vector<std::string> errs;
  if (!j.is_object()) return {"report is not an object"};
  auto need = [&](const char* key, auto pred, const char* what) {
    if (!j.contains(key)) {
      errs.push_back(std::string("missing ") + key);
    } else if (!pred(j.at(key))) {
      errs.push_back(std::string(key) + " must be " + what);
    }
  };
  auto unit = [](const json& v) { return v.is_number() && v.get<double>() >= 0.0 && v.get<double>() <= 1.0; };
  need("backend", [](const json& v) { return v.is_string(); }, "a string");
  need("items", [](const json& v) { return v.is_number_unsigned() && v.get<std::size_t>() >= 1; }, "a positive integer");
  need("parse_failures", [](const json& v) { return v.is_number_unsigned(); }, "a non-negative integer");
  need("exact_match_rate", unit, "in [0,1]");
  need("mean_discrepancy", unit, "in [0,1]");
  need("mean_regularizer", [](const json& v) { return v.is_number() && v.get<double>() >= 0.0; }, "non-negative");
  need("per_item", [](const json& v) { return v.is_array(); }, "an array");
  if (!errs.empty()) return errs;
  if (j["per_item"].size() != j["items"].get<std::size_t>()) errs.push_back("per_item length differs from items");
  if (j["parse_failures"].get<std::size_t>() > j["items"].get<std::size_t>()) errs.push_back("parse_failures > items");
  for (const json& e : j["per_item"]) {
    if (!e.is_object() || !e.contains("input") || !e["input"].is_string() || !e.contains("parsed") ||
        !e["parsed"].is_boolean() || !e.contains("exact_match") || !e["exact_match"].is_boolean() ||
        !e.contains("discrepancy") || !unit(e["discrepancy"]) || !e.contains("selected") || !e["selected"].is_string()) {
      errs.push_back("malformed per_item entry");
      break;
    }
  }
  return errs;
}

}  // namespace visionflow::planning
