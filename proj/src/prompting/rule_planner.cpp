#include "visionflow/prompting/rule_planner.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "visionflow/error.hpp"

namespace visionflow::prompting {

namespace {

enum class Intent { Locate, Highlight, Replace, Generate };

std::optional<Intent> intent_of(std::string_view word) {
  static const std::pair<std::string_view, Intent> kTable[] = {
      {"find", Intent::Locate},         {"locate", Intent::Locate},     {"detect", Intent::Locate},
      {"identify", Intent::Locate},     {"highlight", Intent::Highlight}, {"segment", Intent::Highlight},
      {"mask", Intent::Highlight},      {"replace", Intent::Replace},   {"cover", Intent::Replace},
      {"remove", Intent::Replace},      {"generate", Intent::Generate}, {"add", Intent::Generate},
      {"create", Intent::Generate},     {"make", Intent::Generate},
  };
  for (const auto& [w, intent] : kTable) {
    if (w == word) return intent;
  }
  return std::nullopt;
}

bool is_punct_token(std::string_view w) { return w == "." || w == "," || w == ";" || w == "!" || w == "?"; }

bool is_truncator(std::string_view w) {
  static constexpr std::string_view kStops[] = {"in", "on", "with", "by", "at", "from", "into"};
  return is_punct_token(w) || std::find(std::begin(kStops), std::end(kStops), w) != std::end(kStops);
}

bool is_determiner(std::string_view w) { return w == "the" || w == "a" || w == "an" || w == "all" || w == "any"; }
bool is_filler(std::string_view w) { return w == "then" || w == "only" || w == "also" || w == "please" || w == "just"; }
bool is_pronoun(std::string_view w) { return w == "them" || w == "it"; }

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (char c : text) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isspace(uc)) {
      flush();
    } else if (c == '.' || c == ',' || c == ';' || c == '!' || c == '?') {
      flush();
      out.emplace_back(1, c);
    } else {
      cur.push_back(static_cast<char>(std::tolower(uc)));
    }
  }
  flush();
  return out;
}

std::string join(const std::vector<std::string>& words, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (is_punct_token(words[i])) continue;
    if (!out.empty()) out += ' ';
    out += words[i];
  }
  return out;
}

struct TargetPlan {
  Label label;
  bool locate = false;
  bool segment = false;
  std::optional<std::string> edit;
};

class Planner {
 public:
  explicit Planner(std::string_view request) : request_(request), words_(tokenize(request)) {}

  ProposalSet run() {
    std::vector<std::size_t> verbs;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (intent_of(words_[i])) verbs.push_back(i);
    }
    int producing_clauses = 0;
    for (std::size_t k = 0; k < verbs.size(); ++k) {
      const std::size_t end = k + 1 < verbs.size() ? verbs[k + 1] : words_.size();
      if (clause(verbs[k], end)) ++producing_clauses;
    }

    ProposalSet set;
    for (const TargetPlan& t : targets_) {
      if (t.locate) set.items.push_back({OperationKind::Locate, t.label, std::nullopt, {}});
      if (t.segment) set.items.push_back({OperationKind::Segment, t.label, std::nullopt, {}});
      if (t.edit) set.items.push_back({OperationKind::Edit, t.label, t.edit, {}});
    }
    if (generate_ || set.items.empty()) set.items.push_back(generate_proposal());
    if (targets_.size() >= 2 && producing_clauses >= 2) {
      set.items.push_back({OperationKind::Integrate, std::nullopt, std::nullopt, {}});
    }
    return set;
  }

 private:
  // Returns true if the clause contributed at least one target.
  bool clause(std::size_t verb, std::size_t end) {
    const Intent intent = *intent_of(words_[verb]);
    if (intent == Intent::Generate) {
      generate_ = true;
      return false;
    }
    std::size_t stop = verb + 1;
    while (stop < end && !is_truncator(words_[stop])) ++stop;

    std::vector<Label> found;
    std::vector<std::string> part;
    auto flush_part = [&] {
      std::size_t b = 0;
      while (b < part.size() && is_determiner(part[b])) ++b;
      std::vector<std::string> kept;
      for (std::size_t i = b; i < part.size(); ++i) {
        if (!is_filler(part[i])) kept.push_back(part[i]);
      }
      part.clear();
      if (kept.empty()) return;
      if (is_pronoun(kept.front())) {
        for (const TargetPlan& t : targets_) found.push_back(t.label);
        return;
      }
      found.push_back(Label::normalize(join(kept, 0, kept.size())));
    };
    for (std::size_t i = verb + 1; i < stop; ++i) {
      if (words_[i] == "and") {
        flush_part();
      } else {
        part.push_back(words_[i]);
      }
    }
    flush_part();
    if (found.empty()) return false;

    std::string instruction = words_[verb];
    const std::string remainder = join(words_, stop, end);
    if (!remainder.empty()) instruction += " " + remainder;

    for (const Label& label : found) {
      TargetPlan& t = target(label);
      t.locate = true;
      if (intent == Intent::Highlight || intent == Intent::Replace) t.segment = true;
      if (intent == Intent::Replace && !t.edit) t.edit = instruction;
    }
    return true;
  }

  TargetPlan& target(const Label& label) {
    for (TargetPlan& t : targets_) {
      if (t.label == label) return t;
    }
    targets_.push_back(TargetPlan{label, false, false, std::nullopt});
    return targets_.back();
  }

  ActionProposal generate_proposal() const {
    std::string text = normalize_text(request_);
    std::replace_if(text.begin(), text.end(), [](char c) { return c == ';' || c == ','; }, ' ');
    text = normalize_text(text);
    while (!text.empty() && (text.back() == '.' || text.back() == '!' || text.back() == '?')) text.pop_back();
    text = normalize_text(text);
    std::optional<std::string> instruction;
    if (!text.empty()) instruction = text;
    return {OperationKind::Generate, Label::normalize("image"), instruction, {}};
  }

  std::string_view request_;
  std::vector<std::string> words_;
  std::vector<TargetPlan> targets_;
  bool generate_ = false;
};

}  // namespace

ProposalSet rule_based_plan(std::string_view user_input) {
  if (collapse_whitespace(user_input).empty()) {
    throw Error(ErrorKind::UnplannableRequest, "request is blank");
  }
  return Planner(user_input).run();
}

}  // namespace visionflow::prompting
