#include "visionflow/core/label.hpp"

#include <cctype>

#include "visionflow/error.hpp"

namespace visionflow {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string collapse(std::string_view raw, bool lower) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(lower ? static_cast<char>(std::tolower(static_cast<unsigned char>(c))) : c);
  }
  return out;
}

}  // namespace

std::string normalize_text(std::string_view raw) { return collapse(raw, true); }

std::string collapse_whitespace(std::string_view raw) { return collapse(raw, false); }

Label Label::normalize(std::string_view raw) {
  std::string text = normalize_text(raw);
  if (text.empty()) throw Error(ErrorKind::EmptyLabel, "label is empty after normalization");
  return Label(std::move(text));
}

Label normalize_label(std::string_view raw) { return Label::normalize(raw); }

}  // namespace visionflow
