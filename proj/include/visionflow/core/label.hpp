#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace visionflow {

/// A normalized object phrase: lowercase, trimmed, inner whitespace collapsed
/// to single spaces, never empty. The only way to obtain one is through
/// normalization, so every Label in the system satisfies the invariants.
class Label {
 public:
  /// Throws Error(EmptyLabel) when nothing is left after trimming.
  static Label normalize(std::string_view raw);

  const std::string& text() const noexcept { return text_; }

  friend bool operator==(const Label&, const Label&) = default;
  friend auto operator<=>(const Label&, const Label&) = default;

 private:
  explicit Label(std::string text) : text_(std::move(text)) {}
  std::string text_;
};

Label normalize_label(std::string_view raw);

/// Lowercase + trim + collapse whitespace. May return an empty string.
std::string normalize_text(std::string_view raw);

/// Trim + collapse whitespace, case preserved.
std::string collapse_whitespace(std::string_view raw);

}  // namespace visionflow
