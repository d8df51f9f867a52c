#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "visionflow/core/types.hpp"
#include "visionflow/error.hpp"

namespace visionflow::dsl {

enum class DiagnosticKind {
  UnknownOperation,
  MissingTarget,
  UnexpectedToken,
  EmptyInput,
  MisplacedIntegrate,
  DuplicateIntegrate,
};

std::string_view diagnostic_name(DiagnosticKind kind) noexcept;

struct ParseDiagnostic {
  std::size_t byte_offset = 0;
  DiagnosticKind kind = DiagnosticKind::UnexpectedToken;
  std::string detail;

  friend bool operator==(const ParseDiagnostic&, const ParseDiagnostic&) = default;
};

/// Raised by parse_proposals. Carries every diagnostic found in the input.
class ParseError : public Error {
 public:
  explicit ParseError(std::vector<ParseDiagnostic> diagnostics);
  const std::vector<ParseDiagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<ParseDiagnostic> diagnostics_;
};

struct ParseOutcome {
  std::optional<ProposalSet> set;
  std::vector<ParseDiagnostic> diagnostics;
};

/// Parses the quoted-verb proposal format, e.g.
///   "locate" dogs; "segment" dogs; "locate" frogs, "segment" frogs;
/// Either ';' or ',' separates items. Parsing is all-or-nothing: any
/// diagnostic means no set is produced. Set-level rules (Integrate placement)
/// are left to validate_set so that scoring can still see such sets.
ParseOutcome try_parse_proposals(std::string_view text);
ProposalSet parse_proposals(std::string_view text);

/// Canonical form: items joined by "; " with a trailing ';'.
std::string serialize_proposals(const ProposalSet& set);
std::string serialize_proposal(const ActionProposal& p);

/// Empty iff the set is well formed: non-empty, Integrate unique and last,
/// targets present where required and every payload representable in the
/// text format. Offsets refer to the canonical serialization.
std::vector<ParseDiagnostic> validate_set(const ProposalSet& set);

}  // namespace visionflow::dsl
