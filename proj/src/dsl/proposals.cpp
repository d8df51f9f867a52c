#include "visionflow/dsl/proposals.hpp"

#include <cctype>

namespace visionflow::dsl {

namespace {

constexpr std::string_view kIntegratePayload = "all results";
constexpr std::string_view kInstructionSplit = " :: ";

bool is_ws(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_sep(char c) { return c == ';' || c == ','; }

std::string summarize(const std::vector<ParseDiagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    if (!out.empty()) out += "; ";
    out += std::string(diagnostic_name(d.kind)) + " at " + std::to_string(d.byte_offset);
    if (!d.detail.empty()) out += " (" + d.detail + ")";
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ParseOutcome run() {
    ParseOutcome out;
    skip_ws();
    if (pos_ == text_.size()) {
      diag(0, DiagnosticKind::EmptyInput, "no proposals");
      out.diagnostics = std::move(diags_);
      return out;
    }
    ProposalSet set;
    while (true) {
      if (auto item = parse_item()) set.items.push_back(std::move(*item));
      skip_ws();
      if (pos_ == text_.size()) break;
      if (is_sep(text_[pos_])) {
        ++pos_;
        skip_ws();
        if (pos_ == text_.size()) break;  // trailing separator
        continue;
      }
      // parse_item always stops at a separator or the end, so this is only
      // reached after error recovery.
      recover();
    }
    if (diags_.empty()) {
      out.set = std::move(set);
    } else {
      out.diagnostics = std::move(diags_);
    }
    return out;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && is_ws(text_[pos_])) ++pos_;
  }

  void recover() {
    while (pos_ < text_.size() && !is_sep(text_[pos_])) ++pos_;
  }

  void diag(std::size_t offset, DiagnosticKind kind, std::string detail) {
    diags_.push_back({offset, kind, std::move(detail)});
  }

  std::optional<ActionProposal> parse_item() {
    if (text_[pos_] != '"') {
      diag(pos_, DiagnosticKind::UnexpectedToken, "expected '\"'");
      recover();
      return std::nullopt;
    }
    const std::size_t name_begin = ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"' && !is_sep(text_[pos_])) ++pos_;
    if (pos_ == text_.size() || text_[pos_] != '"') {
      diag(pos_, DiagnosticKind::UnexpectedToken, "unterminated operation name");
      recover();
      return std::nullopt;
    }
    const std::string_view name = text_.substr(name_begin, pos_ - name_begin);
    ++pos_;  // closing quote
    const std::size_t after_name = pos_;

    std::string_view payload;
    std::size_t payload_begin = pos_;
    if (pos_ < text_.size() && !is_sep(text_[pos_])) {
      if (!is_ws(text_[pos_])) {
        diag(pos_, DiagnosticKind::UnexpectedToken, "expected whitespace after operation name");
        recover();
        return std::nullopt;
      }
      skip_ws();
      payload_begin = pos_;
      recover();  // consume the payload up to the next separator
      payload = text_.substr(payload_begin, pos_ - payload_begin);
      while (!payload.empty() && is_ws(payload.back())) payload.remove_suffix(1);
    }

    const auto op = parse_op_name(name);
    if (!op) {
      diag(name_begin, DiagnosticKind::UnknownOperation, std::string(name));
      return std::nullopt;
    }
    return build(*op, payload, payload_begin, after_name);
  }

  std::optional<ActionProposal> build(OperationKind op, std::string_view payload, std::size_t payload_begin,
                                      std::size_t after_name) {
    ActionProposal p;
    p.op = op;
    if (op == OperationKind::Integrate) {
      if (!payload.empty() && normalize_text(payload) != kIntegratePayload) {
        diag(payload_begin, DiagnosticKind::UnexpectedToken, "integrate takes no target");
        return std::nullopt;
      }
      return p;
    }
    std::string_view target_text = payload;
    if (op_takes_instruction(op)) {
      const auto split = payload.find(kInstructionSplit);
      if (split != std::string_view::npos) {
        target_text = payload.substr(0, split);
        const std::string instruction = collapse_whitespace(payload.substr(split + kInstructionSplit.size()));
        if (!instruction.empty()) p.instruction = instruction;
      }
    }
    if (!normalize_text(target_text).empty()) {
      p.target = Label::normalize(target_text);
    } else if (op_requires_target(op) || p.instruction) {
      diag(payload.empty() ? after_name : payload_begin, DiagnosticKind::MissingTarget,
           std::string(op_name(op)) + " needs a target");
      return std::nullopt;
    }
    return p;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<ParseDiagnostic> diags_;
};

bool has_forbidden(std::string_view s) { return s.find_first_of(";,") != std::string_view::npos; }

}  // namespace

std::string_view diagnostic_name(DiagnosticKind kind) noexcept {
  switch (kind) {
    case DiagnosticKind::UnknownOperation: return "UnknownOperation";
    case DiagnosticKind::MissingTarget: return "MissingTarget";
    case DiagnosticKind::UnexpectedToken: return "UnexpectedToken";
    case DiagnosticKind::EmptyInput: return "EmptyInput";
    case DiagnosticKind::MisplacedIntegrate: return "MisplacedIntegrate";
    case DiagnosticKind::DuplicateIntegrate: return "DuplicateIntegrate";
  }
  return "Unknown";
}

ParseError::ParseError(std::vector<ParseDiagnostic> diagnostics)
    : Error(ErrorKind::ParseFailed, summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

ParseOutcome try_parse_proposals(std::string_view text) { return Parser(text).run(); }

ProposalSet parse_proposals(std::string_view text) {
  ParseOutcome out = try_parse_proposals(text);
  if (!out.set) throw ParseError(std::move(out.diagnostics));
  return std::move(*out.set);
}

std::string serialize_proposal(const ActionProposal& p) {
  std::string out = "\"";
  out += op_name(p.op);
  out += '"';
  std::string payload;
  if (p.op == OperationKind::Integrate) {
    payload = kIntegratePayload;
  } else {
    if (p.target) payload = p.target->text();
    if (op_takes_instruction(p.op) && p.instruction && !p.instruction->empty()) {
      payload += kInstructionSplit;
      payload += *p.instruction;
    }
  }
  if (!payload.empty()) {
    out += ' ';
    out += payload;
  }
  return out;
}

std::string serialize_proposals(const ProposalSet& set) {
  std::string out;
  for (std::size_t i = 0; i < set.items.size(); ++i) {
    if (i > 0) out += "; ";
    out += serialize_proposal(set.items[i]);
  }
  out += ';';
  return out;
}

std::vector<ParseDiagnostic> validate_set(const ProposalSet& set) {
  std::vector<ParseDiagnostic> diags;
  if (set.items.empty()) {
    diags.push_back({0, DiagnosticKind::EmptyInput, "no proposals"});
    return diags;
  }
  std::size_t offset = 0;
  bool seen_integrate = false;
  const std::size_t last = set.items.size() - 1;
  for (std::size_t i = 0; i < set.items.size(); ++i) {
    const ActionProposal& p = set.items[i];
    const std::string where = "item " + std::to_string(i);
    if (p.op == OperationKind::Integrate) {
      if (p.target && p.target->text() != kIntegratePayload) {
        diags.push_back({offset, DiagnosticKind::UnexpectedToken, where + ": integrate takes no target"});
      }
      if (seen_integrate) {
        diags.push_back({offset, DiagnosticKind::DuplicateIntegrate, where});
      } else if (i != last) {
        diags.push_back({offset, DiagnosticKind::MisplacedIntegrate, where});
      }
      seen_integrate = true;
    } else {
      if (!p.target && (op_requires_target(p.op) || (p.instruction && op_takes_instruction(p.op)))) {
        diags.push_back({offset, DiagnosticKind::MissingTarget, where});
      }
      if (p.instruction && !op_takes_instruction(p.op)) {
        diags.push_back({offset, DiagnosticKind::UnexpectedToken, where + ": instruction not allowed"});
      }
      if (p.target && (has_forbidden(p.target->text()) ||
                       (op_takes_instruction(p.op) && p.target->text().find(kInstructionSplit) != std::string::npos))) {
        diags.push_back({offset, DiagnosticKind::UnexpectedToken, where + ": target not representable"});
      }
      if (p.instruction && has_forbidden(*p.instruction)) {
        diags.push_back({offset, DiagnosticKind::UnexpectedToken, where + ": instruction not representable"});
      }
    }
    offset += serialize_proposal(p).size() + 2;
  }
  return diags;
}

}  // namespace visionflow::dsl
