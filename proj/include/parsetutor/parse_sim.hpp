#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "parsetutor/analysis.hpp"
#include "parsetutor/grammar.hpp"

namespace parsetutor {

enum class ParserKind { LL, SLR };

struct TraceStep {
  enum class Kind { Expand, Match, Shift, Reduce, Accept, Reject };

  std::vector<std::string> stack;   // bottom first, configuration before the move
  std::vector<SymbolId> remaining;  // unread input, ending with $
  Kind kind = Kind::Reject;
  std::string action;
  std::vector<Cell> consulted;  // action cell, then the goto cell for a reduce

  bool operator==(const TraceStep&) const = default;
};

enum class RejectReason {
  EmptyCell,
  Conflict,
  Mismatch,        // LL: terminal on the stack differs from the lookahead
  StackUnderflow,  // SLR: reduce pops more than the stack holds
  MissingGoto,
  InvalidEntry,    // entry of the wrong kind for its sub-table
  Nontermination,
};

std::string_view reject_reason_name(RejectReason r);

struct ParseOutcome {
  bool accepted = false;
  std::optional<RejectReason> reason;
  int step = -1;  // index of the final step
  std::optional<Cell> cell;
  std::string message;

  bool operator==(const ParseOutcome&) const = default;
};

struct ParseTrace {
  ParserKind kind = ParserKind::LL;
  std::vector<TraceStep> steps;
  ParseOutcome outcome;
  std::set<Cell> cells_exercised;

  bool accepted() const { return outcome.accepted; }
  bool operator==(const ParseTrace&) const = default;
};

/// Step cap shared by both simulators: 10 * (n + 2) * |productions|.
size_t step_cap(size_t input_length, size_t production_count);

/// Predictive parse over any LL-shaped table (production indices of g).
ParseTrace ll_parse(const LlTable& table, const Grammar& g, const std::vector<SymbolId>& input);

/// Shift/reduce parse over any SLR-shaped table; g must be augmented.
ParseTrace lr_parse(const SlrTable& table, const Grammar& g, const std::vector<SymbolId>& input);

bool cell_exercised(const ParseTrace& trace, Cell cell);

/// Whitespace-separated terminal names. Throws std::invalid_argument for
/// anything that is not a terminal of g.
std::vector<SymbolId> tokenize_input(const Grammar& g, std::string_view text);
std::string join_tokens(const Grammar& g, const std::vector<SymbolId>& tokens);

/// LR stacks render compactly ("0a3d4"); LL stacks are space separated.
std::string render_stack(const ParseTrace& trace, const TraceStep& step);
std::string render_text(const ParseTrace& trace, const Grammar& g);

}  // namespace parsetutor
