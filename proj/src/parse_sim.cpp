#include "parsetutor/parse_sim.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace parsetutor {

std::string_view reject_reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::EmptyCell:
      return "empty-cell";
    case RejectReason::Conflict:
      return "conflict";
    case RejectReason::Mismatch:
      return "mismatch";
    case RejectReason::StackUnderflow:
      return "stack-underflow";
    case RejectReason::MissingGoto:
      return "missing-goto";
    case RejectReason::InvalidEntry:
      return "invalid-entry";
    case RejectReason::Nontermination:
      return "nontermination";
  }
  return "unknown";
}

size_t step_cap(size_t input_length, size_t production_count) {
  return 10 * (input_length + 2) * std::max<size_t>(production_count, 1);
}

namespace {

std::vector<SymbolId> with_end_marker(const std::vector<SymbolId>& input) {
  std::vector<SymbolId> out = input;
  out.push_back(kEndMarker);
  return out;
}

std::string cell_text(const Grammar& g, ParserKind kind, Cell c) {
  std::string row = kind == ParserKind::LL ? g.name(c.row) : std::to_string(c.row);
  return "[" + row + ", " + g.name(c.column) + "]";
}

class TraceBuilder {
 public:
  TraceBuilder(ParserKind kind, const Grammar& g) : g_(g) { trace_.kind = kind; }

  TraceStep& step(std::vector<std::string> stack, std::vector<SymbolId> remaining,
                  TraceStep::Kind kind, std::string action) {
    trace_.steps.push_back({std::move(stack), std::move(remaining), kind, std::move(action), {}});
    return trace_.steps.back();
  }

  void consult(TraceStep& s, Cell c) {
    s.consulted.push_back(c);
    trace_.cells_exercised.insert(c);
  }

  ParseTrace accept() {
    trace_.outcome.accepted = true;
    trace_.outcome.step = static_cast<int>(trace_.steps.size()) - 1;
    return std::move(trace_);
  }

  ParseTrace reject(TraceStep& s, RejectReason reason, std::optional<Cell> cell,
                    const std::string& detail) {
    s.kind = TraceStep::Kind::Reject;
    std::string msg = std::string(reject_reason_name(reason));
    if (cell) msg += " at " + cell_text(g_, trace_.kind, *cell);
    if (!detail.empty()) msg += ": " + detail;
    s.action = "reject (" + msg + ")";
    trace_.outcome = {false, reason, static_cast<int>(trace_.steps.size()) - 1, cell, msg};
    return std::move(trace_);
  }

 private:
  const Grammar& g_;
  ParseTrace trace_;
};

}  // namespace

ParseTrace ll_parse(const LlTable& table, const Grammar& g, const std::vector<SymbolId>& input) {
  TraceBuilder tb(ParserKind::LL, g);
  const auto tokens = with_end_marker(input);
  std::vector<SymbolId> stack{kEndMarker, g.start()};
  size_t pos = 0;
  const size_t cap = step_cap(input.size(), g.productions().size());

  auto stack_names = [&] {
    std::vector<std::string> out;
    for (SymbolId s : stack) out.push_back(g.name(s));
    return out;
  };
  auto remaining = [&] { return std::vector<SymbolId>(tokens.begin() + static_cast<long>(pos), tokens.end()); };

  for (size_t n = 0;; ++n) {
    SymbolId top = stack.back();
    SymbolId look = tokens[pos];
    auto& s = tb.step(stack_names(), remaining(), TraceStep::Kind::Reject, "");
    if (n >= cap) return tb.reject(s, RejectReason::Nontermination, std::nullopt, "step cap reached");

    if (top == kEndMarker && look == kEndMarker) {
      s.kind = TraceStep::Kind::Accept;
      s.action = "accept";
      return tb.accept();
    }
    if (!g.is_nonterminal(top)) {
      if (top != look) {
        return tb.reject(s, RejectReason::Mismatch, std::nullopt,
                         "expected " + g.name(top) + ", found " + g.name(look));
      }
      s.kind = TraceStep::Kind::Match;
      s.action = "match " + g.name(look);
      stack.pop_back();
      ++pos;
      continue;
    }

    Cell cell{top, look};
    tb.consult(s, cell);
    const auto* entries = table.at(cell);
    if (!entries || entries->empty()) return tb.reject(s, RejectReason::EmptyCell, cell, "");
    if (entries->size() > 1) return tb.reject(s, RejectReason::Conflict, cell, "");
    int pi = *entries->begin();
    if (pi < 0 || static_cast<size_t>(pi) >= g.productions().size()) {
      return tb.reject(s, RejectReason::InvalidEntry, cell, "");
    }
    const auto& p = g.production(pi);
    s.kind = TraceStep::Kind::Expand;
    s.action = "expand " + g.production_text(pi);
    stack.pop_back();
    for (auto it = p.rhs.rbegin(); it != p.rhs.rend(); ++it) stack.push_back(*it);
  }
}

ParseTrace lr_parse(const SlrTable& table, const Grammar& g, const std::vector<SymbolId>& input) {
  TraceBuilder tb(ParserKind::SLR, g);
  const auto tokens = with_end_marker(input);
  std::vector<int> states{0};
  std::vector<SymbolId> symbols;
  size_t pos = 0;
  const size_t cap = step_cap(input.size(), g.productions().size());

  auto stack_names = [&] {
    std::vector<std::string> out{std::to_string(states[0])};
    for (size_t i = 0; i < symbols.size(); ++i) {
      out.push_back(g.name(symbols[i]));
      out.push_back(std::to_string(states[i + 1]));
    }
    return out;
  };
  auto remaining = [&] { return std::vector<SymbolId>(tokens.begin() + static_cast<long>(pos), tokens.end()); };

  for (size_t n = 0;; ++n) {
    int state = states.back();
    SymbolId look = tokens[pos];
    auto& s = tb.step(stack_names(), remaining(), TraceStep::Kind::Reject, "");
    if (n >= cap) return tb.reject(s, RejectReason::Nontermination, std::nullopt, "step cap reached");

    Cell cell{state, look};
    tb.consult(s, cell);
    const auto* entries = table.at(cell);
    if (!entries || entries->empty()) return tb.reject(s, RejectReason::EmptyCell, cell, "");
    if (entries->size() > 1) return tb.reject(s, RejectReason::Conflict, cell, "");
    const LrAction act = *entries->begin();

    switch (act.kind) {
      case LrAction::Kind::Accept:
        s.kind = TraceStep::Kind::Accept;
        s.action = "accept";
        return tb.accept();
      case LrAction::Kind::Shift:
        if (look == kEndMarker) return tb.reject(s, RejectReason::InvalidEntry, cell, "cannot shift past the end of input");
        s.kind = TraceStep::Kind::Shift;
        s.action = "shift " + std::to_string(act.target);
        symbols.push_back(look);
        states.push_back(act.target);
        ++pos;
        break;
      case LrAction::Kind::Reduce: {
        if (act.target < 0 || static_cast<size_t>(act.target) >= g.productions().size()) {
          return tb.reject(s, RejectReason::InvalidEntry, cell, "");
        }
        const auto& p = g.production(act.target);
        s.action = "reduce " + g.production_text(act.target);
        if (p.rhs.size() > symbols.size()) {
          return tb.reject(s, RejectReason::StackUnderflow, cell,
                           "cannot pop " + std::to_string(p.rhs.size()) + " symbols");
        }
        symbols.resize(symbols.size() - p.rhs.size());
        states.resize(states.size() - p.rhs.size());
        Cell goto_cell{states.back(), p.lhs};
        tb.consult(s, goto_cell);
        const auto* gotos = table.at(goto_cell);
        if (!gotos || gotos->empty()) return tb.reject(s, RejectReason::MissingGoto, goto_cell, "");
        if (gotos->size() > 1) return tb.reject(s, RejectReason::Conflict, goto_cell, "");
        if (gotos->begin()->kind != LrAction::Kind::Goto) {
          return tb.reject(s, RejectReason::InvalidEntry, goto_cell, "");
        }
        s.kind = TraceStep::Kind::Reduce;
        symbols.push_back(p.lhs);
        states.push_back(gotos->begin()->target);
        break;
      }
      case LrAction::Kind::Goto:
        return tb.reject(s, RejectReason::InvalidEntry, cell, "goto entry in the action table");
    }
  }
}

bool cell_exercised(const ParseTrace& trace, Cell cell) {
  return trace.cells_exercised.count(cell) != 0;
}

std::vector<SymbolId> tokenize_input(const Grammar& g, std::string_view text) {
  std::vector<SymbolId> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    auto id = g.find(tok);
    if (!id || !g.is_terminal(*id)) {
      throw std::invalid_argument("'" + tok + "' is not a terminal of the grammar");
    }
    out.push_back(*id);
  }
  return out;
}

std::string join_tokens(const Grammar& g, const std::vector<SymbolId>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += g.name(tokens[i]);
  }
  return out;
}

std::string render_stack(const ParseTrace& trace, const TraceStep& step) {
  std::string out;
  for (size_t i = 0; i < step.stack.size(); ++i) {
    if (i && trace.kind == ParserKind::LL) out += ' ';
    out += step.stack[i];
  }
  return out;
}

std::string render_text(const ParseTrace& trace, const Grammar& g) {
  std::vector<std::string> stacks;
  std::vector<std::string> inputs;
  size_t stack_w = 5;
  size_t input_w = 5;
  for (const auto& st : trace.steps) {
    stacks.push_back(render_stack(trace, st));
    inputs.push_back(join_tokens(g, st.remaining));
    stack_w = std::max(stack_w, stacks.back().size());
    input_w = std::max(input_w, inputs.back().size());
  }
  std::ostringstream out;
  out << std::left << std::setw(5) << "STEP" << "  " << std::setw(static_cast<int>(stack_w))
      << "STACK" << "  " << std::setw(static_cast<int>(input_w)) << "INPUT" << "  ACTION\n";
  for (size_t i = 0; i < trace.steps.size(); ++i) {
    out << std::left << std::setw(5) << i << "  " << std::setw(static_cast<int>(stack_w))
        << stacks[i] << "  " << std::setw(static_cast<int>(input_w)) << inputs[i] << "  "
        << trace.steps[i].action << '\n';
  }
  return out.str();
}

}  // namespace parsetutor
