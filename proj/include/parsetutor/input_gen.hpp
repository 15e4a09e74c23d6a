#pragma once

#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "parsetutor/analysis.hpp"
#include "parsetutor/grammar.hpp"
#include "parsetutor/parse_sim.hpp"

namespace parsetutor {

/// Vertices are grammar symbols; lhs -> x for every x on a right-hand side of
/// lhs. Each edge is labelled with the shortest production creating it.
struct SymbolGraph {
  struct Edge {
    SymbolId from = 0;
    SymbolId to = 0;
    int production = 0;

    bool operator==(const Edge&) const = default;
  };

  std::vector<SymbolId> vertices;
  std::vector<Edge> edges;  // sorted by (from, production, to)

  const Edge* edge(SymbolId from, SymbolId to) const;
  std::vector<Edge> out_edges(SymbolId from) const;
  /// Unit-weight shortest path; ties follow (production index, symbol id).
  std::optional<std::vector<Edge>> shortest_path(SymbolId from, SymbolId to) const;
};

SymbolGraph build_symbol_graph(const Grammar& g);

class GenerationError : public std::runtime_error {
 public:
  enum class Kind {
    ConflictedTable,
    EmptyCell,
    Unreachable,
    BudgetExceeded,
    ReduceContextEmpty,
    CycleExhausted,
    VerificationFailed,
  };

  GenerationError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// One row of the generator's configuration log: stack, partial string, and
/// either the candidate next symbols (X) or the guessed prefix (Pref).
struct GenConfig {
  std::string stack;
  std::string partial;
  std::string third;

  bool operator==(const GenConfig&) const = default;
};

struct Refinement {
  int rule = 0;  // 0: stack shape filter, 1-3: the three refinement rules
  std::vector<int> removed_after;   // s_a
  std::vector<int> removed_before;  // s_b
  std::string note;
};

struct ReduceLevel {
  Cell cell;
  int production = 0;
  std::vector<int> before_states;  // S_B as read off the goto table
  std::vector<int> after_states;   // S_A
  std::vector<Refinement> refinements;
};

struct ReduceSetup {
  std::vector<ReduceLevel> levels;
  int chosen_after = -1;
  int chosen_before = -1;
  std::vector<GenConfig> configs;  // stack / PStr / Pref rows
};

enum class GenMethod { Heuristic, Search };

struct GenResult {
  std::vector<SymbolId> tokens;
  GenMethod method = GenMethod::Heuristic;
  ParseTrace trace;  // the verifying parse on the correct table
  std::string heuristic_failure;

  // LL: sentential forms visited while expanding the two paths.
  std::vector<std::vector<SymbolId>> ll_forms;
  // LR: stack / PStr / X rows in generation order.
  std::vector<GenConfig> configs;
  std::optional<ReduceSetup> reduce;
  std::set<std::pair<int, SymbolId>> used_choices;
  std::vector<std::pair<int, SymbolId>> choice_log;  // used_choices in decision order
  size_t iterations = 0;
};

struct GenOptions {
  bool allow_search = true;
  // Replace a verified heuristic string by a search result when one of less
  // than half its length exists.
  bool length_guard = true;
  size_t search_max_length = 48;
  size_t search_budget = 50000;
};

/// Budget for the LR generation loop: 50 * |states| * |terminals|.
size_t lr_generation_budget(const Analyses& a);

GenResult gen_ll_string(const Analyses& a, Cell cell, const GenOptions& opts = {});
GenResult gen_lr_shift_string(const Analyses& a, Cell cell, const GenOptions& opts = {});
GenResult gen_lr_reduce_string(const Analyses& a, Cell cell, const GenOptions& opts = {});
/// Dispatches on the correct entry of an SLR cell.
GenResult gen_lr_string(const Analyses& a, Cell cell, const GenOptions& opts = {});
GenResult generate_string(const Analyses& a, ParserKind kind, Cell cell,
                          const GenOptions& opts = {});

/// Best-first search over leftmost sentential forms, ordered by the length of
/// their terminal-only completion. Returns the first (hence shortest) accepted
/// string whose correct-table trace exercises the cell and satisfies `accept`.
std::optional<std::vector<SymbolId>> search_exercising_string(
    const Analyses& a, ParserKind kind, Cell cell, size_t max_length, size_t budget,
    const std::function<bool(const std::vector<SymbolId>&)>& accept = {});

ParseTrace parse_with_correct_table(const Analyses& a, ParserKind kind,
                                    const std::vector<SymbolId>& input);

}  // namespace parsetutor
