#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "parsetutor/grammar.hpp"

namespace parsetutor {

struct FirstFollow {
  std::map<SymbolId, std::set<SymbolId>> first;   // terminals, plus kEpsilon
  std::map<SymbolId, std::set<SymbolId>> follow;  // terminals, plus kEndMarker
  std::set<SymbolId> nullable;

  /// FIRST of a symbol sequence; contains kEpsilon iff every symbol is nullable.
  std::set<SymbolId> first_of(const Grammar& g, std::span<const SymbolId> seq) const;

  bool operator==(const FirstFollow&) const = default;
};

FirstFollow compute_first_follow(const Grammar& g);

/// A parse-table coordinate. For LL tables the row is a nonterminal id, for
/// SLR tables it is a state number. The column is always a symbol id.
struct Cell {
  int row = 0;
  SymbolId column = 0;

  auto operator<=>(const Cell&) const = default;
};

struct LlTable {
  std::vector<SymbolId> rows;     // nonterminals
  std::vector<SymbolId> columns;  // terminals, then $
  std::map<Cell, std::set<int>> cells;  // production indices; empty cells omitted

  const std::set<int>* at(Cell cell) const;
  /// Replaces a cell's contents; an empty set erases it.
  void set(Cell cell, std::set<int> entries);
  bool conflict_free() const;
  std::vector<Cell> conflicts() const;

  bool operator==(const LlTable&) const = default;
};

LlTable build_ll_table(const Grammar& g, const FirstFollow& ff);

struct LR0Item {
  int production = 0;
  int dot = 0;

  auto operator<=>(const LR0Item&) const = default;
};

bool is_complete(const Grammar& g, const LR0Item& item);
/// Symbol right after the dot, if any.
std::optional<SymbolId> next_symbol(const Grammar& g, const LR0Item& item);
std::string item_text(const Grammar& g, const LR0Item& item);

struct ItemSet {
  int id = 0;
  std::set<LR0Item> items;

  bool operator==(const ItemSet&) const = default;
};

std::set<LR0Item> closure(const Grammar& g, std::set<LR0Item> items);
std::set<LR0Item> goto_set(const Grammar& g, const std::set<LR0Item>& items, SymbolId x);

struct ViablePrefixDfa {
  std::vector<ItemSet> states;
  std::map<std::pair<int, SymbolId>, int> transitions;
  std::set<int> reduce_states;

  std::optional<int> transition(int state, SymbolId symbol) const;
  /// Outgoing edges of a state in symbol-id order.
  std::vector<std::pair<SymbolId, int>> edges(int state) const;

  bool operator==(const ViablePrefixDfa&) const = default;
};

/// States are numbered in breadth-first discovery order, exploring symbols in
/// id (first-appearance) order. Requires an augmented grammar.
ViablePrefixDfa canonical_collection(const Grammar& g);

struct LrAction {
  enum class Kind { Shift, Reduce, Accept, Goto };
  Kind kind = Kind::Shift;
  int target = 0;  // state for Shift/Goto, production index for Reduce

  auto operator<=>(const LrAction&) const = default;
};

std::string action_text(const LrAction& a);  // "s3", "r2", "acc", "5"

struct SlrTable {
  int state_count = 0;
  std::vector<SymbolId> action_columns;  // terminals, then $
  std::vector<SymbolId> goto_columns;    // nonterminals except the augmented start
  std::map<Cell, std::set<LrAction>> action;
  std::map<Cell, std::set<LrAction>> goto_table;

  /// Looks a cell up in whichever sub-table holds its column.
  const std::set<LrAction>* at(Cell cell) const;
  void set(Cell cell, std::set<LrAction> entries, bool goto_column);
  bool conflict_free() const;
  std::vector<Cell> conflicts() const;

  bool operator==(const SlrTable&) const = default;
};

SlrTable build_slr_table(const Grammar& g, const ViablePrefixDfa& dfa, const FirstFollow& ff);

/// Everything the tutor precomputes for one grammar.
struct Analyses {
  Grammar grammar;    // as written
  Grammar augmented;  // production i of grammar is production i + 1 here
  TerminalOnlyMap terminal_only;
  FirstFollow ff;      // over the original grammar, drives the LL table
  FirstFollow ff_aug;  // over the augmented grammar, drives the SLR table
  LlTable ll;
  ViablePrefixDfa dfa;
  SlrTable slr;
};

Analyses analyze(const Grammar& g);

}  // namespace parsetutor
