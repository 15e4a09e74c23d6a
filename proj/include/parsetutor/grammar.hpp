#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace parsetutor {

using SymbolId = int;

enum class SymbolKind { Terminal, Nonterminal, Epsilon, EndMarker };

struct Symbol {
  SymbolId id = 0;
  std::string name;
  SymbolKind kind = SymbolKind::Terminal;

  bool operator==(const Symbol&) const = default;
};

/// Every grammar reserves these two ids.
inline constexpr SymbolId kEpsilon = 0;
inline constexpr SymbolId kEndMarker = 1;

inline constexpr std::string_view kEpsilonToken = "eps";
inline constexpr std::string_view kEndMarkerToken = "$";

struct Production {
  int index = 0;
  SymbolId lhs = 0;
  std::vector<SymbolId> rhs;  // empty encodes an epsilon production

  bool operator==(const Production&) const = default;
};

/// Raised for malformed grammar text. Line and column are 1-based; 0 means
/// "not tied to a position".
class GrammarError : public std::runtime_error {
 public:
  GrammarError(const std::string& what, int line = 0, int column = 0);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class Grammar {
 public:
  Grammar() = default;
  Grammar(std::vector<Symbol> symbols, std::vector<Production> productions,
          SymbolId start, bool augmented);

  const std::vector<Symbol>& symbols() const { return symbols_; }
  const Symbol& symbol(SymbolId id) const { return symbols_.at(static_cast<size_t>(id)); }
  const std::string& name(SymbolId id) const { return symbol(id).name; }
  std::optional<SymbolId> find(std::string_view name) const;

  bool is_terminal(SymbolId id) const { return symbol(id).kind == SymbolKind::Terminal; }
  bool is_nonterminal(SymbolId id) const {
    return symbol(id).kind == SymbolKind::Nonterminal;
  }

  /// Grammar terminals in id order (excludes epsilon and the end marker).
  std::vector<SymbolId> terminals() const;
  std::vector<SymbolId> nonterminals() const;

  const std::vector<Production>& productions() const { return productions_; }
  const Production& production(int index) const {
    return productions_.at(static_cast<size_t>(index));
  }
  std::vector<int> productions_of(SymbolId lhs) const;

  SymbolId start() const { return start_; }
  bool augmented() const { return augmented_; }

  /// "A -> x y", with "ε" for an empty right-hand side.
  std::string production_text(int index) const;
  std::string sequence_text(std::span<const SymbolId> seq) const;

  bool operator==(const Grammar&) const = default;

 private:
  std::vector<Symbol> symbols_;
  std::vector<Production> productions_;
  SymbolId start_ = 0;
  bool augmented_ = false;
};

Grammar parse_grammar(std::string_view text);

/// Inverse of parse_grammar for unaugmented grammars.
std::string to_text(const Grammar& g);

/// Prepends S' -> S as production 0. Throws GrammarError if already augmented.
Grammar augment(const Grammar& g);

/// Shortest terminal string derivable from each symbol.
class TerminalOnlyMap {
 public:
  const std::vector<SymbolId>* find(SymbolId id) const;
  const std::vector<SymbolId>& at(SymbolId id) const;
  bool contains(SymbolId id) const { return strings_.count(id) != 0; }

  /// Production chosen for a nonterminal, if it is productive.
  std::optional<int> chosen_production(SymbolId nonterminal) const;

  /// Concatenated terminal-only strings; nullopt if any symbol is unproductive.
  std::optional<std::vector<SymbolId>> expand(std::span<const SymbolId> seq) const;

  const std::map<SymbolId, std::vector<SymbolId>>& entries() const { return strings_; }

 private:
  friend TerminalOnlyMap terminal_only_strings(const Grammar& g);
  std::map<SymbolId, std::vector<SymbolId>> strings_;
  std::map<SymbolId, int> chosen_;
};

TerminalOnlyMap terminal_only_strings(const Grammar& g);

struct Diagnostic {
  enum class Kind { Unreachable, Unproductive, DuplicateRhs };
  Kind kind;
  SymbolId symbol;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

/// Warnings only; never throws on a well-formed grammar.
std::vector<Diagnostic> validate(const Grammar& g);

}  // namespace parsetutor
