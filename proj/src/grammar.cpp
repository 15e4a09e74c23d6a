#include "parsetutor/grammar.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>

namespace parsetutor {

GrammarError::GrammarError(const std::string& what, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " +
                                        std::to_string(column) + ": " + what
                                  : what),
      line_(line),
      column_(column) {}

Grammar::Grammar(std::vector<Symbol> symbols, std::vector<Production> productions,
                 SymbolId start, bool augmented)
    : symbols_(std::move(symbols)),
      productions_(std::move(productions)),
      start_(start),
      augmented_(augmented) {
  if (symbols_.size() < 2 || symbols_[kEpsilon].kind != SymbolKind::Epsilon ||
      symbols_[kEndMarker].kind != SymbolKind::EndMarker) {
    throw GrammarError("symbol table must begin with epsilon and the end marker");
  }
  for (size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i].id != static_cast<SymbolId>(i)) throw GrammarError("symbol ids must be dense");
    if (symbols_[i].name.empty()) throw GrammarError("symbol with empty name");
  }
  if (productions_.empty()) throw GrammarError("grammar has no productions");
  if (!is_nonterminal(start_)) throw GrammarError("start symbol must be a nonterminal");
  std::set<SymbolId> defined;
  for (size_t i = 0; i < productions_.size(); ++i) {
    const auto& p = productions_[i];
    if (p.index != static_cast<int>(i)) throw GrammarError("production indices must be dense");
    if (!is_nonterminal(p.lhs)) throw GrammarError("production lhs must be a nonterminal");
    for (SymbolId s : p.rhs) {
      if (s < 0 || static_cast<size_t>(s) >= symbols_.size() || s == kEpsilon ||
          s == kEndMarker) {
        throw GrammarError("invalid symbol in right-hand side of " + name(p.lhs));
      }
    }
    defined.insert(p.lhs);
  }
  for (const auto& s : symbols_) {
    if (s.kind == SymbolKind::Nonterminal && !defined.count(s.id)) {
      throw GrammarError("nonterminal " + s.name + " has no productions");
    }
  }
  if (augmented_) {
    const auto& p0 = productions_.front();
    if (p0.lhs != start_ || p0.rhs.size() != 1) {
      throw GrammarError("augmented grammar must start with S' -> S");
    }
    for (const auto& p : productions_) {
      if (std::find(p.rhs.begin(), p.rhs.end(), start_) != p.rhs.end()) {
        throw GrammarError("augmented start symbol appears on a right-hand side");
      }
    }
  }
}

std::optional<SymbolId> Grammar::find(std::string_view name) const {
  for (const auto& s : symbols_) {
    if (s.name == name) return s.id;
  }
  return std::nullopt;
}

std::vector<SymbolId> Grammar::terminals() const {
  std::vector<SymbolId> out;
  for (const auto& s : symbols_) {
    if (s.kind == SymbolKind::Terminal) out.push_back(s.id);
  }
  return out;
}

std::vector<SymbolId> Grammar::nonterminals() const {
  std::vector<SymbolId> out;
  for (const auto& s : symbols_) {
    if (s.kind == SymbolKind::Nonterminal) out.push_back(s.id);
  }
  return out;
}

std::vector<int> Grammar::productions_of(SymbolId lhs) const {
  std::vector<int> out;
  for (const auto& p : productions_) {
    if (p.lhs == lhs) out.push_back(p.index);
  }
  return out;
}

std::string Grammar::sequence_text(std::span<const SymbolId> seq) const {
  if (seq.empty()) return "ε";
  std::string out;
  for (size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ' ';
    out += name(seq[i]);
  }
  return out;
}

std::string Grammar::production_text(int index) const {
  const auto& p = production(index);
  return name(p.lhs) + " -> " + sequence_text(p.rhs);
}

namespace {

struct Token {
  std::string text;
  int column;
};

std::vector<Token> split_line(std::string_view line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    out.push_back({std::string(line.substr(i, j - i)), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

bool is_reserved(std::string_view tok) {
  return tok == "->" || tok == "|" || tok == kEpsilonToken || tok == kEndMarkerToken;
}

}  // namespace

Grammar parse_grammar(std::string_view text) {
  struct RawAlt {
    std::vector<std::string> symbols;
    int line;
    int column;
  };
  struct RawRule {
    std::string lhs;
    RawAlt alt;
  };

  std::vector<RawRule> rules;
  std::vector<std::string> order;
  std::unordered_map<std::string, int> seen;
  auto intern = [&](const std::string& name) {
    if (seen.emplace(name, static_cast<int>(order.size())).second) order.push_back(name);
  };

  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    auto tokens = split_line(line);
    if (tokens.empty() || tokens.front().text.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    const Token& lhs = tokens.front();
    if (is_reserved(lhs.text)) {
      throw GrammarError("expected a nonterminal name, found '" + lhs.text + "'", line_no,
                         lhs.column);
    }
    if (tokens.size() < 2 || tokens[1].text != "->") {
      int col = tokens.size() < 2 ? static_cast<int>(line.size()) + 1 : tokens[1].column;
      throw GrammarError("expected '->' after " + lhs.text, line_no, col);
    }
    intern(lhs.text);

    RawAlt current{{}, line_no, tokens.size() > 2 ? tokens[2].column : tokens[1].column};
    bool saw_eps = false;
    auto finish_alt = [&](int col) {
      if (current.symbols.empty() && !saw_eps) {
        throw GrammarError("empty alternative (write 'eps' for an empty right-hand side)",
                           line_no, col);
      }
      rules.push_back({lhs.text, current});
      current = RawAlt{{}, line_no, col};
      saw_eps = false;
    };
    for (size_t i = 2; i < tokens.size(); ++i) {
      const Token& tok = tokens[i];
      if (tok.text == "|") {
        finish_alt(tok.column);
        continue;
      }
      if (tok.text == "->") throw GrammarError("unexpected '->'", line_no, tok.column);
      if (tok.text == kEndMarkerToken) {
        throw GrammarError("'$' is reserved for the end marker and cannot be used as a symbol",
                           line_no, tok.column);
      }
      if (tok.text == kEpsilonToken) {
        if (saw_eps || !current.symbols.empty()) {
          throw GrammarError("'eps' must be the only symbol of its alternative", line_no,
                             tok.column);
        }
        saw_eps = true;
        continue;
      }
      if (saw_eps) {
        throw GrammarError("'eps' must be the only symbol of its alternative", line_no,
                           tok.column);
      }
      intern(tok.text);
      current.symbols.push_back(tok.text);
    }
    finish_alt(static_cast<int>(line.size()) + 1);
    if (end == text.size()) break;
  }
  if (rules.empty()) throw GrammarError("grammar is empty");

  std::set<std::string> lhs_names;
  for (const auto& r : rules) lhs_names.insert(r.lhs);

  std::vector<Symbol> symbols{{kEpsilon, std::string(kEpsilonToken), SymbolKind::Epsilon},
                              {kEndMarker, std::string(kEndMarkerToken), SymbolKind::EndMarker}};
  std::unordered_map<std::string, SymbolId> ids;
  for (const auto& name : order) {
    SymbolId id = static_cast<SymbolId>(symbols.size());
    symbols.push_back({id, name,
                       lhs_names.count(name) ? SymbolKind::Nonterminal : SymbolKind::Terminal});
    ids[name] = id;
  }

  std::vector<Production> productions;
  std::set<std::pair<SymbolId, std::vector<SymbolId>>> unique;
  for (const auto& r : rules) {
    Production p{static_cast<int>(productions.size()), ids.at(r.lhs), {}};
    for (const auto& s : r.alt.symbols) p.rhs.push_back(ids.at(s));
    if (!unique.emplace(p.lhs, p.rhs).second) {
      throw GrammarError("duplicate production " + r.lhs, r.alt.line, r.alt.column);
    }
    productions.push_back(std::move(p));
  }
  return Grammar(std::move(symbols), std::move(productions), ids.at(rules.front().lhs), false);
}

std::string to_text(const Grammar& g) {
  std::ostringstream out;
  const auto& prods = g.productions();
  for (size_t i = 0; i < prods.size();) {
    out << g.name(prods[i].lhs) << " ->";
    size_t j = i;
    for (; j < prods.size() && prods[j].lhs == prods[i].lhs; ++j) {
      if (j != i) out << " |";
      if (prods[j].rhs.empty()) {
        out << ' ' << kEpsilonToken;
      } else {
        for (SymbolId s : prods[j].rhs) out << ' ' << g.name(s);
      }
    }
    out << '\n';
    i = j;
  }
  return out.str();
}

Grammar augment(const Grammar& g) {
  if (g.augmented()) throw GrammarError("grammar is already augmented");
  std::string name = g.name(g.start()) + "'";
  while (g.find(name)) name += "'";

  std::vector<Symbol> symbols = g.symbols();
  SymbolId fresh = static_cast<SymbolId>(symbols.size());
  symbols.push_back({fresh, name, SymbolKind::Nonterminal});

  std::vector<Production> productions{{0, fresh, {g.start()}}};
  for (const auto& p : g.productions()) {
    productions.push_back({p.index + 1, p.lhs, p.rhs});
  }
  return Grammar(std::move(symbols), std::move(productions), fresh, true);
}

const std::vector<SymbolId>* TerminalOnlyMap::find(SymbolId id) const {
  auto it = strings_.find(id);
  return it == strings_.end() ? nullptr : &it->second;
}

const std::vector<SymbolId>& TerminalOnlyMap::at(SymbolId id) const {
  auto it = strings_.find(id);
  if (it == strings_.end()) {
    throw std::out_of_range("no terminal-only string for symbol " + std::to_string(id));
  }
  return it->second;
}

std::optional<int> TerminalOnlyMap::chosen_production(SymbolId nonterminal) const {
  auto it = chosen_.find(nonterminal);
  if (it == chosen_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::vector<SymbolId>> TerminalOnlyMap::expand(
    std::span<const SymbolId> seq) const {
  std::vector<SymbolId> out;
  for (SymbolId s : seq) {
    auto* part = find(s);
    if (!part) return std::nullopt;
    out.insert(out.end(), part->begin(), part->end());
  }
  return out;
}

TerminalOnlyMap terminal_only_strings(const Grammar& g) {
  TerminalOnlyMap map;
  for (SymbolId t : g.terminals()) map.strings_[t] = {t};

  // Jacobi rounds: every nonterminal relaxes against the previous round's
  // strings, so a round's result never depends on nonterminal order.
  bool changed = true;
  while (changed) {
    changed = false;
    auto previous = map.strings_;
    for (SymbolId nt : g.nonterminals()) {
      std::optional<std::vector<SymbolId>> best;
      int best_prod = -1;
      for (int pi : g.productions_of(nt)) {
        std::vector<SymbolId> candidate;
        bool resolvable = true;
        for (SymbolId s : g.production(pi).rhs) {
          auto it = previous.find(s);
          if (it == previous.end()) {
            resolvable = false;
            break;
          }
          candidate.insert(candidate.end(), it->second.begin(), it->second.end());
        }
        if (resolvable && (!best || candidate.size() < best->size())) {
          best = std::move(candidate);
          best_prod = pi;
        }
      }
      if (!best) continue;
      auto current = map.strings_.find(nt);
      if (current == map.strings_.end() || best->size() < current->second.size()) {
        map.strings_[nt] = std::move(*best);
        map.chosen_[nt] = best_prod;
        changed = true;
      }
    }
  }
  return map;
}

std::vector<Diagnostic> validate(const Grammar& g) {
  std::vector<Diagnostic> out;

  std::set<SymbolId> reachable{g.start()};
  std::deque<SymbolId> queue{g.start()};
  while (!queue.empty()) {
    SymbolId a = queue.front();
    queue.pop_front();
    for (int pi : g.productions_of(a)) {
      for (SymbolId s : g.production(pi).rhs) {
        if (g.is_nonterminal(s) && reachable.insert(s).second) queue.push_back(s);
      }
    }
  }
  for (SymbolId nt : g.nonterminals()) {
    if (!reachable.count(nt)) {
      out.push_back({Diagnostic::Kind::Unreachable, nt,
                     "nonterminal " + g.name(nt) + " is unreachable from " + g.name(g.start())});
    }
  }

  auto tos = terminal_only_strings(g);
  for (SymbolId nt : g.nonterminals()) {
    if (!tos.contains(nt)) {
      out.push_back({Diagnostic::Kind::Unproductive, nt,
                     "nonterminal " + g.name(nt) + " derives no terminal string"});
    }
  }

  std::map<std::vector<SymbolId>, int> first_owner;
  for (const auto& p : g.productions()) {
    if (p.rhs.empty()) continue;
    auto [it, inserted] = first_owner.emplace(p.rhs, p.index);
    if (!inserted && g.production(it->second).lhs != p.lhs) {
      out.push_back({Diagnostic::Kind::DuplicateRhs, p.lhs,
                     "productions " + g.production_text(it->second) + " and " +
                         g.production_text(p.index) + " share a right-hand side"});
    }
  }
  return out;
}

}  // namespace parsetutor
