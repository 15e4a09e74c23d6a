#include "parsetutor/analysis.hpp"

#include <deque>

namespace parsetutor {

std::set<SymbolId> FirstFollow::first_of(const Grammar& g,
                                         std::span<const SymbolId> seq) const {
  std::set<SymbolId> out;
  for (SymbolId s : seq) {
    if (!g.is_nonterminal(s)) {
      out.insert(s);
      return out;
    }
    for (SymbolId t : first.at(s)) {
      if (t != kEpsilon) out.insert(t);
    }
    if (!nullable.count(s)) return out;
  }
  out.insert(kEpsilon);
  return out;
}

FirstFollow compute_first_follow(const Grammar& g) {
  FirstFollow ff;
  for (SymbolId nt : g.nonterminals()) {
    ff.first[nt];
    ff.follow[nt];
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : g.productions()) {
      auto seq_first = ff.first_of(g, p.rhs);
      auto& target = ff.first[p.lhs];
      for (SymbolId t : seq_first) changed |= target.insert(t).second;
      if (seq_first.count(kEpsilon)) changed |= ff.nullable.insert(p.lhs).second;
    }
  }

  ff.follow[g.start()].insert(kEndMarker);
  changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : g.productions()) {
      for (size_t i = 0; i < p.rhs.size(); ++i) {
        SymbolId b = p.rhs[i];
        if (!g.is_nonterminal(b)) continue;
        auto rest = std::span<const SymbolId>(p.rhs).subspan(i + 1);
        auto rest_first = ff.first_of(g, rest);
        auto& target = ff.follow[b];
        for (SymbolId t : rest_first) {
          if (t != kEpsilon) changed |= target.insert(t).second;
        }
        if (rest_first.count(kEpsilon)) {
          // Copy: target may alias follow[p.lhs].
          auto lhs_follow = ff.follow[p.lhs];
          for (SymbolId t : lhs_follow) changed |= target.insert(t).second;
        }
      }
    }
  }
  return ff;
}

const std::set<int>* LlTable::at(Cell cell) const {
  auto it = cells.find(cell);
  return it == cells.end() ? nullptr : &it->second;
}

void LlTable::set(Cell cell, std::set<int> entries) {
  if (entries.empty()) {
    cells.erase(cell);
  } else {
    cells[cell] = std::move(entries);
  }
}

bool LlTable::conflict_free() const { return conflicts().empty(); }

std::vector<Cell> LlTable::conflicts() const {
  std::vector<Cell> out;
  for (const auto& [cell, entries] : cells) {
    if (entries.size() > 1) out.push_back(cell);
  }
  return out;
}

LlTable build_ll_table(const Grammar& g, const FirstFollow& ff) {
  LlTable table;
  table.rows = g.nonterminals();
  table.columns = g.terminals();
  table.columns.push_back(kEndMarker);
  for (const auto& p : g.productions()) {
    auto alpha_first = ff.first_of(g, p.rhs);
    for (SymbolId t : alpha_first) {
      if (t != kEpsilon) table.cells[{p.lhs, t}].insert(p.index);
    }
    if (alpha_first.count(kEpsilon)) {
      for (SymbolId t : ff.follow.at(p.lhs)) table.cells[{p.lhs, t}].insert(p.index);
    }
  }
  return table;
}

bool is_complete(const Grammar& g, const LR0Item& item) {
  return static_cast<size_t>(item.dot) == g.production(item.production).rhs.size();
}

std::optional<SymbolId> next_symbol(const Grammar& g, const LR0Item& item) {
  const auto& rhs = g.production(item.production).rhs;
  if (static_cast<size_t>(item.dot) >= rhs.size()) return std::nullopt;
  return rhs[static_cast<size_t>(item.dot)];
}

std::string item_text(const Grammar& g, const LR0Item& item) {
  const auto& p = g.production(item.production);
  std::string out = g.name(p.lhs) + " ->";
  for (size_t i = 0; i <= p.rhs.size(); ++i) {
    if (static_cast<int>(i) == item.dot) out += " ·";
    if (i < p.rhs.size()) out += " " + g.name(p.rhs[i]);
  }
  return out;
}

std::set<LR0Item> closure(const Grammar& g, std::set<LR0Item> items) {
  std::deque<LR0Item> work(items.begin(), items.end());
  while (!work.empty()) {
    LR0Item item = work.front();
    work.pop_front();
    auto next = next_symbol(g, item);
    if (!next || !g.is_nonterminal(*next)) continue;
    for (int pi : g.productions_of(*next)) {
      LR0Item fresh{pi, 0};
      if (items.insert(fresh).second) work.push_back(fresh);
    }
  }
  return items;
}

std::set<LR0Item> goto_set(const Grammar& g, const std::set<LR0Item>& items, SymbolId x) {
  std::set<LR0Item> kernel;
  for (const auto& item : items) {
    if (next_symbol(g, item) == x) kernel.insert({item.production, item.dot + 1});
  }
  if (kernel.empty()) return kernel;
  return closure(g, std::move(kernel));
}

std::optional<int> ViablePrefixDfa::transition(int state, SymbolId symbol) const {
  auto it = transitions.find({state, symbol});
  if (it == transitions.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<SymbolId, int>> ViablePrefixDfa::edges(int state) const {
  std::vector<std::pair<SymbolId, int>> out;
  for (auto it = transitions.lower_bound({state, 0});
       it != transitions.end() && it->first.first == state; ++it) {
    out.emplace_back(it->first.second, it->second);
  }
  return out;
}

ViablePrefixDfa canonical_collection(const Grammar& g) {
  if (!g.augmented()) throw GrammarError("canonical collection requires an augmented grammar");
  ViablePrefixDfa dfa;
  std::map<std::set<LR0Item>, int> index;

  auto add_state = [&](std::set<LR0Item> items) {
    auto [it, inserted] = index.emplace(items, static_cast<int>(dfa.states.size()));
    if (inserted) dfa.states.push_back({it->second, std::move(items)});
    return it->second;
  };

  add_state(closure(g, {{0, 0}}));
  for (size_t i = 0; i < dfa.states.size(); ++i) {
    for (const auto& sym : g.symbols()) {
      if (sym.kind != SymbolKind::Terminal && sym.kind != SymbolKind::Nonterminal) continue;
      auto next = goto_set(g, dfa.states[i].items, sym.id);
      if (next.empty()) continue;
      int target = add_state(std::move(next));
      dfa.transitions[{static_cast<int>(i), sym.id}] = target;
    }
  }
  for (const auto& st : dfa.states) {
    for (const auto& item : st.items) {
      if (is_complete(g, item)) {
        dfa.reduce_states.insert(st.id);
        break;
      }
    }
  }
  return dfa;
}

std::string action_text(const LrAction& a) {
  switch (a.kind) {
    case LrAction::Kind::Shift:
      return "s" + std::to_string(a.target);
    case LrAction::Kind::Reduce:
      return "r" + std::to_string(a.target);
    case LrAction::Kind::Accept:
      return "acc";
    case LrAction::Kind::Goto:
      return std::to_string(a.target);
  }
  return "?";
}

const std::set<LrAction>* SlrTable::at(Cell cell) const {
  if (auto it = action.find(cell); it != action.end()) return &it->second;
  if (auto it = goto_table.find(cell); it != goto_table.end()) return &it->second;
  return nullptr;
}

void SlrTable::set(Cell cell, std::set<LrAction> entries, bool goto_column) {
  auto& sub = goto_column ? goto_table : action;
  if (entries.empty()) {
    sub.erase(cell);
  } else {
    sub[cell] = std::move(entries);
  }
}

bool SlrTable::conflict_free() const { return conflicts().empty(); }

std::vector<Cell> SlrTable::conflicts() const {
  std::vector<Cell> out;
  for (const auto* sub : {&action, &goto_table}) {
    for (const auto& [cell, entries] : *sub) {
      if (entries.size() > 1) out.push_back(cell);
    }
  }
  return out;
}

SlrTable build_slr_table(const Grammar& g, const ViablePrefixDfa& dfa, const FirstFollow& ff) {
  if (!g.augmented()) throw GrammarError("SLR table requires an augmented grammar");
  SlrTable table;
  table.state_count = static_cast<int>(dfa.states.size());
  table.action_columns = g.terminals();
  table.action_columns.push_back(kEndMarker);
  for (SymbolId nt : g.nonterminals()) {
    if (nt != g.start()) table.goto_columns.push_back(nt);
  }

  for (const auto& [key, target] : dfa.transitions) {
    auto [state, sym] = key;
    if (g.is_terminal(sym)) {
      table.action[{state, sym}].insert({LrAction::Kind::Shift, target});
    } else {
      table.goto_table[{state, sym}].insert({LrAction::Kind::Goto, target});
    }
  }
  for (const auto& st : dfa.states) {
    for (const auto& item : st.items) {
      if (!is_complete(g, item)) continue;
      const auto& p = g.production(item.production);
      if (p.lhs == g.start()) {
        table.action[{st.id, kEndMarker}].insert({LrAction::Kind::Accept, 0});
        continue;
      }
      for (SymbolId t : ff.follow.at(p.lhs)) {
        table.action[{st.id, t}].insert({LrAction::Kind::Reduce, p.index});
      }
    }
  }
  return table;
}

Analyses analyze(const Grammar& g) {
  Analyses a{g, augment(g), terminal_only_strings(g), {}, {}, {}, {}, {}};
  a.ff = compute_first_follow(a.grammar);
  a.ff_aug = compute_first_follow(a.augmented);
  a.ll = build_ll_table(a.grammar, a.ff);
  a.dfa = canonical_collection(a.augmented);
  a.slr = build_slr_table(a.augmented, a.dfa, a.ff_aug);
  return a;
}

}  // namespace parsetutor
