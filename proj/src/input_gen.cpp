#include "parsetutor/input_gen.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <tuple>

namespace parsetutor {

const SymbolGraph::Edge* SymbolGraph::edge(SymbolId from, SymbolId to) const {
  for (const auto& e : edges) {
    if (e.from == from && e.to == to) return &e;
  }
  return nullptr;
}

std::vector<SymbolGraph::Edge> SymbolGraph::out_edges(SymbolId from) const {
  std::vector<Edge> out;
  for (const auto& e : edges) {
    if (e.from == from) out.push_back(e);
  }
  return out;
}

std::optional<std::vector<SymbolGraph::Edge>> SymbolGraph::shortest_path(SymbolId from,
                                                                         SymbolId to) const {
  if (from == to) return std::vector<Edge>{};
  std::map<SymbolId, Edge> parent;
  std::set<SymbolId> seen{from};
  std::deque<SymbolId> queue{from};
  while (!queue.empty()) {
    SymbolId u = queue.front();
    queue.pop_front();
    for (const auto& e : out_edges(u)) {
      if (!seen.insert(e.to).second) continue;
      parent[e.to] = e;
      if (e.to == to) {
        std::vector<Edge> path;
        for (SymbolId v = to; v != from; v = parent.at(v).from) path.push_back(parent.at(v));
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(e.to);
    }
  }
  return std::nullopt;
}

SymbolGraph build_symbol_graph(const Grammar& g) {
  SymbolGraph graph;
  for (const auto& s : g.symbols()) {
    if (s.kind == SymbolKind::Terminal || s.kind == SymbolKind::Nonterminal) {
      graph.vertices.push_back(s.id);
    }
  }
  std::map<std::pair<SymbolId, SymbolId>, int> label;
  for (const auto& p : g.productions()) {
    for (SymbolId x : p.rhs) {
      auto [it, inserted] = label.emplace(std::make_pair(p.lhs, x), p.index);
      if (!inserted && p.rhs.size() < g.production(it->second).rhs.size()) it->second = p.index;
    }
  }
  for (const auto& [key, prod] : label) graph.edges.push_back({key.first, key.second, prod});
  std::sort(graph.edges.begin(), graph.edges.end(), [](const auto& a, const auto& b) {
    return std::tie(a.from, a.production, a.to) < std::tie(b.from, b.production, b.to);
  });
  return graph;
}

ParseTrace parse_with_correct_table(const Analyses& a, ParserKind kind,
                                    const std::vector<SymbolId>& input) {
  return kind == ParserKind::LL ? ll_parse(a.ll, a.grammar, input)
                                : lr_parse(a.slr, a.augmented, input);
}

size_t lr_generation_budget(const Analyses& a) {
  return 50 * a.dfa.states.size() * std::max<size_t>(a.grammar.terminals().size(), 1);
}

namespace {

using Kind = GenerationError::Kind;

struct Failure {
  Kind kind;
  std::string message;
};

std::string compact(const Grammar& g, const std::vector<SymbolId>& seq) {
  std::string out;
  for (SymbolId s : seq) out += g.name(s);
  return out;
}

std::string set_text(const Grammar& g, const std::set<SymbolId>& set) {
  // $ is listed last, as in the tables.
  std::string out = "{";
  bool first = true;
  auto emit = [&](SymbolId s) {
    if (!first) out += ", ";
    out += g.name(s);
    first = false;
  };
  for (SymbolId s : set) {
    if (s != kEndMarker) emit(s);
  }
  if (set.count(kEndMarker)) emit(kEndMarker);
  return out + "}";
}

const LrAction* single_entry(const SlrTable& table, Cell cell) {
  const auto* entries = table.at(cell);
  if (!entries || entries->size() != 1) return nullptr;
  return &*entries->begin();
}

/// Shortest DFA path from `from` to the first state satisfying `goal`.
/// Ties prefer terminal edges, then lower symbol ids.
template <typename Goal>
std::optional<std::vector<std::pair<SymbolId, int>>> dfa_path(const Grammar& g,
                                                              const ViablePrefixDfa& dfa,
                                                              int from, Goal goal) {
  if (goal(from)) return std::vector<std::pair<SymbolId, int>>{};
  std::map<int, std::pair<int, SymbolId>> parent;
  std::set<int> seen{from};
  std::deque<int> queue{from};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    auto edges = dfa.edges(u);
    std::stable_partition(edges.begin(), edges.end(),
                          [&](const auto& e) { return g.is_terminal(e.first); });
    for (auto [sym, v] : edges) {
      if (!seen.insert(v).second) continue;
      parent[v] = {u, sym};
      if (goal(v)) {
        std::vector<std::pair<SymbolId, int>> path;
        for (int w = v; w != from; w = parent.at(w).first) path.emplace_back(parent.at(w).second, w);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(v);
    }
  }
  return std::nullopt;
}

int dot_distance(const Grammar& g, const ItemSet& st) {
  int best = -1;
  for (const auto& item : st.items) {
    int d = static_cast<int>(g.production(item.production).rhs.size()) - item.dot;
    if (best < 0 || d < best) best = d;
  }
  return best;
}

/// Working state of the LR generator: the parser stack being assembled, the
/// partial input (PStr), the candidate next symbols (X), and the shift
/// choices already made.
class LrGenerator {
 public:
  explicit LrGenerator(const Analyses& a)
      : a_(a), g_(a.augmented), budget_(lr_generation_budget(a)) {
    states_.push_back(0);
  }

  void reset_stack(std::vector<int> states, std::vector<SymbolId> symbols) {
    states_ = std::move(states);
    symbols_ = std::move(symbols);
  }

  void push(SymbolId sym, int state) {
    symbols_.push_back(sym);
    states_.push_back(state);
  }

  std::optional<Failure> append_terminal_only(SymbolId sym) {
    const auto* part = a_.terminal_only.find(sym);
    if (!part) return Failure{Kind::Unreachable, g_.name(sym) + " derives no terminal string"};
    partial_.insert(partial_.end(), part->begin(), part->end());
    return std::nullopt;
  }

  void append(const std::vector<SymbolId>& tokens) {
    partial_.insert(partial_.end(), tokens.begin(), tokens.end());
  }

  void end_input() {
    ended_ = true;
    candidates_.reset();
  }

  /// Pushes every edge of a DFA path, expanding nonterminal labels.
  std::optional<Failure> follow_path(const std::vector<std::pair<SymbolId, int>>& path,
                                     bool log_rows) {
    for (auto [sym, next] : path) {
      if (log_rows) rows_.push_back({stack_text(), partial_text(), set_text(g_, narrowed())});
      push(sym, next);
      if (auto f = append_terminal_only(sym)) return f;
      candidates_.reset();
    }
    return std::nullopt;
  }

  /// Shift-entry problem: the stack top is the cell's row.
  std::optional<Failure> solve_shift(SymbolId column) {
    int state = states_.back();
    auto target = a_.dfa.transition(state, column);
    if (!target) {
      return Failure{Kind::Unreachable, "no transition from state " + std::to_string(state) +
                                            " on " + g_.name(column)};
    }
    push(column, *target);
    if (auto f = append_terminal_only(column)) return f;
    candidates_.reset();
    auto path = dfa_path(g_, a_.dfa, *target, [&](int s) { return a_.dfa.reduce_states.count(s) > 0; });
    if (!path) return Failure{Kind::Unreachable, "no reduce state reachable from " + std::to_string(*target)};
    if (auto f = follow_path(*path, true)) return f;
    return run();
  }

  /// Applies heuristics until "accept" is on top of the stack.
  std::optional<Failure> run() {
    while (true) {
      if (++iterations_ > budget_) {
        return Failure{Kind::BudgetExceeded,
                       "generation exceeded " + std::to_string(budget_) + " steps"};
      }
      int top = states_.back();
      if (ended_) {
        rows_.push_back({stack_text(), partial_text(), ""});
        const auto* act = single_entry(a_.slr, {top, kEndMarker});
        if (act && act->kind == LrAction::Kind::Accept) {
          rows_.push_back({"accept", partial_text(), ""});
          return std::nullopt;
        }
        if (act && act->kind == LrAction::Kind::Reduce) {
          if (auto f = reduce(act->target)) return f;
          continue;
        }
        return Failure{Kind::Unreachable,
                       "state " + std::to_string(top) + " cannot finish the input"};
      }

      auto x = narrowed();
      if (x.empty()) {
        return Failure{Kind::Unreachable, "no admissible next symbol in state " + std::to_string(top)};
      }
      rows_.push_back({stack_text(), partial_text(), set_text(g_, x)});

      const auto* acc = single_entry(a_.slr, {top, kEndMarker});
      if (x.count(kEndMarker) && acc && acc->kind == LrAction::Kind::Accept) {
        end_input();
        rows_.push_back({"accept", partial_text(), ""});
        return std::nullopt;
      }

      // Reduce beats shift; the exact lookahead is deferred until a shift.
      std::optional<int> production;
      for (SymbolId c : x) {
        const auto* act = single_entry(a_.slr, {top, c});
        if (act && act->kind == LrAction::Kind::Reduce &&
            (!production || act->target < *production)) {
          production = act->target;
        }
      }
      if (production) {
        std::set<SymbolId> keep;
        for (SymbolId c : x) {
          const auto* act = single_entry(a_.slr, {top, c});
          if (act && act->kind == LrAction::Kind::Reduce && act->target == *production) {
            keep.insert(c);
          }
        }
        candidates_ = keep;
        if (auto f = reduce(*production)) return f;
        if (candidates_ && *candidates_ == std::set<SymbolId>{kEndMarker}) end_input();
        continue;
      }

      // Only shifts left: move toward the state whose items are closest to
      // completion, never repeating an earlier (state, symbol) choice.
      std::optional<std::tuple<int, SymbolId, int>> best;  // distance, column, target
      for (SymbolId c : x) {
        if (c == kEndMarker || used_.count({top, c})) continue;
        const auto* act = single_entry(a_.slr, {top, c});
        if (!act || act->kind != LrAction::Kind::Shift) continue;
        std::tuple<int, SymbolId, int> cand{dot_distance(g_, a_.dfa.states.at(static_cast<size_t>(act->target))), c,
                                            act->target};
        if (!best || cand < *best) best = cand;
      }
      if (!best) {
        return Failure{Kind::CycleExhausted,
                       "every shift choice in state " + std::to_string(top) + " was already used"};
      }
      auto [dist, column, target] = *best;
      used_.insert({top, column});
      choice_log_.push_back({top, column});
      push(column, target);
      partial_.push_back(column);
      candidates_.reset();
    }
  }

  std::string stack_text() const {
    std::string out = std::to_string(states_[0]);
    for (size_t i = 0; i < symbols_.size(); ++i) {
      out += g_.name(symbols_[i]) + std::to_string(states_[i + 1]);
    }
    return out;
  }

  std::string partial_text() const {
    return compact(g_, partial_) + (ended_ ? std::string(kEndMarkerToken) : std::string());
  }

  const std::vector<SymbolId>& partial() const { return partial_; }
  std::vector<GenConfig>& rows() { return rows_; }
  const std::set<std::pair<int, SymbolId>>& used() const { return used_; }
  const std::vector<std::pair<int, SymbolId>>& choice_log() const { return choice_log_; }
  size_t iterations() const { return iterations_; }

 private:
  std::set<SymbolId> row_columns(int state) const {
    std::set<SymbolId> out;
    for (SymbolId c : a_.slr.action_columns) {
      if (a_.slr.at({state, c})) out.insert(c);
    }
    return out;
  }

  std::set<SymbolId> narrowed() const {
    auto cols = row_columns(states_.back());
    if (!candidates_) return cols;
    std::set<SymbolId> out;
    std::set_intersection(cols.begin(), cols.end(), candidates_->begin(), candidates_->end(),
                          std::inserter(out, out.end()));
    return out;
  }

  std::optional<Failure> reduce(int production) {
    const auto& p = g_.production(production);
    if (p.rhs.size() >= states_.size()) {
      return Failure{Kind::Unreachable, "reduce by " + g_.production_text(production) +
                                            " would underflow the stack"};
    }
    states_.resize(states_.size() - p.rhs.size());
    symbols_.resize(symbols_.size() - p.rhs.size());
    const auto* go = single_entry(a_.slr, {states_.back(), p.lhs});
    if (!go || go->kind != LrAction::Kind::Goto) {
      return Failure{Kind::Unreachable, "missing goto after reducing " + g_.production_text(production)};
    }
    push(p.lhs, go->target);
    return std::nullopt;
  }

  const Analyses& a_;
  const Grammar& g_;
  size_t budget_;
  std::vector<int> states_;
  std::vector<SymbolId> symbols_;
  std::vector<SymbolId> partial_;
  bool ended_ = false;
  std::optional<std::set<SymbolId>> candidates_;
  std::set<std::pair<int, SymbolId>> used_;
  std::vector<std::pair<int, SymbolId>> choice_log_;
  std::vector<GenConfig> rows_;
  size_t iterations_ = 0;
};

GenResult finish(const Analyses& a, ParserKind kind, Cell cell, GenResult result,
                 std::optional<Failure> failure, const GenOptions& opts) {
  if (!failure) {
    result.trace = parse_with_correct_table(a, kind, result.tokens);
    if (result.trace.accepted() && cell_exercised(result.trace, cell)) {
      if (!opts.length_guard || result.tokens.empty()) return result;
      // Keep the heuristic string unless one of less than half its length exists.
      size_t n = result.tokens.size();
      auto shorter = search_exercising_string(a, kind, cell, (n - 1) / 2, opts.search_budget);
      if (!shorter) return result;
      result.heuristic_failure = "heuristic string '" + join_tokens(a.grammar, result.tokens) +
                                 "' is more than twice as long as necessary";
      result.tokens = std::move(*shorter);
      result.method = GenMethod::Search;
      result.trace = parse_with_correct_table(a, kind, result.tokens);
      return result;
    }
    failure = Failure{Kind::VerificationFailed,
                      "candidate '" + join_tokens(a.grammar, result.tokens) +
                          (result.trace.accepted() ? "' does not exercise the cell"
                                                   : "' is rejected by the correct table")};
  }
  if (!opts.allow_search) throw GenerationError(failure->kind, failure->message);
  auto found = search_exercising_string(a, kind, cell, opts.search_max_length, opts.search_budget);
  if (!found) {
    throw GenerationError(failure->kind,
                          failure->message + "; no exercising string found by search either");
  }
  result.tokens = std::move(*found);
  result.method = GenMethod::Search;
  result.heuristic_failure = failure->message;
  result.trace = parse_with_correct_table(a, kind, result.tokens);
  return result;
}

void require_conflict_free_lr(const Analyses& a, Cell cell) {
  if (!a.slr.conflict_free()) {
    throw GenerationError(Kind::ConflictedTable, "SLR table has conflicts");
  }
  if (cell.row < 0 || cell.row >= a.slr.state_count || !a.slr.at(cell)) {
    throw GenerationError(Kind::EmptyCell, "cell is empty in the correct SLR table");
  }
}

}  // namespace

GenResult gen_ll_string(const Analyses& a, Cell cell, const GenOptions& opts) {
  const Grammar& g = a.grammar;
  if (!a.ll.conflict_free()) throw GenerationError(Kind::ConflictedTable, "LL table has conflicts");
  if (!a.ll.at(cell)) throw GenerationError(Kind::EmptyCell, "cell is empty in the correct LL table");

  GenResult result;
  const SymbolId target = cell.row;
  const SymbolId lookahead = cell.column;
  const auto graph = build_symbol_graph(g);
  const auto& tos = a.terminal_only;

  auto expand_path = [&](std::vector<SymbolId> form, const std::vector<SymbolGraph::Edge>& path) {
    size_t pos = 0;
    result.ll_forms.push_back(form);
    for (const auto& e : path) {
      const auto& rhs = g.production(e.production).rhs;
      size_t offset = static_cast<size_t>(std::find(rhs.begin(), rhs.end(), e.to) - rhs.begin());
      form.erase(form.begin() + static_cast<long>(pos));
      form.insert(form.begin() + static_cast<long>(pos), rhs.begin(), rhs.end());
      pos += offset;
      result.ll_forms.push_back(form);
    }
    return std::make_pair(form, pos);
  };

  std::optional<Failure> failure;
  [&] {
    auto path1 = graph.shortest_path(g.start(), target);
    if (!path1) {
      failure = Failure{Kind::Unreachable, g.name(target) + " is unreachable from the start symbol"};
      return;
    }
    auto [str1, pos] = expand_path({g.start()}, *path1);
    auto prefix = tos.expand(std::span(str1).first(pos));
    auto suffix = tos.expand(std::span(str1).subspan(pos + 1));
    if (!prefix || !suffix) {
      failure = Failure{Kind::Unreachable, "unproductive symbol around " + g.name(target)};
      return;
    }

    std::vector<SymbolId> middle;
    const auto& target_tos = tos.at(target);
    bool forced = !suffix->empty() && suffix->front() == lookahead && target_tos.empty();
    if (lookahead == kEndMarker || forced) {
      middle = target_tos;
    } else {
      auto path2 = graph.shortest_path(target, lookahead);
      if (!path2) {
        failure = Failure{Kind::Unreachable,
                          "no path from " + g.name(target) + " to " + g.name(lookahead)};
        return;
      }
      auto [str2, pos2] = expand_path({target}, *path2);
      auto expanded = tos.expand(str2);
      if (!expanded) {
        failure = Failure{Kind::Unreachable, "unproductive symbol below " + g.name(target)};
        return;
      }
      middle = std::move(*expanded);
    }
    result.tokens = *prefix;
    result.tokens.insert(result.tokens.end(), middle.begin(), middle.end());
    result.tokens.insert(result.tokens.end(), suffix->begin(), suffix->end());
  }();
  return finish(a, ParserKind::LL, cell, std::move(result), failure, opts);
}

GenResult gen_lr_shift_string(const Analyses& a, Cell cell, const GenOptions& opts) {
  require_conflict_free_lr(a, cell);
  const auto* entry = single_entry(a.slr, cell);
  if (entry->kind != LrAction::Kind::Shift && entry->kind != LrAction::Kind::Goto) {
    throw std::invalid_argument("cell does not hold a shift or goto entry");
  }

  GenResult result;
  LrGenerator gen(a);
  std::optional<Failure> failure;
  auto path = dfa_path(a.augmented, a.dfa, 0, [&](int s) { return s == cell.row; });
  if (!path) {
    failure = Failure{Kind::Unreachable, "state " + std::to_string(cell.row) + " is unreachable"};
  } else {
    failure = gen.follow_path(*path, false);
    if (!failure) failure = gen.solve_shift(cell.column);
  }
  result.tokens = gen.partial();
  result.configs = std::move(gen.rows());
  result.used_choices = gen.used();
  result.choice_log = gen.choice_log();
  result.iterations = gen.iterations();
  return finish(a, ParserKind::SLR, cell, std::move(result), failure, opts);
}

GenResult gen_lr_reduce_string(const Analyses& a, Cell cell, const GenOptions& opts) {
  require_conflict_free_lr(a, cell);
  const Grammar& g = a.augmented;
  const auto* entry = single_entry(a.slr, cell);
  if (entry->kind != LrAction::Kind::Reduce && entry->kind != LrAction::Kind::Accept) {
    throw std::invalid_argument("cell does not hold a reduce or accept entry");
  }

  GenResult result;
  if (entry->kind == LrAction::Kind::Accept) {
    // Every accepted parse ends on the accept cell.
    result.tokens = a.terminal_only.at(a.grammar.start());
    return finish(a, ParserKind::SLR, cell, std::move(result), std::nullopt, opts);
  }

  ReduceSetup setup;
  const SymbolId lookahead = cell.column;
  const std::string look_text(g.name(lookahead));
  std::optional<Failure> failure;
  LrGenerator gen(a);

  [&] {
    Cell current = cell;
    int production = entry->target;
    std::set<int> used_productions{production};
    const auto& rhs0 = g.production(production).rhs;
    std::vector<SymbolId> known = *a.terminal_only.expand(rhs0);

    std::string sigma = "Ωs_b";
    for (size_t i = 0; i < rhs0.size(); ++i) {
      sigma += g.name(rhs0[i]) + (i + 1 == rhs0.size() ? std::to_string(cell.row) : "…");
    }
    setup.configs.push_back({sigma, look_text, "ω" + compact(g, known)});

    std::vector<int> before;
    SymbolId lhs = 0;
    int chosen_after = -1;
    int chosen_before = -1;
    while (true) {
      ReduceLevel level;
      level.cell = current;
      level.production = production;
      const auto& p = g.production(production);
      lhs = p.lhs;

      std::map<int, int> partner;  // s_b -> s_a
      for (const auto& [key, target] : a.dfa.transitions) {
        if (key.second == lhs) partner[key.first] = target;
      }
      std::set<int> after_set;
      for (auto [b, s_a] : partner) {
        level.before_states.push_back(b);
        after_set.insert(s_a);
      }
      level.after_states.assign(after_set.begin(), after_set.end());
      if (setup.levels.empty()) {
        setup.configs.push_back({"Ωs_b" + g.name(lhs) + "s_a", look_text, "ω" + compact(g, known)});
      }

      auto drop_after = [&](int rule, const std::vector<int>& gone, std::string note) {
        Refinement r{rule, gone, {}, std::move(note)};
        for (auto it = partner.begin(); it != partner.end();) {
          if (std::find(gone.begin(), gone.end(), it->second) != gone.end()) {
            r.removed_before.push_back(it->first);
            it = partner.erase(it);
          } else {
            ++it;
          }
        }
        for (int s : gone) after_set.erase(s);
        level.refinements.push_back(std::move(r));
      };

      // The right-hand side must lead from s_b to the reducing state.
      {
        Refinement r{0, {}, {}, "right-hand side does not lead to state " + std::to_string(current.row)};
        for (auto it = partner.begin(); it != partner.end();) {
          std::optional<int> s = it->first;
          for (SymbolId x : p.rhs) {
            if (s) s = a.dfa.transition(*s, x);
          }
          if (s != current.row) {
            r.removed_before.push_back(it->first);
            it = partner.erase(it);
          } else {
            ++it;
          }
        }
        std::set<int> still;
        for (auto [b, s_a] : partner) still.insert(s_a);
        for (int s : after_set) {
          if (!still.count(s)) r.removed_after.push_back(s);
        }
        after_set = still;
        if (!r.removed_before.empty()) level.refinements.push_back(std::move(r));
      }

      std::vector<int> errors;
      for (int s_a : after_set) {
        if (!a.slr.at({s_a, lookahead})) errors.push_back(s_a);
      }
      if (!errors.empty()) drop_after(1, errors, "error entries under " + look_text);

      if (after_set.empty()) {
        setup.levels.push_back(std::move(level));
        failure = Failure{Kind::ReduceContextEmpty,
                          "no state can follow " + g.name(lhs) + " with lookahead " + look_text};
        return;
      }

      for (int s_a : after_set) {
        const auto* act = single_entry(a.slr, {s_a, lookahead});
        if (act && (act->kind == LrAction::Kind::Shift || act->kind == LrAction::Kind::Accept)) {
          chosen_after = s_a;
          break;
        }
      }
      if (chosen_after >= 0) {
        for (auto [b, s_a] : partner) {
          if (s_a == chosen_after) {
            chosen_before = b;
            break;
          }
        }
        level.refinements.push_back({2, {}, {}, "state " + std::to_string(chosen_after) +
                                                    " has a shift entry; before state " +
                                                    std::to_string(chosen_before)});
        setup.levels.push_back(std::move(level));
        break;
      }

      // Only reduce entries remain: recurse on one whose production is unused.
      std::optional<std::pair<int, int>> next;  // s_a, production
      for (int s_a : after_set) {
        const auto* act = single_entry(a.slr, {s_a, lookahead});
        if (act && act->kind == LrAction::Kind::Reduce && !used_productions.count(act->target) &&
            !g.production(act->target).rhs.empty()) {
          next = {s_a, act->target};
          break;
        }
      }
      if (!next) {
        setup.levels.push_back(std::move(level));
        failure = Failure{Kind::CycleExhausted, "every reduce choice after " + g.name(lhs) +
                                                    " was already used"};
        return;
      }
      level.refinements.push_back({3, {}, {}, "state " + std::to_string(next->first) +
                                                  " reduces by " + g.production_text(next->second)});
      setup.levels.push_back(std::move(level));
      used_productions.insert(next->second);
      const auto& rhs = g.production(next->second).rhs;
      auto head = a.terminal_only.expand(std::span(rhs).first(rhs.size() - 1));
      if (!head) {
        failure = Failure{Kind::Unreachable, "unproductive symbol in " + g.production_text(next->second)};
        return;
      }
      known.insert(known.begin(), head->begin(), head->end());
      current = {next->first, lookahead};
      production = next->second;
    }

    setup.chosen_after = chosen_after;
    setup.chosen_before = chosen_before;
    setup.configs.push_back({"Ω" + std::to_string(chosen_before) + g.name(lhs) +
                                 std::to_string(chosen_after),
                             look_text, "ω" + compact(g, known)});

    auto path = dfa_path(a.augmented, a.dfa, 0, [&](int s) { return s == chosen_before; });
    if (!path) {
      failure = Failure{Kind::Unreachable, "state " + std::to_string(chosen_before) + " is unreachable"};
      return;
    }
    if ((failure = gen.follow_path(*path, false))) return;
    gen.push(lhs, chosen_after);
    gen.append(known);
    std::vector<SymbolId> prefix_tokens = gen.partial();
    setup.configs.push_back({gen.stack_text(), look_text, compact(g, prefix_tokens)});

    if (lookahead == kEndMarker) {
      gen.end_input();
      failure = gen.run();
    } else {
      failure = gen.solve_shift(lookahead);
    }
  }();

  result.tokens = gen.partial();
  result.configs = std::move(gen.rows());
  result.used_choices = gen.used();
  result.choice_log = gen.choice_log();
  result.iterations = gen.iterations();
  result.reduce = std::move(setup);
  return finish(a, ParserKind::SLR, cell, std::move(result), failure, opts);
}

GenResult gen_lr_string(const Analyses& a, Cell cell, const GenOptions& opts) {
  require_conflict_free_lr(a, cell);
  const auto* entry = single_entry(a.slr, cell);
  if (entry->kind == LrAction::Kind::Shift || entry->kind == LrAction::Kind::Goto) {
    return gen_lr_shift_string(a, cell, opts);
  }
  return gen_lr_reduce_string(a, cell, opts);
}

GenResult generate_string(const Analyses& a, ParserKind kind, Cell cell, const GenOptions& opts) {
  return kind == ParserKind::LL ? gen_ll_string(a, cell, opts) : gen_lr_string(a, cell, opts);
}

std::optional<std::vector<SymbolId>> search_exercising_string(
    const Analyses& a, ParserKind kind, Cell cell, size_t max_length, size_t budget,
    const std::function<bool(const std::vector<SymbolId>&)>& accept) {
  const Grammar& g = a.grammar;
  const auto& tos = a.terminal_only;

  struct Node {
    size_t key;
    size_t seq;
    std::vector<SymbolId> done;  // terminal prefix
    std::vector<SymbolId> rest;  // starts with a nonterminal, or is empty
  };
  auto later = [](const Node& x, const Node& y) {
    return std::tie(x.key, x.seq) > std::tie(y.key, y.seq);
  };
  std::priority_queue<Node, std::vector<Node>, decltype(later)> queue(later);
  std::set<std::pair<std::vector<SymbolId>, std::vector<SymbolId>>> visited;
  std::set<std::vector<SymbolId>> tested;
  size_t seq = 0;
  const size_t max_form = 2 * max_length + 4;

  auto enqueue = [&](std::vector<SymbolId> done, std::vector<SymbolId> rest) {
    size_t lead = 0;
    while (lead < rest.size() && !g.is_nonterminal(rest[lead])) ++lead;
    done.insert(done.end(), rest.begin(), rest.begin() + static_cast<long>(lead));
    rest.erase(rest.begin(), rest.begin() + static_cast<long>(lead));
    size_t key = done.size();
    for (SymbolId s : rest) {
      const auto* part = tos.find(s);
      if (!part) return;
      key += part->size();
    }
    if (key > max_length || done.size() + rest.size() > max_form) return;
    if (!visited.emplace(done, rest).second) return;
    queue.push({key, seq++, std::move(done), std::move(rest)});
  };

  enqueue({}, {g.start()});
  // The budget bounds both expansions and stored forms.
  for (size_t pops = 0; !queue.empty() && pops < budget && visited.size() < budget; ++pops) {
    Node node = queue.top();
    queue.pop();
    std::vector<SymbolId> completion = node.done;
    auto tail = tos.expand(node.rest);
    completion.insert(completion.end(), tail->begin(), tail->end());
    if (tested.insert(completion).second) {
      auto trace = parse_with_correct_table(a, kind, completion);
      if (trace.accepted() && cell_exercised(trace, cell) && (!accept || accept(completion))) {
        return completion;
      }
    }
    if (node.rest.empty()) continue;
    SymbolId head = node.rest.front();
    for (int pi : g.productions_of(head)) {
      std::vector<SymbolId> rest = g.production(pi).rhs;
      rest.insert(rest.end(), node.rest.begin() + 1, node.rest.end());
      enqueue(node.done, std::move(rest));
    }
  }
  return std::nullopt;
}

}  // namespace parsetutor
