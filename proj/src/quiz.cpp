#include "parsetutor/quiz.hpp"

#include <algorithm>
#include <map>

#include "parsetutor/input_gen.hpp"
#include "parsetutor/render.hpp"

namespace parsetutor {

namespace {

uint64_t splitmix64(uint64_t& x) {
  uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr size_t kMoveInputs = 3;
constexpr size_t kHintSearchBudget = 200000;

}  // namespace

Rng::Rng(uint64_t seed, uint64_t stream) {
  uint64_t x = seed;
  uint64_t a = splitmix64(x);
  x ^= stream * 0xD1B54A32D192ED03ULL;
  uint64_t b = splitmix64(x);
  engine_.seed(a ^ (b << 1));
}

const std::vector<Topic>& all_topics() {
  static const std::vector<Topic> topics{Topic::FirstSet,    Topic::FollowSet, Topic::LLTable,
                                         Topic::LLMoves,     Topic::LR0ItemSets,
                                         Topic::SLRTable,    Topic::SLRMoves};
  return topics;
}

std::string_view topic_name(Topic t) {
  switch (t) {
    case Topic::FirstSet:
      return "first-set";
    case Topic::FollowSet:
      return "follow-set";
    case Topic::LLTable:
      return "ll-table";
    case Topic::LLMoves:
      return "ll-moves";
    case Topic::LR0ItemSets:
      return "lr0-item-sets";
    case Topic::SLRTable:
      return "slr-table";
    case Topic::SLRMoves:
      return "slr-moves";
  }
  return "unknown";
}

std::optional<Topic> parse_topic(std::string_view name) {
  for (Topic t : all_topics()) {
    if (topic_name(t) == name) return t;
  }
  return std::nullopt;
}

std::string choice_text(const Analyses& a, const Choice& c) {
  const Grammar& g = a.augmented;
  struct Visitor {
    const Grammar& g;
    std::string operator()(const SymbolChoice& s) const { return symbol_display(g, s.symbol); }
    std::string operator()(const RuleChoice& r) const {
      return g.name(r.lhs) + " -> " + g.sequence_text(r.rhs);
    }
    std::string operator()(const ActionChoice& x) const {
      if (x.action.kind == LrAction::Kind::Reduce) {
        return action_text(x.action) + " (" + g.production_text(x.action.target) + ")";
      }
      return action_text(x.action);
    }
    std::string operator()(const ItemChoice& i) const { return item_text(g, i.item); }
    std::string operator()(const MoveChoice& m) const { return m.move; }
    std::string operator()(const EmptyChoice&) const { return "(empty)"; }
  };
  return std::visit(Visitor{g}, c);
}

std::string target_key(Topic topic, const Target& t) {
  std::string key = std::string(topic_name(topic)) + ":";
  switch (topic) {
    case Topic::FirstSet:
    case Topic::FollowSet:
      return key + std::to_string(t.symbol);
    case Topic::LLTable:
    case Topic::SLRTable:
      return key + std::to_string(t.cell.row) + "," + std::to_string(t.cell.column);
    case Topic::LR0ItemSets:
      return key + std::to_string(t.state);
    case Topic::LLMoves:
    case Topic::SLRMoves: {
      for (size_t i = 0; i < t.input.size(); ++i) key += (i ? "." : "") + std::to_string(t.input[i]);
      return key + "#" + std::to_string(t.step);
    }
  }
  return key;
}

namespace {

bool is_moves(Topic t) { return t == Topic::LLMoves || t == Topic::SLRMoves; }

ParserKind moves_kind(Topic t) { return t == Topic::LLMoves ? ParserKind::LL : ParserKind::SLR; }

bool table_conflict_free(const Analyses& a, ParserKind kind) {
  return kind == ParserKind::LL ? a.ll.conflict_free() : a.slr.conflict_free();
}

const Grammar& trace_grammar(const Analyses& a, ParserKind kind) {
  return kind == ParserKind::LL ? a.grammar : a.augmented;
}

std::vector<Cell> slr_cells(const Analyses& a) {
  std::vector<Cell> cells;
  for (const auto& [c, e] : a.slr.action) {
    if (!e.empty()) cells.push_back(c);
  }
  for (const auto& [c, e] : a.slr.goto_table) {
    if (!e.empty()) cells.push_back(c);
  }
  std::sort(cells.begin(), cells.end());
  return cells;
}

std::vector<Cell> ll_cells(const Analyses& a) {
  std::vector<Cell> cells;
  for (const auto& [c, e] : a.ll.cells) {
    if (!e.empty()) cells.push_back(c);
  }
  return cells;
}

// Inputs for the moves topics: the shortest sentence first, then witness
// strings of the table cells in cell order, until kMoveInputs are distinct.
std::vector<std::vector<SymbolId>> moves_inputs(const Analyses& a, ParserKind kind) {
  std::vector<std::vector<SymbolId>> inputs;
  if (!table_conflict_free(a, kind)) return inputs;
  const auto* shortest = a.terminal_only.find(a.grammar.start());
  if (shortest) inputs.push_back(*shortest);
  const auto cells = kind == ParserKind::LL ? ll_cells(a) : slr_cells(a);
  for (Cell c : cells) {
    if (inputs.size() >= kMoveInputs) break;
    try {
      auto r = generate_string(a, kind, c);
      if (std::find(inputs.begin(), inputs.end(), r.tokens) == inputs.end()) {
        inputs.push_back(r.tokens);
      }
    } catch (const GenerationError&) {
    }
  }
  return inputs;
}

std::optional<int> find_production(const Grammar& g, const RuleChoice& r) {
  for (const auto& p : g.productions()) {
    if (p.lhs == r.lhs && p.rhs == r.rhs) return p.index;
  }
  return std::nullopt;
}

RuleChoice rule_of(const Grammar& g, int production) {
  const auto& p = g.production(production);
  return {p.lhs, p.rhs};
}

size_t index_of(const std::vector<SymbolId>& v, SymbolId x) {
  return static_cast<size_t>(std::find(v.begin(), v.end(), x) - v.begin());
}

size_t distance(size_t x, size_t y) { return x > y ? x - y : y - x; }

std::vector<std::vector<Choice>> levels_of(std::map<size_t, std::vector<Choice>>&& m) {
  std::vector<std::vector<Choice>> out;
  for (auto& [d, v] : m) out.push_back(std::move(v));
  return out;
}

std::string label_for(size_t i) { return std::string(1, static_cast<char>('a' + i)); }

struct Material {
  std::vector<std::vector<Choice>> pool;
  std::vector<Choice> mutations;
};

Material set_material(const Analyses& a, Topic topic, const Target& t) {
  const Grammar& g = a.grammar;
  const auto nts = g.nonterminals();
  const auto& sets = topic == Topic::FirstSet ? a.ff.first : a.ff.follow;
  std::map<size_t, std::vector<Choice>> levels;
  const size_t at = index_of(nts, t.symbol);
  for (size_t i = 0; i < nts.size(); ++i) {
    if (nts[i] == t.symbol) continue;
    for (SymbolId s : sets.at(nts[i])) levels[distance(i, at)].push_back(SymbolChoice{s});
  }
  Material m{levels_of(std::move(levels)), {}};
  for (SymbolId s : g.terminals()) m.mutations.push_back(SymbolChoice{s});
  if (topic == Topic::FirstSet) {
    if (!a.ff.nullable.empty()) m.mutations.push_back(SymbolChoice{kEpsilon});
  } else {
    m.mutations.push_back(SymbolChoice{kEndMarker});
  }
  // When the answer already covers every plausible symbol, fall back to the
  // symbol that never belongs to the set.
  const auto& answer = sets.at(t.symbol);
  bool covered = std::all_of(m.mutations.begin(), m.mutations.end(), [&](const Choice& c) {
    return answer.count(std::get<SymbolChoice>(c).symbol) != 0;
  });
  if (covered) {
    SymbolId extra = topic == Topic::FirstSet ? kEndMarker : kEpsilon;
    m.mutations.push_back(SymbolChoice{extra});
  }
  return m;
}

Material ll_material(const Analyses& a, const Target& t) {
  const Grammar& g = a.grammar;
  const auto rows = a.ll.rows;
  std::map<size_t, std::vector<Choice>> levels;
  const size_t at = index_of(rows, t.cell.row);
  for (const auto& p : g.productions()) {
    levels[distance(index_of(rows, p.lhs), at)].push_back(rule_of(g, p.index));
  }
  Material m{levels_of(std::move(levels)), {}};
  // Structural mutations of the correct productions: drop one symbol, or
  // append a terminal.
  for (int pi : *a.ll.at(t.cell)) {
    const auto& p = g.production(pi);
    for (size_t i = 0; i < p.rhs.size(); ++i) {
      RuleChoice r{p.lhs, p.rhs};
      r.rhs.erase(r.rhs.begin() + static_cast<long>(i));
      m.mutations.push_back(r);
    }
    for (SymbolId x : g.terminals()) {
      RuleChoice r{p.lhs, p.rhs};
      r.rhs.push_back(x);
      m.mutations.push_back(r);
    }
  }
  return m;
}

Material slr_material(const Analyses& a, const Target& t) {
  const bool is_goto = a.augmented.is_nonterminal(t.cell.column);
  const auto& columns = is_goto ? a.slr.goto_columns : a.slr.action_columns;
  const auto& table = is_goto ? a.slr.goto_table : a.slr.action;
  std::map<size_t, std::vector<Choice>> levels;
  const size_t col = index_of(columns, t.cell.column);
  for (const auto& [c, entries] : table) {
    if (c == t.cell) continue;
    size_t d = distance(static_cast<size_t>(c.row), static_cast<size_t>(t.cell.row)) +
               distance(index_of(columns, c.column), col);
    for (const auto& e : entries) levels[d].push_back(ActionChoice{e});
  }
  Material m{levels_of(std::move(levels)), {EmptyChoice{}}};
  const int states = a.slr.state_count;
  for (const auto& e : *a.slr.at(t.cell)) {
    if (e.kind == LrAction::Kind::Shift || e.kind == LrAction::Kind::Goto) {
      for (int j : {e.target - 1, e.target + 1}) {
        if (j >= 0 && j < states) m.mutations.push_back(ActionChoice{{e.kind, j}});
      }
    }
  }
  if (!is_goto) {
    for (const auto& p : a.augmented.productions()) {
      if (p.index > 0) m.mutations.push_back(ActionChoice{{LrAction::Kind::Reduce, p.index}});
    }
  }
  return m;
}

Material lr0_material(const Analyses& a, const Target& t) {
  const Grammar& g = a.augmented;
  std::map<size_t, std::vector<Choice>> levels;
  for (const auto& s : a.dfa.states) {
    if (s.id == t.state) continue;
    for (const auto& it : s.items) {
      levels[distance(static_cast<size_t>(s.id), static_cast<size_t>(t.state))].push_back(
          ItemChoice{it});
    }
  }
  Material m{levels_of(std::move(levels)), {}};
  for (const auto& it : a.dfa.states.at(static_cast<size_t>(t.state)).items) {
    const int len = static_cast<int>(g.production(it.production).rhs.size());
    for (int d : {it.dot - 1, it.dot + 1}) {
      if (d >= 0 && d <= len) m.mutations.push_back(ItemChoice{{it.production, d}});
    }
  }
  return m;
}

Material moves_material(const Analyses& a, Topic topic, const Target& t) {
  const ParserKind kind = moves_kind(topic);
  const Grammar& g = trace_grammar(a, kind);
  const auto trace = parse_with_correct_table(a, kind, t.input);
  std::map<size_t, std::vector<Choice>> levels;
  for (size_t i = 0; i < trace.steps.size(); ++i) {
    if (static_cast<int>(i) == t.step) continue;
    levels[distance(i, static_cast<size_t>(t.step))].push_back(MoveChoice{trace.steps[i].action});
  }
  Material m{levels_of(std::move(levels)), {}};
  if (kind == ParserKind::LL) {
    for (const auto& p : g.productions()) m.mutations.push_back(MoveChoice{"expand " + g.production_text(p.index)});
    for (SymbolId x : g.terminals()) m.mutations.push_back(MoveChoice{"match " + g.name(x)});
  } else {
    for (int s = 0; s < a.slr.state_count; ++s) m.mutations.push_back(MoveChoice{"shift " + std::to_string(s)});
    for (const auto& p : g.productions()) {
      if (p.index > 0) m.mutations.push_back(MoveChoice{"reduce " + g.production_text(p.index)});
    }
  }
  m.mutations.push_back(MoveChoice{"accept"});
  return m;
}

Material material(const Analyses& a, Topic topic, const Target& t) {
  switch (topic) {
    case Topic::FirstSet:
    case Topic::FollowSet:
      return set_material(a, topic, t);
    case Topic::LLTable:
      return ll_material(a, t);
    case Topic::SLRTable:
      return slr_material(a, t);
    case Topic::LR0ItemSets:
      return lr0_material(a, t);
    case Topic::LLMoves:
    case Topic::SLRMoves:
      return moves_material(a, topic, t);
  }
  return {};
}

// First transition into a state, in (source, symbol) order.
std::optional<std::pair<int, SymbolId>> predecessor(const ViablePrefixDfa& dfa, int state) {
  for (const auto& [key, target] : dfa.transitions) {
    if (target == state) return key;
  }
  return std::nullopt;
}

std::string cell_name(const Analyses& a, Topic topic, Cell c) {
  const Grammar& g = a.augmented;
  std::string row = topic == Topic::LLTable ? g.name(c.row) : std::to_string(c.row);
  return "[" + row + ", " + g.name(c.column) + "]";
}

std::string moves_context(const Analyses& a, Topic topic, const Target& t, ParseTrace& trace) {
  const ParserKind kind = moves_kind(topic);
  trace = parse_with_correct_table(a, kind, t.input);
  ParseTrace prefix = trace;
  prefix.steps.resize(static_cast<size_t>(t.step) + 1);
  prefix.steps.back().action = "?";
  return render_text(prefix, trace_grammar(a, kind));
}

void fill_prompt(const Analyses& a, Topic topic, const Target& t, Question& q) {
  const Grammar& g = a.grammar;
  const Grammar& ga = a.augmented;
  const std::string grammar_text = "Grammar:\n" + to_text(g);
  const std::string numbered = "Grammar:\n" + render_numbered_productions(ga);
  switch (topic) {
    case Topic::FirstSet:
      q.prompt = "Which symbols should be included in FIRST[" + g.name(t.symbol) + "]?";
      q.context = grammar_text;
      break;
    case Topic::FollowSet:
      q.prompt = "Which symbols should be included in FOLLOW[" + g.name(t.symbol) + "]?";
      q.context = grammar_text;
      break;
    case Topic::LLTable:
      q.prompt = "Which grammar rule should be included in the cell " + cell_name(a, topic, t.cell) +
                 " of the parsing table?";
      q.context = grammar_text + "\nParsing table:\n" + render_ll_table(g, a.ll, t.cell);
      break;
    case Topic::SLRTable:
      q.prompt = "Which entry should be included in the cell " + cell_name(a, topic, t.cell) +
                 " of the SLR parsing table?";
      q.context = numbered + "\nParsing table:\n" + render_slr_table(ga, a.slr, t.cell);
      break;
    case Topic::LR0ItemSets: {
      q.context = numbered;
      auto pred = predecessor(a.dfa, t.state);
      if (!pred) {
        q.prompt = "Which items belong to the initial item set I0 = closure({" +
                   item_text(ga, LR0Item{0, 0}) + "})?";
      } else {
        q.prompt = "Which items belong to the item set I" + std::to_string(t.state) + " = goto(I" +
                   std::to_string(pred->first) + ", " + ga.name(pred->second) + ")?";
        q.context += "\n" + render_item_set(ga, a.dfa.states.at(static_cast<size_t>(pred->first)));
      }
      break;
    }
    case Topic::LLMoves:
    case Topic::SLRMoves: {
      ParseTrace trace;
      std::string rows = moves_context(a, topic, t, trace);
      const auto& step = trace.steps.at(static_cast<size_t>(t.step));
      const Grammar& tg = trace_grammar(a, moves_kind(topic));
      q.prompt = std::string(topic == Topic::LLMoves ? "LL" : "SLR") + " parsing of input '" +
                 join_tokens(tg, t.input) + "': the stack is " + render_stack(trace, step) +
                 " and the remaining input is " + join_tokens(tg, step.remaining) +
                 ". Which move does the parser make next?";
      q.context = (topic == Topic::LLMoves ? grammar_text : numbered) + "\nTrace so far:\n" + rows;
      break;
    }
  }
}

}  // namespace

std::vector<Target> question_targets(const Analyses& a, Topic topic) {
  std::vector<Target> out;
  switch (topic) {
    case Topic::FirstSet:
    case Topic::FollowSet:
      for (SymbolId nt : a.grammar.nonterminals()) out.push_back(Target{nt, {}, 0, {}, 0});
      break;
    case Topic::LLTable:
      for (Cell c : ll_cells(a)) out.push_back(Target{0, c, 0, {}, 0});
      break;
    case Topic::SLRTable:
      for (Cell c : slr_cells(a)) out.push_back(Target{0, c, 0, {}, 0});
      break;
    case Topic::LR0ItemSets:
      for (const auto& s : a.dfa.states) out.push_back(Target{0, {}, s.id, {}, 0});
      break;
    case Topic::LLMoves:
    case Topic::SLRMoves: {
      const ParserKind kind = moves_kind(topic);
      for (const auto& input : moves_inputs(a, kind)) {
        const auto trace = parse_with_correct_table(a, kind, input);
        for (size_t i = 0; i < trace.steps.size(); ++i) {
          out.push_back(Target{0, {}, 0, input, static_cast<int>(i)});
        }
      }
      break;
    }
  }
  return out;
}

std::vector<Choice> correct_choices(const Analyses& a, Topic topic, const Target& t) {
  std::vector<Choice> out;
  switch (topic) {
    case Topic::FirstSet:
      for (SymbolId s : a.ff.first.at(t.symbol)) out.push_back(SymbolChoice{s});
      break;
    case Topic::FollowSet:
      for (SymbolId s : a.ff.follow.at(t.symbol)) out.push_back(SymbolChoice{s});
      break;
    case Topic::LLTable:
      if (const auto* e = a.ll.at(t.cell)) {
        for (int p : *e) out.push_back(rule_of(a.grammar, p));
      }
      break;
    case Topic::SLRTable:
      if (const auto* e = a.slr.at(t.cell)) {
        for (const auto& x : *e) out.push_back(ActionChoice{x});
      }
      break;
    case Topic::LR0ItemSets:
      for (const auto& it : a.dfa.states.at(static_cast<size_t>(t.state)).items) {
        out.push_back(ItemChoice{it});
      }
      break;
    case Topic::LLMoves:
    case Topic::SLRMoves: {
      const auto trace = parse_with_correct_table(a, moves_kind(topic), t.input);
      out.push_back(MoveChoice{trace.steps.at(static_cast<size_t>(t.step)).action});
      break;
    }
  }
  return out;
}

std::vector<Option> generate_options(const Analyses& a, const std::vector<Choice>& correct,
                                     const std::vector<std::vector<Choice>>& ranked_pool,
                                     const std::vector<Choice>& mutations, Rng& rng, size_t k) {
  k = std::max<size_t>(k, 2);
  std::vector<Choice> shown = correct;
  if (shown.size() > k - 1) {
    rng.shuffle(shown);
    shown.resize(k - 1);
    std::sort(shown.begin(), shown.end());
  }
  std::vector<Choice> chosen = shown;
  auto taken = [&](const Choice& c) {
    return std::find(correct.begin(), correct.end(), c) != correct.end() ||
           std::find(chosen.begin(), chosen.end(), c) != chosen.end();
  };
  for (const auto& level : ranked_pool) {
    if (chosen.size() >= k) break;
    std::vector<Choice> l = level;
    rng.shuffle(l);
    for (const auto& c : l) {
      if (chosen.size() >= k) break;
      if (!taken(c)) chosen.push_back(c);
    }
  }
  for (const auto& c : mutations) {
    if (chosen.size() >= k) break;
    if (!taken(c)) chosen.push_back(c);
  }
  rng.shuffle(chosen);
  std::vector<Option> out;
  for (size_t i = 0; i < chosen.size(); ++i) {
    out.push_back(Option{label_for(i), choice_text(a, chosen[i]), chosen[i]});
  }
  return out;
}

Question generate_question_for(const Analyses& a, Topic topic, const Target& target, Rng& rng,
                               const QuizOptions& opts) {
  Question q;
  q.id = target_key(topic, target);
  q.topic = topic;
  q.target = target;
  q.multi_select = !is_moves(topic);
  const auto correct = correct_choices(a, topic, target);
  const auto m = material(a, topic, target);
  q.options = generate_options(a, correct, m.pool, m.mutations, rng, opts.option_count);
  for (const auto& o : q.options) {
    if (std::find(correct.begin(), correct.end(), o.value) != correct.end()) q.correct.insert(o.label);
  }
  fill_prompt(a, topic, target, q);
  return q;
}

Question generate_question(const Analyses& a, Topic topic, Rng& rng,
                           const std::set<std::string>& asked, const QuizOptions& opts) {
  std::vector<Target> open;
  for (auto& t : question_targets(a, topic)) {
    if (!asked.count(target_key(topic, t))) open.push_back(std::move(t));
  }
  if (open.empty()) {
    throw TopicExhausted("no questions left for topic " + std::string(topic_name(topic)));
  }
  return generate_question_for(a, topic, open[rng.below(open.size())], rng, opts);
}

Evaluation evaluate_answer(const Question& q, const std::set<std::string>& selected) {
  Evaluation ev;
  for (const auto& label : selected) {
    bool known = std::any_of(q.options.begin(), q.options.end(),
                             [&](const Option& o) { return o.label == label; });
    if (!known) throw std::invalid_argument("unknown option label '" + label + "'");
  }
  ev.selected = selected;
  for (const auto& label : q.correct) {
    if (!selected.count(label)) ev.missing_correct.insert(label);
  }
  for (const auto& label : selected) {
    if (!q.correct.count(label)) ev.selected_incorrect.insert(label);
  }
  ev.correct_overall = ev.missing_correct.empty() && ev.selected_incorrect.empty();
  return ev;
}

namespace {

struct Catalog {
  std::string prompt;
  std::vector<std::string> rules;
  size_t correct = 0;  // index into rules
};

bool contains(const std::vector<Choice>& v, const Choice& c) {
  return std::find(v.begin(), v.end(), c) != v.end();
}

Catalog first_catalog(const Analyses& a, const Question& q, const Option& focus) {
  const Grammar& g = a.grammar;
  const SymbolId x = q.target.symbol;
  Catalog c;
  c.prompt = "According to which of the following rules, the symbol " + focus.content +
             " is a part of FIRST[" + g.name(x) + "]?";
  c.rules = {
      "If X is a terminal, then FIRST(X) is {X}.",
      "If X is a nonterminal and X -> Y1 Y2 ... Yk is a production for some k >= 1, then place a "
      "in FIRST(X) if for some i, a is in FIRST(Yi), and ε is in all of FIRST(Y1), ..., "
      "FIRST(Yi-1). If ε is in FIRST(Yj) for all j = 1, 2, ..., k, then add ε to FIRST(X).",
      "If X -> ε is a production, then add ε to FIRST(X).",
      "No valid rule for this symbol.",
  };
  const auto* s = std::get_if<SymbolChoice>(&focus.value);
  if (!s || !a.ff.first.at(x).count(s->symbol)) {
    c.correct = 3;
  } else if (s->symbol != kEpsilon) {
    c.correct = 1;
  } else {
    const auto ps = g.productions_of(x);
    bool direct = std::any_of(ps.begin(), ps.end(), [&](int p) { return g.production(p).rhs.empty(); });
    c.correct = direct ? 2 : 1;
  }
  return c;
}

Catalog follow_catalog(const Analyses& a, const Question& q, const Option& focus) {
  const Grammar& g = a.grammar;
  const SymbolId b = q.target.symbol;
  const std::string bn = g.name(b);
  Catalog c;
  c.prompt = "According to which of the following rules, the symbol " + focus.content +
             " is a part of FOLLOW[" + bn + "]?";
  c.rules = {
      "If " + bn + " is the start symbol, then place $ in FOLLOW(" + bn + ").",
      "If there is a production A -> α " + bn + " β, then everything in FIRST(β) except ε is in FOLLOW(" +
          bn + ").",
      "If there is a production A -> α " + bn + ", or a production A -> α " + bn +
          " β where FIRST(β) contains ε, then everything in FOLLOW(A) is in FOLLOW(" + bn + ").",
      "No valid rule for this symbol.",
  };
  const auto* s = std::get_if<SymbolChoice>(&focus.value);
  if (!s || !a.ff.follow.at(b).count(s->symbol)) {
    c.correct = 3;
    return c;
  }
  if (s->symbol == kEndMarker && b == g.start()) {
    c.correct = 0;
    return c;
  }
  for (const auto& p : g.productions()) {
    for (size_t i = 0; i < p.rhs.size(); ++i) {
      if (p.rhs[i] != b) continue;
      std::span<const SymbolId> beta(p.rhs.data() + i + 1, p.rhs.size() - i - 1);
      auto f = a.ff.first_of(g, beta);
      if (s->symbol != kEpsilon && f.count(s->symbol)) {
        c.correct = 1;
        return c;
      }
    }
  }
  c.correct = 2;
  return c;
}

Catalog ll_catalog(const Analyses& a, const Question& q, const Option& focus) {
  const Grammar& g = a.grammar;
  const Cell cell = q.target.cell;
  const std::string bn = g.name(cell.row);
  const std::string tn = g.name(cell.column);
  const std::string pi = focus.content;
  Catalog c;
  c.prompt = "According to which of the following rules, the production " + pi + " is in cell [" + bn +
             ", " + tn + "]?";
  c.rules = {
      pi + " is a production " + bn + " -> α, and " + tn + " ∈ FIRST(α)",
      pi + " is a production " + bn + " -> α, ε ∈ FIRST(α) and " + tn + " ∈ FOLLOW(" + bn + ")",
      "No valid rule for this production.",
  };
  c.correct = 2;
  const auto* r = std::get_if<RuleChoice>(&focus.value);
  if (!r || r->lhs != cell.row || !find_production(g, *r)) return c;
  auto f = a.ff.first_of(g, r->rhs);
  if (f.count(cell.column)) {
    c.correct = 0;
  } else if (f.count(kEpsilon) && a.ff.follow.at(cell.row).count(cell.column)) {
    c.correct = 1;
  }
  return c;
}

Catalog slr_catalog(const Analyses& a, const Question& q, const Option& focus) {
  const Grammar& g = a.augmented;
  const Cell cell = q.target.cell;
  const std::string s = std::to_string(cell.row);
  const std::string x = g.name(cell.column);
  Catalog c;
  c.prompt = "According to which of the following rules, the entry " + focus.content + " is in cell [" +
             s + ", " + x + "]?";
  c.rules = {
      "Shift: I" + s + " contains an item A -> α · " + x + " β and goto(I" + s + ", " + x +
          ") = Ij, so the entry is sj.",
      "Reduce: I" + s + " contains a complete item A -> α ·, A is not the augmented start symbol and " + x +
          " ∈ FOLLOW(A), so the entry is r(A -> α).",
      "Accept: I" + s + " contains the item " + item_text(g, LR0Item{0, 1}) + " and the lookahead is $.",
      "Goto: " + x + " is a nonterminal and goto(I" + s + ", " + x + ") = Ij, so the entry is j.",
      "No valid rule for this entry.",
  };
  c.correct = 4;
  const auto* act = std::get_if<ActionChoice>(&focus.value);
  const auto* entries = a.slr.at(cell);
  if (!act || !entries || !entries->count(act->action)) return c;
  switch (act->action.kind) {
    case LrAction::Kind::Shift:
      c.correct = 0;
      break;
    case LrAction::Kind::Reduce:
      c.correct = 1;
      break;
    case LrAction::Kind::Accept:
      c.correct = 2;
      break;
    case LrAction::Kind::Goto:
      c.correct = 3;
      break;
  }
  return c;
}

Catalog lr0_catalog(const Analyses& a, const Question& q, const Option& focus) {
  const std::string i = "I" + std::to_string(q.target.state);
  Catalog c;
  c.prompt = "According to which of the following rules, the item " + focus.content + " is in " + i + "?";
  c.rules = {
      "Kernel: the item is the initial item " + item_text(a.augmented, LR0Item{0, 0}) +
          " of I0, or it is A -> α X · β where A -> α · X β is in an item set Ip and " + i +
          " = goto(Ip, X).",
      "Closure: the item is B -> · γ and some item A -> α · B β is already in " + i + ".",
      "No valid rule for this item.",
  };
  c.correct = 2;
  const auto* it = std::get_if<ItemChoice>(&focus.value);
  const auto& items = a.dfa.states.at(static_cast<size_t>(q.target.state)).items;
  if (!it || !items.count(it->item)) return c;
  const bool initial = it->item.production == 0 && it->item.dot == 0;
  c.correct = (initial || it->item.dot > 0) ? 0 : 1;
  return c;
}

Catalog moves_catalog(const Analyses& a, const Question& q, const Option& focus) {
  const bool ll = q.topic == Topic::LLMoves;
  Catalog c;
  c.prompt = "According to which of the following rules, the parser makes the move '" + focus.content +
             "' at step " + std::to_string(q.target.step) + "?";
  if (ll) {
    c.rules = {
        "Expand: the top of the stack is a nonterminal A, the lookahead is a and cell [A, a] of the "
        "table holds A -> α; replace A by α.",
        "Match: the top of the stack is a terminal equal to the lookahead; pop it and advance.",
        "Accept: the stack holds only $ and the remaining input is $.",
        "No valid rule for this move.",
    };
  } else {
    c.rules = {
        "Shift: cell [s, a] holds sj for the top state s and the lookahead a; push a and j.",
        "Reduce: cell [s, a] holds r(A -> α); pop |α| symbols, then push A and the goto state.",
        "Accept: cell [s, $] holds acc.",
        "No valid rule for this move.",
    };
  }
  c.correct = 3;
  const auto correct = correct_choices(a, q.topic, q.target);
  if (!contains(correct, focus.value)) return c;
  const auto trace = parse_with_correct_table(a, moves_kind(q.topic), q.target.input);
  switch (trace.steps.at(static_cast<size_t>(q.target.step)).kind) {
    case TraceStep::Kind::Expand:
    case TraceStep::Kind::Shift:
      c.correct = 0;
      break;
    case TraceStep::Kind::Match:
    case TraceStep::Kind::Reduce:
      c.correct = 1;
      break;
    case TraceStep::Kind::Accept:
      c.correct = 2;
      break;
    case TraceStep::Kind::Reject:
      break;
  }
  return c;
}

Catalog catalog(const Analyses& a, const Question& q, const Option& focus) {
  switch (q.topic) {
    case Topic::FirstSet:
      return first_catalog(a, q, focus);
    case Topic::FollowSet:
      return follow_catalog(a, q, focus);
    case Topic::LLTable:
      return ll_catalog(a, q, focus);
    case Topic::SLRTable:
      return slr_catalog(a, q, focus);
    case Topic::LR0ItemSets:
      return lr0_catalog(a, q, focus);
    case Topic::LLMoves:
    case Topic::SLRMoves:
      return moves_catalog(a, q, focus);
  }
  return {};
}

std::optional<Option> first_correct_option(const Question& q) {
  for (const auto& o : q.options) {
    if (q.correct.count(o.label)) return o;
  }
  return std::nullopt;
}

}  // namespace

HintQuestion generate_hint_mcq(const Analyses& a, const Question& q, const Option& focus,
                               const QuizOptions&) {
  const Catalog c = catalog(a, q, focus);
  HintQuestion h;
  h.kind = HintKind::HintMCQ;
  h.parent = q.id;
  h.focus = focus;
  h.prompt = c.prompt;
  h.context = q.context;
  for (size_t i = 0; i < c.rules.size(); ++i) {
    h.options.push_back(Option{std::to_string(i + 1), c.rules[i], EmptyChoice{}});
  }
  h.correct = std::to_string(c.correct + 1);
  return h;
}

bool hint_string_available(const Analyses& a, const Question& q) {
  if (q.topic == Topic::LLTable) return a.ll.conflict_free();
  if (q.topic == Topic::SLRTable) return a.slr.conflict_free();
  return false;
}

HintQuestion generate_hint_string(const Analyses& a, const Question& q, const Option& user_choice,
                                  const QuizOptions& opts) {
  auto fallback = [&] {
    if (std::holds_alternative<EmptyChoice>(user_choice.value)) {
      if (auto o = first_correct_option(q)) return generate_hint_mcq(a, q, *o, opts);
    }
    return generate_hint_mcq(a, q, user_choice, opts);
  };
  if (!hint_string_available(a, q)) return fallback();
  const auto correct = correct_choices(a, q.topic, q.target);
  if (contains(correct, user_choice.value)) return fallback();

  const Cell cell = q.target.cell;
  const ParserKind kind = q.topic == Topic::LLTable ? ParserKind::LL : ParserKind::SLR;
  LlTable ll = a.ll;
  SlrTable slr = a.slr;
  if (std::holds_alternative<EmptyChoice>(user_choice.value)) {
    if (kind == ParserKind::LL) {
      ll.set(cell, {});
    } else {
      slr.set(cell, {}, a.augmented.is_nonterminal(cell.column));
    }
  } else if (kind == ParserKind::LL) {
    const auto* r = std::get_if<RuleChoice>(&user_choice.value);
    auto p = r ? find_production(a.grammar, *r) : std::nullopt;
    if (!p) return fallback();
    ll.set(cell, {*p});
  } else {
    const auto* act = std::get_if<ActionChoice>(&user_choice.value);
    if (!act) return fallback();
    slr.set(cell, {act->action}, a.augmented.is_nonterminal(cell.column));
  }

  auto user_parse = [&](const std::vector<SymbolId>& input) {
    return kind == ParserKind::LL ? ll_parse(ll, a.grammar, input) : lr_parse(slr, a.augmented, input);
  };

  std::optional<std::vector<SymbolId>> input;
  try {
    auto r = generate_string(a, kind, cell);
    if (!user_parse(r.tokens).accepted()) input = r.tokens;
  } catch (const GenerationError&) {
    return fallback();  // no accepted string exercises the cell
  }
  if (!input) {
    input = search_exercising_string(a, kind, cell, opts.hint_search_length, kHintSearchBudget,
                                     [&](const std::vector<SymbolId>& s) { return !user_parse(s).accepted(); });
  }
  if (!input) return fallback();

  const Grammar& tg = trace_grammar(a, kind);
  HintQuestion h;
  h.kind = HintKind::HintString;
  h.parent = q.id;
  h.focus = user_choice;
  h.input = *input;
  h.trace = user_parse(*input);
  h.prompt = std::string(kind == ParserKind::LL ? "LL" : "SLR") + "-parsing on input " +
             join_tokens(tg, *input) +
             " with your parse table is failing. Can you fix the error by selecting the correct choice?";
  h.context = render_text(*h.trace, tg);
  for (const auto& o : q.options) {
    if (o.value == user_choice.value) continue;
    Option copy = o;
    copy.label = label_for(h.options.size());
    if (contains(correct, o.value)) h.correct = copy.label;
    h.options.push_back(std::move(copy));
  }
  return h;
}

namespace {

std::string explanation(const Analyses& a, const Question& q, const QuizOptions& opts) {
  std::string out = "Correct answer:";
  for (const auto& o : q.options) {
    if (!q.correct.count(o.label)) continue;
    const auto h = generate_hint_mcq(a, q, o, opts);
    const auto& rule = h.options.at(std::stoul(h.correct) - 1).content;
    out += "\n(" + o.label + ") " + o.content + ": " + rule;
  }
  return out;
}

const Option& option_by_label(const Question& q, const std::string& label) {
  for (const auto& o : q.options) {
    if (o.label == label) return o;
  }
  throw std::invalid_argument("unknown option label '" + label + "'");
}

}  // namespace

TutorAction next_step(const Analyses& a, const Question& q, const Evaluation& ev, int wrong_attempts,
                      Rng& rng, const QuizOptions& opts) {
  TutorAction act;
  if (ev.correct_overall) {
    const double roll = rng.unit();
    if (roll < opts.hint_probability && !q.correct.empty()) {
      std::vector<std::string> labels(q.correct.begin(), q.correct.end());
      const auto& focus = option_by_label(q, labels[rng.below(labels.size())]);
      auto h = generate_hint_mcq(a, q, focus, opts);
      h.id = q.id + ".c.h0";
      act.hints.push_back(std::move(h));
    }
    act.next = TutorAction::Next::Advance;
    return act;
  }

  const bool strings = hint_string_available(a, q);
  bool string_emitted = false;
  for (const auto& label : ev.selected_incorrect) {
    const auto& focus = option_by_label(q, label);
    auto h = strings ? generate_hint_string(a, q, focus, opts) : generate_hint_mcq(a, q, focus, opts);
    string_emitted |= h.kind == HintKind::HintString;
    act.hints.push_back(std::move(h));
  }
  if (ev.selected.empty() && strings) {
    auto h = generate_hint_string(a, q, Option{"", choice_text(a, EmptyChoice{}), EmptyChoice{}}, opts);
    string_emitted |= h.kind == HintKind::HintString;
    act.hints.push_back(std::move(h));
  }
  if (!string_emitted) {
    for (const auto& label : ev.missing_correct) {
      auto h = generate_hint_mcq(a, q, option_by_label(q, label), opts);
      if (std::none_of(act.hints.begin(), act.hints.end(), [&](const HintQuestion& x) { return x == h; })) {
        act.hints.push_back(std::move(h));
      }
    }
  }
  const std::string round = ".r" + std::to_string(wrong_attempts + 1) + ".h";
  for (size_t i = 0; i < act.hints.size(); ++i) act.hints[i].id = q.id + round + std::to_string(i);

  if (wrong_attempts + 1 >= opts.hint_rounds) {
    act.reveal = true;
    act.explanation = explanation(a, q, opts);
    act.next = TutorAction::Next::Advance;
  } else {
    act.next = TutorAction::Next::Repeat;
  }
  return act;
}

bool evaluate_hint(const HintQuestion& h, const std::string& label) {
  bool known = std::any_of(h.options.begin(), h.options.end(), [&](const Option& o) { return o.label == label; });
  if (!known) throw std::invalid_argument("unknown option label '" + label + "'");
  return label == h.correct;
}

}  // namespace parsetutor
