#include "parsetutor/json_io.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "parsetutor/render.hpp"

namespace parsetutor::io {

namespace {

// Symbol ids in display order: the end marker last.
std::vector<SymbolId> display_order(const std::set<SymbolId>& s) {
  std::vector<SymbolId> out;
  for (SymbolId x : s) {
    if (x != kEndMarker) out.push_back(x);
  }
  if (s.count(kEndMarker)) out.push_back(kEndMarker);
  return out;
}

json names(const Grammar& g, const std::vector<SymbolId>& ids) {
  json out = json::array();
  for (SymbolId x : ids) out.push_back(g.name(x));
  return out;
}

json names(const Grammar& g, const std::set<SymbolId>& ids) { return names(g, display_order(ids)); }

json cell_view(const Grammar& g, ParserKind kind, Cell c) {
  json row = kind == ParserKind::LL ? json(g.name(c.row)) : json(c.row);
  return {{"row", row}, {"column", g.name(c.column)}};
}

std::string_view parser_name(ParserKind k) { return k == ParserKind::LL ? "ll" : "slr"; }

constexpr std::array<std::string_view, 6> kStepKinds{"expand", "match", "shift", "reduce", "accept", "reject"};
constexpr std::array<std::string_view, 4> kActionKinds{"shift", "reduce", "accept", "goto"};
constexpr std::array<std::string_view, 7> kRejectReasons{"empty-cell",    "conflict",       "mismatch",
                                                         "stack-underflow", "missing-goto", "invalid-entry",
                                                         "nontermination"};
constexpr std::array<std::string_view, 5> kEventKinds{"asked", "answered", "hint-issued", "hint-answered",
                                                      "topic-completed"};
constexpr std::array<std::string_view, 5> kOutcomes{"none", "first-try", "after-hint", "repeat", "revealed"};

template <typename E, size_t N>
std::string enum_name(const std::array<std::string_view, N>& names, E e) {
  return std::string(names.at(static_cast<size_t>(e)));
}

template <typename E, size_t N>
E enum_from(const std::array<std::string_view, N>& names, const std::string& s) {
  for (size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  throw std::invalid_argument("unknown value '" + s + "'");
}

Topic topic_from(const std::string& s) {
  auto t = parse_topic(s);
  if (!t) throw std::invalid_argument("unknown topic '" + s + "'");
  return *t;
}

json options_view(const std::vector<Option>& options) {
  json out = json::array();
  for (const auto& o : options) out.push_back({{"label", o.label}, {"content", o.content}});
  return out;
}

const Grammar& trace_grammar(const Analyses& a, ParserKind kind) {
  return kind == ParserKind::LL ? a.grammar : a.augmented;
}

// Storage helpers.

json cell_store(Cell c) { return json::array({c.row, c.column}); }
Cell cell_load(const json& j) { return {j.at(0).get<int>(), j.at(1).get<SymbolId>()}; }

json choice_store(const Choice& c) {
  struct Visitor {
    json operator()(const SymbolChoice& s) const { return {{"type", "symbol"}, {"symbol", s.symbol}}; }
    json operator()(const RuleChoice& r) const { return {{"type", "rule"}, {"lhs", r.lhs}, {"rhs", r.rhs}}; }
    json operator()(const ActionChoice& a) const {
      return {{"type", "action"}, {"kind", enum_name(kActionKinds, a.action.kind)}, {"target", a.action.target}};
    }
    json operator()(const ItemChoice& i) const {
      return {{"type", "item"}, {"production", i.item.production}, {"dot", i.item.dot}};
    }
    json operator()(const MoveChoice& m) const { return {{"type", "move"}, {"move", m.move}}; }
    json operator()(const EmptyChoice&) const { return {{"type", "empty"}}; }
  };
  return std::visit(Visitor{}, c);
}

Choice choice_load(const json& j) {
  const std::string type = j.at("type");
  if (type == "symbol") return SymbolChoice{j.at("symbol").get<SymbolId>()};
  if (type == "rule") return RuleChoice{j.at("lhs").get<SymbolId>(), j.at("rhs").get<std::vector<SymbolId>>()};
  if (type == "action") {
    return ActionChoice{{enum_from<LrAction::Kind>(kActionKinds, j.at("kind")), j.at("target").get<int>()}};
  }
  if (type == "item") return ItemChoice{{j.at("production").get<int>(), j.at("dot").get<int>()}};
  if (type == "move") return MoveChoice{j.at("move").get<std::string>()};
  if (type == "empty") return EmptyChoice{};
  throw std::invalid_argument("unknown choice type '" + type + "'");
}

json option_store(const Option& o) {
  return {{"label", o.label}, {"content", o.content}, {"value", choice_store(o.value)}};
}

Option option_load(const json& j) {
  return {j.at("label").get<std::string>(), j.at("content").get<std::string>(), choice_load(j.at("value"))};
}

json options_store(const std::vector<Option>& options) {
  json out = json::array();
  for (const auto& o : options) out.push_back(option_store(o));
  return out;
}

std::vector<Option> options_load(const json& j) {
  std::vector<Option> out;
  for (const auto& o : j) out.push_back(option_load(o));
  return out;
}

json trace_store(const ParseTrace& t) {
  json steps = json::array();
  for (const auto& s : t.steps) {
    json consulted = json::array();
    for (Cell c : s.consulted) consulted.push_back(cell_store(c));
    steps.push_back({{"stack", s.stack},
                     {"remaining", s.remaining},
                     {"move", enum_name(kStepKinds, s.kind)},
                     {"action", s.action},
                     {"consulted", consulted}});
  }
  json cells = json::array();
  for (Cell c : t.cells_exercised) cells.push_back(cell_store(c));
  const auto& o = t.outcome;
  json outcome = {{"accepted", o.accepted},
                  {"reason", o.reason ? json(enum_name(kRejectReasons, *o.reason)) : json(nullptr)},
                  {"step", o.step},
                  {"cell", o.cell ? cell_store(*o.cell) : json(nullptr)},
                  {"message", o.message}};
  return {{"parser", parser_name(t.kind)}, {"steps", steps}, {"outcome", outcome}, {"cells", cells}};
}

ParseTrace trace_load(const json& j) {
  ParseTrace t;
  t.kind = j.at("parser") == "ll" ? ParserKind::LL : ParserKind::SLR;
  for (const auto& s : j.at("steps")) {
    TraceStep step;
    step.stack = s.at("stack").get<std::vector<std::string>>();
    step.remaining = s.at("remaining").get<std::vector<SymbolId>>();
    step.kind = enum_from<TraceStep::Kind>(kStepKinds, s.at("move"));
    step.action = s.at("action");
    for (const auto& c : s.at("consulted")) step.consulted.push_back(cell_load(c));
    t.steps.push_back(std::move(step));
  }
  for (const auto& c : j.at("cells")) t.cells_exercised.insert(cell_load(c));
  const auto& o = j.at("outcome");
  t.outcome.accepted = o.at("accepted");
  if (!o.at("reason").is_null()) t.outcome.reason = enum_from<RejectReason>(kRejectReasons, o.at("reason"));
  t.outcome.step = o.at("step");
  if (!o.at("cell").is_null()) t.outcome.cell = cell_load(o.at("cell"));
  t.outcome.message = o.at("message");
  return t;
}

json target_store(const Target& t) {
  return {{"symbol", t.symbol}, {"cell", cell_store(t.cell)}, {"state", t.state}, {"input", t.input}, {"step", t.step}};
}

Target target_load(const json& j) {
  return {j.at("symbol").get<SymbolId>(), cell_load(j.at("cell")), j.at("state").get<int>(),
          j.at("input").get<std::vector<SymbolId>>(), j.at("step").get<int>()};
}

json question_store(const Question& q) {
  return {{"id", q.id},
          {"topic", topic_name(q.topic)},
          {"prompt", q.prompt},
          {"context", q.context},
          {"options", options_store(q.options)},
          {"correct", q.correct},
          {"multiSelect", q.multi_select},
          {"target", target_store(q.target)}};
}

Question question_load(const json& j) {
  Question q;
  q.id = j.at("id");
  q.topic = topic_from(j.at("topic"));
  q.prompt = j.at("prompt");
  q.context = j.at("context");
  q.options = options_load(j.at("options"));
  q.correct = j.at("correct").get<std::set<std::string>>();
  q.multi_select = j.at("multiSelect");
  q.target = target_load(j.at("target"));
  return q;
}

json hint_store(const HintQuestion& h) {
  return {{"id", h.id},
          {"kind", h.kind == HintKind::HintMCQ ? "mcq" : "string"},
          {"parent", h.parent},
          {"focus", option_store(h.focus)},
          {"prompt", h.prompt},
          {"context", h.context},
          {"options", options_store(h.options)},
          {"correct", h.correct},
          {"input", h.input},
          {"trace", h.trace ? trace_store(*h.trace) : json(nullptr)}};
}

HintQuestion hint_load(const json& j) {
  HintQuestion h;
  h.id = j.at("id");
  h.kind = j.at("kind") == "mcq" ? HintKind::HintMCQ : HintKind::HintString;
  h.parent = j.at("parent");
  h.focus = option_load(j.at("focus"));
  h.prompt = j.at("prompt");
  h.context = j.at("context");
  h.options = options_load(j.at("options"));
  h.correct = j.at("correct");
  h.input = j.at("input").get<std::vector<SymbolId>>();
  if (!j.at("trace").is_null()) h.trace = trace_load(j.at("trace"));
  return h;
}

}  // namespace

json grammar_json(const Grammar& g) {
  json productions = json::array();
  for (const auto& p : g.productions()) {
    productions.push_back(
        {{"index", p.index}, {"lhs", g.name(p.lhs)}, {"rhs", names(g, p.rhs)}, {"text", g.production_text(p.index)}});
  }
  json out = {{"start", g.name(g.start())},
              {"terminals", names(g, g.terminals())},
              {"nonterminals", names(g, g.nonterminals())},
              {"productions", productions},
              {"augmented", g.augmented()}};
  if (!g.augmented()) out["text"] = to_text(g);
  return out;
}

json ll_table_json(const Grammar& g, const LlTable& t) {
  json cells = json::array();
  for (const auto& [c, entries] : t.cells) {
    json texts = json::array();
    for (int p : entries) texts.push_back(g.production_text(p));
    cells.push_back({{"row", g.name(c.row)},
                     {"column", g.name(c.column)},
                     {"productions", entries},
                     {"entries", texts}});
  }
  json conflicts = json::array();
  for (Cell c : t.conflicts()) conflicts.push_back(cell_view(g, ParserKind::LL, c));
  return {{"parser", "ll"},
          {"rows", names(g, t.rows)},
          {"columns", names(g, t.columns)},
          {"cells", cells},
          {"conflicts", conflicts}};
}

json slr_table_json(const Grammar& g, const SlrTable& t) {
  // Both sub-tables in one row-then-column order.
  std::map<Cell, const std::set<LrAction>*> merged;
  for (const auto& [c, entries] : t.action) merged[c] = &entries;
  for (const auto& [c, entries] : t.goto_table) merged[c] = &entries;
  json cells = json::array();
  for (const auto& [c, entries] : merged) {
    json texts = json::array();
    for (const auto& e : *entries) texts.push_back(action_text(e));
    cells.push_back({{"row", c.row}, {"column", g.name(c.column)}, {"entries", texts}});
  }
  json conflicts = json::array();
  for (Cell c : t.conflicts()) conflicts.push_back(cell_view(g, ParserKind::SLR, c));
  return {{"parser", "slr"},
          {"states", t.state_count},
          {"actionColumns", names(g, t.action_columns)},
          {"gotoColumns", names(g, t.goto_columns)},
          {"cells", cells},
          {"conflicts", conflicts}};
}

json analysis_json(const Analyses& a) {
  const Grammar& g = a.grammar;
  const Grammar& ga = a.augmented;
  json first = json::object();
  json follow = json::object();
  for (SymbolId nt : g.nonterminals()) {
    first[g.name(nt)] = names(g, a.ff.first.at(nt));
    follow[g.name(nt)] = names(g, a.ff.follow.at(nt));
  }
  json shortest = json::object();
  for (const auto& [sym, str] : a.terminal_only.entries()) {
    if (g.is_nonterminal(sym)) shortest[g.name(sym)] = names(g, str);
  }
  json states = json::array();
  for (const auto& s : a.dfa.states) {
    json items = json::array();
    for (const auto& it : s.items) items.push_back(item_text(ga, it));
    states.push_back({{"id", s.id}, {"items", items}});
  }
  json transitions = json::array();
  for (const auto& [key, to] : a.dfa.transitions) {
    transitions.push_back({{"from", key.first}, {"symbol", ga.name(key.second)}, {"to", to}});
  }
  return {{"grammar", grammar_json(g)},
          {"augmented", grammar_json(ga)},
          {"first", first},
          {"follow", follow},
          {"nullable", names(g, a.ff.nullable)},
          {"shortestStrings", shortest},
          {"llTable", ll_table_json(g, a.ll)},
          {"itemSets", states},
          {"transitions", transitions},
          {"reduceStates", a.dfa.reduce_states},
          {"slrTable", slr_table_json(ga, a.slr)}};
}

json trace_json(const ParseTrace& trace, const Grammar& g) {
  json steps = json::array();
  for (size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    json consulted = json::array();
    for (Cell c : s.consulted) consulted.push_back(cell_view(g, trace.kind, c));
    steps.push_back({{"index", i},
                     {"stack", s.stack},
                     {"stackText", render_stack(trace, s)},
                     {"input", names(g, s.remaining)},
                     {"move", enum_name(kStepKinds, s.kind)},
                     {"action", s.action},
                     {"consulted", consulted}});
  }
  const auto& o = trace.outcome;
  json outcome = {{"accepted", o.accepted},
                  {"reason", o.reason ? json(enum_name(kRejectReasons, *o.reason)) : json(nullptr)},
                  {"step", o.step},
                  {"cell", o.cell ? cell_view(g, trace.kind, *o.cell) : json(nullptr)},
                  {"message", o.message}};
  return {{"parser", parser_name(trace.kind)}, {"steps", steps}, {"outcome", outcome}};
}

json gen_result_json(const Analyses& a, ParserKind kind, Cell cell, const GenResult& r) {
  const Grammar& g = trace_grammar(a, kind);
  json out = {{"parser", parser_name(kind)},
              {"cell", cell_view(g, kind, cell)},
              {"input", names(g, r.tokens)},
              {"inputText", join_tokens(g, r.tokens)},
              {"method", r.method == GenMethod::Heuristic ? "heuristic" : "search"},
              {"heuristicFailure", r.heuristic_failure},
              {"trace", trace_json(r.trace, g)}};
  json configs = json::array();
  for (const auto& c : r.configs) configs.push_back({{"stack", c.stack}, {"partial", c.partial}, {"third", c.third}});
  out["configs"] = configs;
  json forms = json::array();
  for (const auto& f : r.ll_forms) forms.push_back(names(g, f));
  out["llForms"] = forms;
  if (r.reduce) {
    json levels = json::array();
    for (const auto& l : r.reduce->levels) {
      json refinements = json::array();
      for (const auto& x : l.refinements) {
        refinements.push_back({{"rule", x.rule},
                               {"removedAfter", x.removed_after},
                               {"removedBefore", x.removed_before},
                               {"note", x.note}});
      }
      levels.push_back({{"cell", cell_view(g, kind, l.cell)},
                        {"production", g.production_text(l.production)},
                        {"beforeStates", l.before_states},
                        {"afterStates", l.after_states},
                        {"refinements", refinements}});
    }
    json rc = json::array();
    for (const auto& c : r.reduce->configs) rc.push_back({{"stack", c.stack}, {"partial", c.partial}, {"third", c.third}});
    out["reduce"] = {{"levels", levels},
                     {"chosenAfter", r.reduce->chosen_after},
                     {"chosenBefore", r.reduce->chosen_before},
                     {"configs", rc}};
  } else {
    out["reduce"] = nullptr;
  }
  return out;
}

json question_json(const Question& q) {
  return {{"id", q.id},
          {"kind", "question"},
          {"topic", topic_name(q.topic)},
          {"prompt", q.prompt},
          {"context", q.context},
          {"options", options_view(q.options)},
          {"multiSelect", q.multi_select}};
}

json hint_json(const Analyses& a, const HintQuestion& h) {
  json out = {{"id", h.id},
              {"kind", "hint"},
              {"hintKind", h.kind == HintKind::HintMCQ ? "mcq" : "string"},
              {"parent", h.parent},
              {"focus", {{"label", h.focus.label}, {"content", h.focus.content}}},
              {"prompt", h.prompt},
              {"context", h.context},
              {"options", options_view(h.options)},
              {"multiSelect", false}};
  if (h.kind == HintKind::HintString && h.trace) {
    const Grammar& g = trace_grammar(a, h.trace->kind);
    out["input"] = names(g, h.input);
    out["inputText"] = join_tokens(g, h.input);
    out["trace"] = trace_json(*h.trace, g);
  }
  return out;
}

json evaluation_json(const Evaluation& ev) {
  return {{"selected", ev.selected},
          {"missingCorrect", ev.missing_correct},
          {"selectedIncorrect", ev.selected_incorrect},
          {"correct", ev.correct_overall}};
}

json score_json(const Score& s) {
  return {{"firstTry", s.first_try}, {"afterHint", s.after_hint}, {"total", s.total}};
}

json pending_json(const Analyses& a, const Session& s) {
  if (const HintQuestion* h = pending_hint(s)) return hint_json(a, *h);
  if (s.current) return question_json(*s.current);
  return {{"kind", "finished"}};
}

json session_json(const Analyses& a, const Session& s) {
  json topics = json::array();
  for (Topic t : s.topics) topics.push_back(topic_name(t));
  json current_topic = s.topic_index < s.topics.size() ? json(topic_name(s.topics[s.topic_index])) : json(nullptr);
  return {{"id", s.id},
          {"grammarId", s.grammar_id},
          {"topics", topics},
          {"currentTopic", current_topic},
          {"seed", s.seed},
          {"finished", s.finished},
          {"hintStringEnabled", s.hint_string_enabled},
          {"score", score_json(s.score)},
          {"questionsAsked", s.questions_asked},
          {"historyLength", s.history.size()},
          {"pending", pending_json(a, s)}};
}

json progress_json(const Analyses& a, const Session& s) {
  json topics = json::array();
  for (size_t i = 0; i < s.topics.size(); ++i) {
    const Topic t = s.topics[i];
    Score sc;
    int asked = 0;
    for (const auto& e : s.history) {
      if (e.topic != t) continue;
      if (e.kind == HistoryEvent::Kind::Asked) ++asked;
      if (e.kind != HistoryEvent::Kind::Answered) continue;
      if (e.outcome == HistoryEvent::Outcome::FirstTry) ++sc.first_try;
      if (e.outcome == HistoryEvent::Outcome::AfterHint) ++sc.after_hint;
      if (e.outcome != HistoryEvent::Outcome::Repeat) ++sc.total;
    }
    size_t available = question_targets(a, t).size();
    if (s.per_topic_limit) available = std::min(available, s.per_topic_limit);
    topics.push_back({{"topic", topic_name(t)},
                      {"firstTry", sc.first_try},
                      {"afterHint", sc.after_hint},
                      {"total", sc.total},
                      {"asked", asked},
                      {"available", available},
                      {"completed", i < s.topic_index}});
  }
  return {{"sessionId", s.id}, {"score", score_json(s.score)}, {"topics", topics}, {"finished", s.finished}};
}

json submit_json(const Analyses& a, const Session& s, const SubmitResult& r) {
  json out = {{"answered", r.answered},
              {"kind", r.hint ? "hint" : "question"},
              {"correct", r.correct},
              {"score", score_json(s.score)},
              {"pending", pending_json(a, s)}};
  if (r.hint) {
    out["revealedAnswer"] = r.revealed_hint_answer
                                ? json{{"label", r.revealed_hint_answer->label},
                                       {"content", r.revealed_hint_answer->content}}
                                : json(nullptr);
    return out;
  }
  json hints = json::array();
  for (const auto& h : r.action.hints) hints.push_back(hint_json(a, h));
  out["evaluation"] = evaluation_json(*r.evaluation);
  out["hints"] = hints;
  out["next"] = r.action.next == TutorAction::Next::Repeat ? "repeat" : "advance";
  out["revealed"] = r.action.reveal;
  out["explanation"] = r.action.explanation;
  return out;
}

LlTable ll_table_from_json(const Analyses& a, const json& doc) {
  const json& j = doc.contains("llTable") ? doc.at("llTable") : doc;
  const Grammar& g = a.grammar;
  if (!j.is_object() || !j.contains("cells") || !j.at("cells").is_array()) {
    throw std::invalid_argument("an LL table needs a \"cells\" array");
  }
  LlTable t;
  t.rows = a.ll.rows;
  t.columns = a.ll.columns;
  for (const auto& c : j.at("cells")) {
    auto row = g.find(c.at("row").get<std::string>());
    auto col = g.find(c.at("column").get<std::string>());
    if (!row || !g.is_nonterminal(*row)) throw std::invalid_argument("unknown row " + c.at("row").dump());
    if (!col || !(g.is_terminal(*col) || *col == kEndMarker)) {
      throw std::invalid_argument("unknown column " + c.at("column").dump());
    }
    t.set({*row, *col}, c.at("productions").get<std::set<int>>());
  }
  return t;
}

SlrTable slr_table_from_json(const Analyses& a, const json& doc) {
  const json& j = doc.contains("slrTable") ? doc.at("slrTable") : doc;
  const Grammar& g = a.augmented;
  if (!j.is_object() || !j.contains("cells") || !j.at("cells").is_array()) {
    throw std::invalid_argument("an SLR table needs a \"cells\" array");
  }
  SlrTable t;
  t.state_count = j.value("states", a.slr.state_count);
  t.action_columns = a.slr.action_columns;
  t.goto_columns = a.slr.goto_columns;
  for (const auto& c : j.at("cells")) {
    const int row = c.at("row").get<int>();
    auto col = g.find(c.at("column").get<std::string>());
    if (row < 0) throw std::invalid_argument("negative state " + std::to_string(row));
    if (!col || *col == kEpsilon || *col == g.start()) {
      throw std::invalid_argument("unknown column " + c.at("column").dump());
    }
    const bool is_goto = g.is_nonterminal(*col);
    std::set<LrAction> entries;
    for (const auto& e : c.at("entries")) {
      const std::string text = e.get<std::string>();
      LrAction act;
      try {
        if (text == "acc") {
          act = {LrAction::Kind::Accept, 0};
        } else if (!text.empty() && (text[0] == 's' || text[0] == 'r')) {
          act = {text[0] == 's' ? LrAction::Kind::Shift : LrAction::Kind::Reduce, std::stoi(text.substr(1))};
        } else {
          act = {LrAction::Kind::Goto, std::stoi(text)};
        }
      } catch (const std::logic_error&) {
        throw std::invalid_argument("bad table entry '" + text + "'");
      }
      entries.insert(act);
    }
    t.set({row, *col}, std::move(entries), is_goto);
  }
  return t;
}

json session_to_store(const Session& s) {
  json topics = json::array();
  for (Topic t : s.topics) topics.push_back(topic_name(t));
  json hints = json::array();
  for (const auto& h : s.pending_hints) hints.push_back(hint_store(h));
  json history = json::array();
  for (const auto& e : s.history) {
    history.push_back({{"kind", enum_name(kEventKinds, e.kind)},
                       {"item", e.item},
                       {"topic", topic_name(e.topic)},
                       {"selected", e.selected},
                       {"correct", e.correct},
                       {"outcome", enum_name(kOutcomes, e.outcome)}});
  }
  return {{"id", s.id},
          {"grammarId", s.grammar_id},
          {"grammarSource", s.grammar_source},
          {"topics", topics},
          {"topicIndex", s.topic_index},
          {"perTopicLimit", s.per_topic_limit},
          {"topicAsked", s.topic_asked},
          {"options",
           {{"optionCount", s.options.option_count},
            {"hintProbability", s.options.hint_probability},
            {"hintRounds", s.options.hint_rounds},
            {"hintSearchLength", s.options.hint_search_length}}},
          {"seed", s.seed},
          {"rngCounter", s.rng_counter},
          {"current", s.current ? question_store(*s.current) : json(nullptr)},
          {"wrongAttempts", s.wrong_attempts},
          {"pendingHints", hints},
          {"hintAttempts", s.hint_attempts},
          {"asked", s.asked},
          {"questionsAsked", s.questions_asked},
          {"history", history},
          {"score", score_json(s.score)},
          {"hintStringEnabled", s.hint_string_enabled},
          {"finished", s.finished}};
}

Session session_from_store(const json& j) {
  Session s;
  s.id = j.at("id");
  s.grammar_id = j.at("grammarId");
  s.grammar_source = j.at("grammarSource");
  for (const auto& t : j.at("topics")) s.topics.push_back(topic_from(t));
  s.topic_index = j.at("topicIndex");
  s.per_topic_limit = j.at("perTopicLimit");
  s.topic_asked = j.at("topicAsked");
  const auto& o = j.at("options");
  s.options.option_count = o.at("optionCount");
  s.options.hint_probability = o.at("hintProbability");
  s.options.hint_rounds = o.at("hintRounds");
  s.options.hint_search_length = o.at("hintSearchLength");
  s.seed = j.at("seed");
  s.rng_counter = j.at("rngCounter");
  if (!j.at("current").is_null()) s.current = question_load(j.at("current"));
  s.wrong_attempts = j.at("wrongAttempts");
  for (const auto& h : j.at("pendingHints")) s.pending_hints.push_back(hint_load(h));
  s.hint_attempts = j.at("hintAttempts");
  s.asked = j.at("asked").get<std::set<std::string>>();
  s.questions_asked = j.at("questionsAsked");
  for (const auto& e : j.at("history")) {
    s.history.push_back({enum_from<HistoryEvent::Kind>(kEventKinds, e.at("kind")),
                         e.at("item"),
                         topic_from(e.at("topic")),
                         e.at("selected").get<std::set<std::string>>(),
                         e.at("correct"),
                         enum_from<HistoryEvent::Outcome>(kOutcomes, e.at("outcome"))});
  }
  const auto& sc = j.at("score");
  s.score = {sc.at("firstTry"), sc.at("afterHint"), sc.at("total")};
  s.hint_string_enabled = j.at("hintStringEnabled");
  s.finished = j.at("finished");
  return s;
}

}  // namespace parsetutor::io
