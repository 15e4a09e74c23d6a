#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle.hpp"
#include "parsetutor/input_gen.hpp"
#include "util.hpp"

using namespace parsetutor;
using namespace testutil;

namespace {

std::string gen_text(const Analyses& a, ParserKind kind, Cell cell, const GenOptions& o = {}) {
  return join_tokens(a.grammar, generate_string(a, kind, cell, o).tokens);
}

}  // namespace

TEST_CASE("symbol graph edges and labels") {
  auto g = parse_grammar(kExpr);
  auto graph = build_symbol_graph(g);
  auto label = [&](const char* from, const char* to) {
    const auto* e = graph.edge(sym(g, from), sym(g, to));
    REQUIRE(e != nullptr);
    return g.production_text(e->production);
  };
  CHECK(label("E", "T") == "E -> T E'");
  CHECK(label("E", "E'") == "E -> T E'");
  CHECK(label("F", "(") == "F -> ( E )");
  CHECK(label("F", "E") == "F -> ( E )");
  CHECK(label("F", ")") == "F -> ( E )");
  CHECK(label("F", "id") == "F -> id");
  CHECK(graph.edge(sym(g, "T"), sym(g, "E")) == nullptr);

  auto s = parse_grammar("S -> a");
  auto gs = build_symbol_graph(s);
  REQUIRE(gs.edges.size() == 1);
  CHECK(gs.edges[0].from == s.start());
  CHECK(gs.edges[0].to == sym(s, "a"));

  auto g2 = parse_grammar(kG2);
  auto e = build_symbol_graph(g2).edge(g2.start(), sym(g2, "B"));
  REQUIRE(e != nullptr);
  CHECK(g2.production_text(e->production) == "S -> a A B b");
}

TEST_CASE("symbol graph labels prefer the shortest production") {
  auto g = parse_grammar("S -> a b c | b");
  auto graph = build_symbol_graph(g);
  CHECK(graph.edge(g.start(), sym(g, "b"))->production == 1);
  CHECK(graph.edge(g.start(), sym(g, "a"))->production == 0);
}

TEST_CASE("shortest paths follow the worked example") {
  auto g = parse_grammar(kExpr);
  auto graph = build_symbol_graph(g);
  auto p1 = graph.shortest_path(sym(g, "E"), sym(g, "T'")).value();
  REQUIRE(p1.size() == 2);
  CHECK(p1[0].to == sym(g, "T"));
  CHECK(p1[1].to == sym(g, "T'"));
  auto p2 = graph.shortest_path(sym(g, "T'"), sym(g, ")")).value();
  REQUIRE(p2.size() == 2);
  CHECK(p2[0].to == sym(g, "F"));
  CHECK(g.production_text(p2[1].production) == "F -> ( E )");
  CHECK(graph.shortest_path(sym(g, "F"), sym(g, "F"))->empty());
  CHECK_FALSE(graph.shortest_path(sym(g, "id"), sym(g, "E")).has_value());
}

TEST_CASE("LL generation on worked examples") {
  auto a = analyze(parse_grammar(kExpr));
  const auto& g = a.grammar;
  auto r = gen_ll_string(a, {sym(g, "T'"), sym(g, ")")});
  CHECK(join_tokens(g, r.tokens) == "id * ( id )");
  CHECK(r.method == GenMethod::Heuristic);
  CHECK(r.trace.accepted());
  CHECK(cell_exercised(r.trace, {sym(g, "T'"), sym(g, ")")}));
  REQUIRE(r.ll_forms.size() >= 3);
  CHECK(g.sequence_text(r.ll_forms[2]) == "F T' E'");

  CHECK(gen_text(a, ParserKind::LL, {sym(g, "F"), sym(g, "id")}) == "id");
  auto shortest = oracle::shortest_exercising(a, ParserKind::LL, {sym(g, "F"), sym(g, "id")}, 3);
  CHECK(join_tokens(g, *shortest) == "id");

  auto a2 = analyze(parse_grammar(kG2));
  CHECK(gen_text(a2, ParserKind::LL, {sym(a2.grammar, "B"), sym(a2.grammar, "b")}) == "a b");
}

TEST_CASE("LL phase one produces sentential forms") {
  for (const auto& entry : oracle::corpus()) {
    auto a = analyze(parse_grammar(entry.text));
    if (!a.ll.conflict_free()) continue;
    CAPTURE(entry.name);
    const auto& g = a.grammar;
    for (const auto& [cell, entries] : a.ll.cells) {
      auto r = gen_ll_string(a, cell);
      REQUIRE(!r.ll_forms.empty());
      // Each form rewrites exactly one nonterminal of the previous one.
      for (size_t i = 1; i < r.ll_forms.size(); ++i) {
        const auto& prev = r.ll_forms[i - 1];
        const auto& cur = r.ll_forms[i];
        if (cur == std::vector<SymbolId>{cell.row}) continue;  // phase two starts again from N
        bool found = false;
        for (size_t pos = 0; pos < prev.size() && !found; ++pos) {
          if (!g.is_nonterminal(prev[pos])) continue;
          for (int pi : g.productions_of(prev[pos])) {
            std::vector<SymbolId> x(prev.begin(), prev.begin() + static_cast<long>(pos));
            const auto& rhs = g.production(pi).rhs;
            x.insert(x.end(), rhs.begin(), rhs.end());
            x.insert(x.end(), prev.begin() + static_cast<long>(pos) + 1, prev.end());
            if (x == cur) found = true;
          }
        }
        CHECK(found);
      }
    }
  }
}

TEST_CASE("LR shift generation reproduces the configuration log") {
  auto a = analyze(parse_grammar(kG3));
  const auto& g = a.augmented;
  auto r = gen_lr_shift_string(a, {3, sym(g, "d")});
  CHECK(join_tokens(g, r.tokens) == "a d d");
  CHECK(r.method == GenMethod::Heuristic);
  std::vector<GenConfig> expected{
      {"0a3d4", "ad", "{a, d, $}"}, {"0a3C6", "ad", "{a, d, $}"}, {"0C2", "ad", "{a, d}"},
      {"0C2d4", "add", "{a, d, $}"}, {"0C2C5", "add", "{$}"},     {"0S1", "add$", ""},
      {"accept", "add$", ""},
  };
  CHECK(r.configs == expected);

  auto first = gen_lr_shift_string(a, {0, sym(g, "a")});
  auto shortest = oracle::shortest_exercising(a, ParserKind::SLR, {0, sym(g, "a")}, 4);
  CHECK(first.tokens.size() == shortest->size());
  CHECK(first.tokens.front() == sym(g, "a"));

  auto any = gen_lr_shift_string(a, {0, sym(g, "S")});
  CHECK(any.trace.accepted());
  CHECK_THROWS_AS(gen_lr_shift_string(a, {4, sym(g, "a")}), std::invalid_argument);
}

TEST_CASE("LR reduce generation reproduces the refinement") {
  auto a = analyze(parse_grammar(kG3));
  const auto& g = a.augmented;
  auto r = gen_lr_reduce_string(a, {4, sym(g, "a")});
  CHECK(join_tokens(g, r.tokens) == "d a d");
  REQUIRE(r.reduce.has_value());
  const auto& setup = *r.reduce;
  REQUIRE(setup.levels.size() == 1);
  CHECK(setup.levels[0].before_states == std::vector<int>{0, 2, 3});
  CHECK(setup.levels[0].after_states == std::vector<int>{2, 5, 6});
  const auto& refs = setup.levels[0].refinements;
  REQUIRE(refs.size() == 2);
  CHECK(refs[0].rule == 1);
  CHECK(refs[0].removed_after == std::vector<int>{5});
  CHECK(refs[0].removed_before == std::vector<int>{2});
  CHECK(refs[1].rule == 2);
  CHECK(setup.chosen_after == 2);
  CHECK(setup.chosen_before == 0);
  std::vector<GenConfig> stage_two{
      {"0C2a3", "da", "{a, d}"}, {"0C2a3d4", "dad", "{a, d, $}"}, {"0C2a3C6", "dad", "{a, d, $}"},
      {"0C2C5", "dad", "{$}"},   {"0S1", "dad$", ""},              {"accept", "dad$", ""},
  };
  CHECK(r.configs == stage_two);
  REQUIRE(setup.configs.size() == 4);
  CHECK(setup.configs[2].stack == "Ω0C2");
  CHECK(setup.configs[3] == GenConfig{"0C2", "a", "d"});

  CHECK(gen_text(a, ParserKind::SLR, {5, kEndMarker}) == "d d");
  CHECK(gen_text(a, ParserKind::SLR, {1, kEndMarker}) == "d d");
  auto s5 = oracle::shortest_exercising(a, ParserKind::SLR, {5, kEndMarker}, 4);
  CHECK(join_tokens(g, *s5) == "d d");
}

TEST_CASE("generation refuses conflicted tables and empty cells") {
  auto a = analyze(parse_grammar(kG4));
  CHECK_THROWS_AS(gen_ll_string(a, {sym(a.grammar, "E"), sym(a.grammar, "0")}), GenerationError);
  auto b = analyze(parse_grammar(kG3));
  try {
    gen_lr_string(b, {5, sym(b.grammar, "a")});
    FAIL("expected an error");
  } catch (const GenerationError& e) {
    CHECK(e.kind() == GenerationError::Kind::EmptyCell);
  }
}

namespace {

// A reduce cell is exercisable iff its lookahead can follow the complete
// item in that state in some parse.
bool exercisable(const Analyses& a, ParserKind kind, Cell cell,
                 const std::map<std::pair<int, int>, std::set<SymbolId>>& lookaheads) {
  if (kind == ParserKind::LL) return true;
  const auto& act = *a.slr.at(cell)->begin();
  if (act.kind != LrAction::Kind::Reduce) return true;
  auto it = lookaheads.find({cell.row, act.target});
  return it != lookaheads.end() && it->second.count(cell.column);
}

}  // namespace

TEST_CASE("every exercisable cell of every conflict-free corpus table is exercised") {
  size_t cells = 0, searched_cells = 0, unbounded = 0, dead = 0;
  for (const auto& entry : oracle::corpus()) {
    auto a = analyze(parse_grammar(entry.text));
    CAPTURE(entry.name);
    auto lookaheads = oracle::lr1_lookaheads(a);
    std::vector<std::pair<ParserKind, Cell>> work;
    if (a.ll.conflict_free()) {
      for (const auto& [cell, e] : a.ll.cells) work.push_back({ParserKind::LL, cell});
    }
    if (a.slr.conflict_free()) {
      for (const auto& [cell, e] : a.slr.action) work.push_back({ParserKind::SLR, cell});
      for (const auto& [cell, e] : a.slr.goto_table) work.push_back({ParserKind::SLR, cell});
    }
    for (auto [kind, cell] : work) {
      CAPTURE(cell.row);
      CAPTURE(cell.column);
      ++cells;
      if (!exercisable(a, kind, cell, lookaheads)) {
        // No accepted string consults this cell; generation must say so.
        ++dead;
        CHECK_THROWS_AS(generate_string(a, kind, cell), GenerationError);
        size_t searched = 0;
        CHECK_FALSE(oracle::shortest_exercising_bounded(a, kind, cell, 8, 200000, searched));
        continue;
      }
      GenResult r;
      try {
        r = generate_string(a, kind, cell);
      } catch (const GenerationError& e) {
        FAIL_CHECK(std::string(e.what()));
        continue;
      }
      if (r.method == GenMethod::Search) ++searched_cells;
      CHECK(r.trace.accepted());
      CHECK(cell_exercised(r.trace, cell));
      CHECK(oracle::member(a.grammar, r.tokens));
      size_t searched = 0;
      auto shortest = oracle::shortest_exercising_bounded(a, kind, cell, r.tokens.size(), 200000, searched);
      if (shortest) {
        CHECK(r.tokens.size() <= 2 * shortest->size());
      } else {
        // Nothing up to `searched` exists, so the shortest is longer.
        CHECK(searched < r.tokens.size());
        if (r.tokens.size() > 2 * (searched + 1)) ++unbounded;
      }
      if (kind == ParserKind::SLR) {
        CHECK(r.iterations <= lr_generation_budget(a));
      }
    }
  }
  MESSAGE("cells: " << cells << ", resolved by search: " << searched_cells
                    << ", unexercisable: " << dead << ", length bound not checkable: " << unbounded);
}

TEST_CASE("lookahead oracle agrees with the SLR table on G3") {
  auto a = analyze(parse_grammar(kG3));
  auto la = oracle::lr1_lookaheads(a);
  // Every G3 reduce cell is reachable: the table has no spurious lookahead.
  for (const auto& [cell, e] : a.slr.action) {
    if (e.begin()->kind == LrAction::Kind::Reduce) CHECK(la.at({cell.row, e.begin()->target}).count(cell.column));
  }
  CHECK(la.at({5, 1}) == std::set<SymbolId>{kEndMarker});
}

TEST_CASE("used choices are never repeated") {
  for (const auto& entry : oracle::corpus()) {
    auto a = analyze(parse_grammar(entry.text));
    if (!a.slr.conflict_free()) continue;
    for (const auto& [cell, e] : a.slr.action) {
      GenResult r;
      try {
        r = generate_string(a, ParserKind::SLR, cell, {.allow_search = false, .length_guard = false});
      } catch (const GenerationError&) {
        continue;
      }
      // Each shift decision is a distinct (state, symbol) action cell.
      for (const auto& [state, column] : r.used_choices) {
        const auto* e = a.slr.at({state, column});
        REQUIRE(e != nullptr);
        CHECK(e->begin()->kind == LrAction::Kind::Shift);
      }
      std::set<std::pair<int, SymbolId>> seen(r.choice_log.begin(), r.choice_log.end());
      CHECK(seen.size() == r.choice_log.size());
      CHECK(seen == r.used_choices);
    }
  }
}

TEST_CASE("search finds the shortest exercising string") {
  auto a = analyze(parse_grammar(kG3));
  auto found = search_exercising_string(a, ParserKind::SLR, {6, sym(a.grammar, "d")}, 8, 100000);
  auto oracle_best = oracle::shortest_exercising(a, ParserKind::SLR, {6, sym(a.grammar, "d")}, 6);
  REQUIRE(found.has_value());
  CHECK(found->size() == oracle_best->size());

  auto e = analyze(parse_grammar(kExpr));
  const auto& g = e.grammar;
  auto need_plus = [&](const std::vector<SymbolId>& w) {
    return std::count(w.begin(), w.end(), sym(g, "+")) >= 2;
  };
  auto s = search_exercising_string(e, ParserKind::LL, {sym(g, "F"), sym(g, "id")}, 8, 100000, need_plus);
  REQUIRE(s.has_value());
  CHECK(join_tokens(g, *s) == "id + id + id");
}

TEST_CASE("generation is deterministic") {
  auto a = analyze(parse_grammar(kExpr));
  for (const auto& [cell, e] : a.ll.cells) {
    auto x = gen_ll_string(a, cell);
    auto y = gen_ll_string(a, cell);
    CHECK(x.tokens == y.tokens);
    CHECK(x.trace == y.trace);
  }
}
