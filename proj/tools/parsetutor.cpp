// Command-line front end: analysis dumps, witness strings, parse traces, an
// interactive quiz and the HTTP service.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "parsetutor/input_gen.hpp"
#include "parsetutor/json_io.hpp"
#include "parsetutor/render.hpp"
#include "parsetutor/service.hpp"
#include "parsetutor/session.hpp"

using namespace parsetutor;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kGrammar = 2, kInternal = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ParserKind parser_kind(const std::string& s) { return s == "ll" ? ParserKind::LL : ParserKind::SLR; }

// "ROW:COL" where either part may itself contain ':'; the first split naming
// a real cell wins.
Cell parse_cell(const Analyses& a, ParserKind kind, const std::string& text) {
  const Grammar& g = kind == ParserKind::LL ? a.grammar : a.augmented;
  for (size_t pos = text.find(':'); pos != std::string::npos; pos = text.find(':', pos + 1)) {
    const std::string row = text.substr(0, pos);
    auto col = g.find(text.substr(pos + 1));
    if (!col || !(g.is_terminal(*col) || *col == kEndMarker || (kind == ParserKind::SLR && g.is_nonterminal(*col)))) {
      continue;
    }
    if (kind == ParserKind::LL) {
      auto r = g.find(row);
      if (r && g.is_nonterminal(*r)) return {*r, *col};
    } else if (!row.empty() && row.find_first_not_of("0123456789") == std::string::npos) {
      const int state = std::stoi(row);
      if (state < a.slr.state_count) return {state, *col};
    }
  }
  throw UsageError("'" + text + "' does not name a cell of the " + (kind == ParserKind::LL ? "LL" : "SLR") +
                   " table");
}

std::string analysis_text(const Analyses& a) {
  std::ostringstream out;
  out << "Grammar\n" << render_numbered_productions(a.augmented) << '\n';
  out << "FIRST / FOLLOW\n" << render_first_follow(a.grammar, a.ff) << '\n';
  out << "LL(1) table" << (a.ll.conflict_free() ? "" : " (conflicts)") << '\n'
      << render_ll_table(a.grammar, a.ll) << '\n';
  out << "LR(0) item sets\n" << render_item_sets(a.augmented, a.dfa) << '\n';
  out << "SLR table" << (a.slr.conflict_free() ? "" : " (conflicts)") << '\n'
      << render_slr_table(a.augmented, a.slr);
  return out.str();
}

int cmd_analyze(const std::string& file, const std::string& format) {
  const Analyses a = analyze(parse_grammar(read_file(file)));
  if (format == "json") {
    std::cout << io::analysis_json(a).dump(2) << '\n';
  } else {
    std::cout << analysis_text(a);
  }
  return kOk;
}

int cmd_genstring(const std::string& file, const std::string& kind_name, const std::string& cell_text,
                  const std::string& format) {
  const Analyses a = analyze(parse_grammar(read_file(file)));
  const ParserKind kind = parser_kind(kind_name);
  const Cell cell = parse_cell(a, kind, cell_text);
  const GenResult r = generate_string(a, kind, cell);
  const Grammar& g = kind == ParserKind::LL ? a.grammar : a.augmented;
  if (format == "json") {
    std::cout << io::gen_result_json(a, kind, cell, r).dump(2) << '\n';
  } else {
    std::cout << join_tokens(g, r.tokens) << "\n\n" << render_text(r.trace, g);
  }
  return kOk;
}

int cmd_parse(const std::string& file, const std::string& kind_name, const std::string& table,
              const std::string& input, const std::string& format) {
  const Analyses a = analyze(parse_grammar(read_file(file)));
  const ParserKind kind = parser_kind(kind_name);
  const Grammar& g = kind == ParserKind::LL ? a.grammar : a.augmented;
  std::vector<SymbolId> tokens;
  try {
    tokens = tokenize_input(g, input);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  ParseTrace trace;
  if (table == "correct") {
    trace = parse_with_correct_table(a, kind, tokens);
  } else {
    const json doc = json::parse(read_file(table), nullptr, false);
    if (doc.is_discarded()) throw UsageError(table + " is not valid JSON");
    try {
      trace = kind == ParserKind::LL ? ll_parse(io::ll_table_from_json(a, doc), a.grammar, tokens)
                                     : lr_parse(io::slr_table_from_json(a, doc), a.augmented, tokens);
    } catch (const std::invalid_argument& e) {
      throw UsageError(table + ": " + e.what());
    } catch (const json::exception& e) {
      throw UsageError(table + ": " + e.what());
    }
  }
  if (format == "json") {
    std::cout << io::trace_json(trace, g).dump(2) << '\n';
  } else {
    std::cout << render_text(trace, g);
    if (!trace.accepted()) std::cout << "rejected: " << trace.outcome.message << '\n';
  }
  return kOk;
}

void print_options(const std::vector<Option>& options) {
  for (const auto& o : options) std::cout << "  (" << o.label << ") " << o.content << '\n';
}

std::set<std::string> read_labels(const std::string& line) {
  std::set<std::string> out;
  std::string cur;
  for (char c : line + " ") {
    if (c == ' ' || c == ',' || c == '\t' || c == '\r') {
      if (!cur.empty()) out.insert(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

int cmd_quiz(const std::string& file, const std::vector<std::string>& topic_names, uint64_t seed, size_t limit,
             double hint_probability) {
  const std::string source = read_file(file);
  const Analyses a = analyze(parse_grammar(source));
  SessionSettings settings;
  for (const auto& name : topic_names) {
    auto t = parse_topic(name);
    if (!t) throw UsageError("unknown topic '" + name + "'");
    settings.topics.push_back(*t);
  }
  settings.seed = seed;
  settings.per_topic_limit = limit;
  settings.options.hint_probability = hint_probability;
  Session s = create_session(a, "cli", "cli", source, settings);

  std::string line;
  while (!s.finished) {
    std::string id;
    if (const HintQuestion* h = pending_hint(s)) {
      id = h->id;
      std::cout << "\n[hint] " << h->prompt << '\n';
      if (!h->context.empty()) std::cout << h->context << '\n';
      print_options(h->options);
      std::cout << "answer (one label)> " << std::flush;
    } else {
      const Question& q = *s.current;
      id = q.id;
      std::cout << "\n[" << q.id << ", " << topic_name(q.topic) << "] " << q.prompt << '\n';
      if (!q.context.empty()) std::cout << q.context << '\n';
      print_options(q.options);
      std::cout << (q.multi_select ? "answer (labels, space separated)> " : "answer (one label)> ") << std::flush;
    }
    if (!std::getline(std::cin, line)) break;
    try {
      const SubmitResult r = submit_answer(s, a, id, read_labels(line));
      if (r.hint) {
        if (r.correct) {
          std::cout << "Correct.\n";
        } else if (r.revealed_hint_answer) {
          std::cout << "Not quite. The answer is (" << r.revealed_hint_answer->label << ") "
                    << r.revealed_hint_answer->content << ".\n";
        } else {
          std::cout << "Not quite, try again.\n";
        }
        continue;
      }
      if (r.correct) {
        std::cout << "Correct.\n";
      } else {
        std::cout << "Incorrect.\n";
      }
      if (r.action.reveal) std::cout << r.action.explanation << '\n';
    } catch (const std::invalid_argument& e) {
      std::cout << e.what() << '\n';
    }
  }
  std::cout << "\nScore: " << s.score.first_try << " correct first try, " << s.score.after_hint
            << " after a hint, " << s.score.total << " questions.\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parsing tutor: grammar analyses, witness strings, parse traces and quizzes"};
  app.require_subcommand(1);

  std::string file, format = "text", kind = "slr", cell, table = "correct", input;
  std::vector<std::string> topics;
  uint64_t seed = 0;
  size_t limit = 0;
  double hint_probability = 0.15;
  ServiceConfig config;

  auto* analyze_cmd = app.add_subcommand("analyze", "Print FIRST/FOLLOW sets, parse tables, item sets and the DFA");
  analyze_cmd->add_option("grammar", file, "Grammar file")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

  auto* gen_cmd = app.add_subcommand("genstring", "Print an input string exercising a table cell, with its trace");
  gen_cmd->add_option("grammar", file, "Grammar file")->required()->check(CLI::ExistingFile);
  gen_cmd->add_option("--kind", kind, "ll or slr")->check(CLI::IsMember({"ll", "slr"}));
  gen_cmd->add_option("--cell", cell, "ROW:COL, a nonterminal or state and a column symbol")->required();
  gen_cmd->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

  auto* parse_cmd = app.add_subcommand("parse", "Print the parse trace of an input");
  parse_cmd->add_option("grammar", file, "Grammar file")->required()->check(CLI::ExistingFile);
  parse_cmd->add_option("--input", input, "Whitespace-separated terminals")->required();
  parse_cmd->add_option("--kind", kind, "ll or slr")->check(CLI::IsMember({"ll", "slr"}));
  parse_cmd->add_option("--table", table, "'correct' or a JSON table file");
  parse_cmd->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

  auto* quiz_cmd = app.add_subcommand("quiz", "Interactive quiz on standard input");
  quiz_cmd->add_option("grammar", file, "Grammar file")->required()->check(CLI::ExistingFile);
  quiz_cmd->add_option("--topics", topics, "Topics (default: all)")->delimiter(',');
  quiz_cmd->add_option("--seed", seed, "Random seed");
  quiz_cmd->add_option("--count", limit, "Questions per topic (0: every target once)");
  quiz_cmd->add_option("--hint-prob", hint_probability, "Hint probability after a correct answer")
      ->check(CLI::Range(0.0, 1.0));

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--host", config.host, "Bind address");
  serve_cmd->add_option("--port", config.port, "Port")->envname("PORT")->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--store", config.store_dir, "Store directory")->envname("STORE_DIR");
  serve_cmd->add_option("--hint-prob", config.hint_probability, "Hint probability after a correct answer")
      ->envname("HINT_PROB")
      ->check(CLI::Range(0.0, 1.0));
  serve_cmd->add_option("--seed", config.seed, "Base seed for sessions created without one")->envname("SEED");
  serve_cmd->add_option("--options", config.option_count, "Options per question")->check(CLI::Range(3, 6));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(file, format);
    if (*gen_cmd) return cmd_genstring(file, kind, cell, format);
    if (*parse_cmd) return cmd_parse(file, kind, table, input, format);
    if (*quiz_cmd) return cmd_quiz(file, topics, seed, limit, hint_probability);
    if (*serve_cmd) return serve(config) ? kOk : kInternal;
  } catch (const GrammarError& e) {
    std::cerr << "grammar error: " << e.what() << '\n';
    return kGrammar;
  } catch (const GenerationError& e) {
    // Asking for a string on a conflicted table or an empty cell is a usage
    // error; anything else is a generator failure.
    const bool usage = e.kind() == GenerationError::Kind::ConflictedTable ||
                       e.kind() == GenerationError::Kind::EmptyCell;
    std::cerr << "error: " << e.what() << '\n';
    return usage ? kUsage : kInternal;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
