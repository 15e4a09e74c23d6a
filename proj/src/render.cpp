#include "parsetutor/render.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace parsetutor {

std::string symbol_display(const Grammar& g, SymbolId s) {
  return s == kEpsilon ? std::string("ε") : g.name(s);
}

namespace {

// Display width counting UTF-8 code points.
size_t width(const std::string& s) {
  size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string pad(const std::string& s, size_t w) { return s + std::string(w - std::min(w, width(s)), ' '); }

std::string grid(const std::vector<std::vector<std::string>>& rows) {
  std::vector<size_t> widths;
  for (const auto& r : rows) {
    if (widths.size() < r.size()) widths.resize(r.size(), 0);
    for (size_t i = 0; i < r.size(); ++i) widths[i] = std::max(widths[i], width(r[i]));
  }
  std::string out;
  for (const auto& r : rows) {
    std::string line;
    for (size_t i = 0; i < r.size(); ++i) line += (i ? " | " : "") + pad(r[i], widths[i]);
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

std::string set_text(const Grammar& g, const std::set<SymbolId>& s) {
  std::string out = "{";
  bool first = true;
  for (SymbolId x : s) {
    if (x == kEndMarker) continue;
    out += (first ? "" : ", ") + symbol_display(g, x);
    first = false;
  }
  if (s.count(kEndMarker)) out += (first ? "" : ", ") + std::string(kEndMarkerToken);
  return out + "}";
}

}  // namespace

std::string ll_entry_text(const Grammar& g, const std::set<int>& productions) {
  std::string out;
  for (int p : productions) out += (out.empty() ? "" : " / ") + g.production_text(p);
  return out;
}

std::string slr_entry_text(const std::set<LrAction>& entries) {
  std::string out;
  for (const auto& e : entries) out += (out.empty() ? "" : "/") + action_text(e);
  return out;
}

std::string render_first_follow(const Grammar& g, const FirstFollow& ff) {
  std::vector<std::vector<std::string>> rows{{"", "FIRST", "FOLLOW"}};
  for (SymbolId nt : g.nonterminals()) {
    rows.push_back({g.name(nt), set_text(g, ff.first.at(nt)), set_text(g, ff.follow.at(nt))});
  }
  return grid(rows);
}

std::string render_ll_table(const Grammar& g, const LlTable& t, std::optional<Cell> hidden) {
  std::vector<std::vector<std::string>> rows{{""}};
  for (SymbolId c : t.columns) rows[0].push_back(g.name(c));
  for (SymbolId r : t.rows) {
    std::vector<std::string> row{g.name(r)};
    for (SymbolId c : t.columns) {
      Cell cell{r, c};
      if (hidden == cell) {
        row.push_back("?");
      } else {
        const auto* e = t.at(cell);
        row.push_back(e ? ll_entry_text(g, *e) : "");
      }
    }
    rows.push_back(std::move(row));
  }
  return grid(rows);
}

std::string render_slr_table(const Grammar& g, const SlrTable& t, std::optional<Cell> hidden) {
  std::vector<std::vector<std::string>> rows{{"state"}};
  for (SymbolId c : t.action_columns) rows[0].push_back(g.name(c));
  for (SymbolId c : t.goto_columns) rows[0].push_back(g.name(c));
  for (int s = 0; s < t.state_count; ++s) {
    std::vector<std::string> row{std::to_string(s)};
    auto add = [&](SymbolId c) {
      Cell cell{s, c};
      if (hidden == cell) {
        row.push_back("?");
      } else {
        const auto* e = t.at(cell);
        row.push_back(e ? slr_entry_text(*e) : "");
      }
    };
    for (SymbolId c : t.action_columns) add(c);
    for (SymbolId c : t.goto_columns) add(c);
    rows.push_back(std::move(row));
  }
  return grid(rows);
}

std::string render_item_set(const Grammar& g, const ItemSet& s) {
  std::string out = "I" + std::to_string(s.id) + ":\n";
  for (const auto& it : s.items) out += "  " + item_text(g, it) + "\n";
  return out;
}

std::string render_item_sets(const Grammar& g, const ViablePrefixDfa& dfa) {
  std::string out;
  for (const auto& s : dfa.states) {
    out += render_item_set(g, s);
    for (auto [x, target] : dfa.edges(s.id)) {
      out += "  goto(I" + std::to_string(s.id) + ", " + g.name(x) + ") = I" +
             std::to_string(target) + "\n";
    }
  }
  return out;
}

std::string render_numbered_productions(const Grammar& g) {
  std::string out;
  for (const auto& p : g.productions()) {
    out += std::to_string(p.index) + ") " + g.production_text(p.index) + "\n";
  }
  return out;
}

}  // namespace parsetutor
