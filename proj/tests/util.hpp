#pragma once

#include <string>
#include <vector>

#include "parsetutor/analysis.hpp"
#include "parsetutor/grammar.hpp"
#include "parsetutor/parse_sim.hpp"

namespace testutil {

inline const char* kExpr =
    "E -> T E'\nE' -> + T E' | eps\nT -> F T'\nT' -> * F T' | eps\nF -> ( E ) | id\n";
inline const char* kG2 = "S -> a A B b\nA -> c | eps\nB -> d | eps\n";
inline const char* kG3 = "S -> C C\nC -> a C | d\n";
inline const char* kG4 = "E -> T + E | T\nT -> 0 | 1\n";

inline parsetutor::SymbolId sym(const parsetutor::Grammar& g, const std::string& name) {
  return g.find(name).value();
}

inline std::vector<parsetutor::SymbolId> toks(const parsetutor::Grammar& g, const std::string& s) {
  return parsetutor::tokenize_input(g, s);
}

inline std::set<parsetutor::SymbolId> syms(const parsetutor::Grammar& g,
                                           std::initializer_list<const char*> names) {
  std::set<parsetutor::SymbolId> out;
  for (const char* n : names) out.insert(sym(g, n));
  return out;
}

}  // namespace testutil
