#pragma once

#include <optional>
#include <string>

#include "parsetutor/analysis.hpp"

namespace parsetutor {

/// Fixed-width text views of the analyses. A hidden cell prints as "?".
std::string render_first_follow(const Grammar& g, const FirstFollow& ff);
std::string render_ll_table(const Grammar& g, const LlTable& t,
                            std::optional<Cell> hidden = std::nullopt);
std::string render_slr_table(const Grammar& g_aug, const SlrTable& t,
                             std::optional<Cell> hidden = std::nullopt);
std::string render_item_set(const Grammar& g_aug, const ItemSet& s);
std::string render_item_sets(const Grammar& g_aug, const ViablePrefixDfa& dfa);
std::string render_numbered_productions(const Grammar& g);

std::string symbol_display(const Grammar& g, SymbolId s);  // "ε" for epsilon
std::string ll_entry_text(const Grammar& g, const std::set<int>& productions);
std::string slr_entry_text(const std::set<LrAction>& entries);

}  // namespace parsetutor
