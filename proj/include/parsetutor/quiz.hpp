#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "parsetutor/analysis.hpp"
#include "parsetutor/grammar.hpp"
#include "parsetutor/parse_sim.hpp"

namespace parsetutor {

enum class Topic { FirstSet, FollowSet, LLTable, LLMoves, LR0ItemSets, SLRTable, SLRMoves };

const std::vector<Topic>& all_topics();
std::string_view topic_name(Topic t);  // "first-set", "ll-table", ...
std::optional<Topic> parse_topic(std::string_view name);

/// Seeded generator. Every draw is a raw 64-bit output of mt19937_64, so
/// sequences are identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t stream = 0);
  uint64_t next() { return engine_(); }
  size_t below(size_t n) { return n == 0 ? 0 : static_cast<size_t>(next() % n); }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

// Option values. Rules carry their content so that mutated, non-grammar rules
// can be offered as distractors.
struct SymbolChoice {
  SymbolId symbol = 0;
  auto operator<=>(const SymbolChoice&) const = default;
};
struct RuleChoice {
  SymbolId lhs = 0;
  std::vector<SymbolId> rhs;
  auto operator<=>(const RuleChoice&) const = default;
};
struct ActionChoice {
  LrAction action;
  auto operator<=>(const ActionChoice&) const = default;
};
struct ItemChoice {
  LR0Item item;  // production index of the augmented grammar
  auto operator<=>(const ItemChoice&) const = default;
};
struct MoveChoice {
  std::string move;
  auto operator<=>(const MoveChoice&) const = default;
};
struct EmptyChoice {
  auto operator<=>(const EmptyChoice&) const = default;
};
using Choice = std::variant<SymbolChoice, RuleChoice, ActionChoice, ItemChoice, MoveChoice, EmptyChoice>;

/// Display text of a choice. Rule and item text uses the augmented grammar's
/// names, which include every original name.
std::string choice_text(const Analyses& a, const Choice& c);

struct Option {
  std::string label;
  std::string content;
  Choice value;
  bool operator==(const Option&) const = default;
};

/// What a question asks about.
struct Target {
  SymbolId symbol = 0;         // FirstSet, FollowSet
  Cell cell;                   // LLTable, SLRTable
  int state = 0;               // LR0ItemSets
  std::vector<SymbolId> input;  // LLMoves, SLRMoves
  int step = 0;
  auto operator<=>(const Target&) const = default;
};

std::string target_key(Topic topic, const Target& t);

struct Question {
  std::string id;
  Topic topic = Topic::FirstSet;
  std::string prompt;
  std::string context;
  std::vector<Option> options;
  std::set<std::string> correct;
  bool multi_select = true;
  Target target;
  bool operator==(const Question&) const = default;
};

struct Evaluation {
  std::set<std::string> selected;
  std::set<std::string> missing_correct;
  std::set<std::string> selected_incorrect;
  bool correct_overall = false;
  bool operator==(const Evaluation&) const = default;
};

enum class HintKind { HintMCQ, HintString };

struct HintQuestion {
  std::string id;
  HintKind kind = HintKind::HintMCQ;
  std::string parent;
  Option focus;
  std::string prompt;
  std::string context;
  std::vector<Option> options;
  std::string correct;
  // Hint_String payload: the generated input and its failing parse on the
  // user's table.
  std::vector<SymbolId> input;
  std::optional<ParseTrace> trace;
  bool operator==(const HintQuestion&) const = default;
};

class TopicExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuizOptions {
  size_t option_count = 4;  // 3..6
  double hint_probability = 0.15;
  int hint_rounds = 2;
  size_t hint_search_length = 8;
  bool operator==(const QuizOptions&) const = default;
};

/// Targets in presentation order. Moves topics have none on conflicted tables.
std::vector<Target> question_targets(const Analyses& a, Topic topic);

/// Correct choices for a target, read off the analyses.
std::vector<Choice> correct_choices(const Analyses& a, Topic topic, const Target& t);

Question generate_question_for(const Analyses& a, Topic topic, const Target& target, Rng& rng,
                               const QuizOptions& opts = {});
/// Picks an unasked target uniformly. Throws TopicExhausted when none is left.
Question generate_question(const Analyses& a, Topic topic, Rng& rng,
                           const std::set<std::string>& asked, const QuizOptions& opts = {});

/// Correct choices plus distractors: the ranked pool first (ties shuffled),
/// then mutations, shrinking k rather than duplicating. Labels run a, b, c...
/// in the shuffled order. At most k - 1 correct choices are shown.
std::vector<Option> generate_options(const Analyses& a, const std::vector<Choice>& correct,
                                     const std::vector<std::vector<Choice>>& ranked_pool,
                                     const std::vector<Choice>& mutations, Rng& rng, size_t k);

/// Throws std::invalid_argument for a label that is not an option of q.
Evaluation evaluate_answer(const Question& q, const std::set<std::string>& selected);

/// Rule-catalog hint asking why `focus` belongs (or not) to the answer.
HintQuestion generate_hint_mcq(const Analyses& a, const Question& q, const Option& focus,
                               const QuizOptions& opts = {});

/// True when Hint_String applies: a table topic whose table is conflict-free.
bool hint_string_available(const Analyses& a, const Question& q);

/// Builds the user's table with the questioned cell set to `user_choice`,
/// finds an input the correct table accepts while exercising the cell and the
/// user table rejects. Falls back to a Hint_MCQ when no such input exists.
HintQuestion generate_hint_string(const Analyses& a, const Question& q, const Option& user_choice,
                                  const QuizOptions& opts = {});

struct TutorAction {
  enum class Next { Repeat, Advance };
  std::vector<HintQuestion> hints;
  Next next = Next::Advance;
  bool reveal = false;
  std::string explanation;  // the correct answer with its justifying rule
  bool operator==(const TutorAction&) const = default;
};

/// `wrong_attempts` counts earlier incorrect answers to q.
TutorAction next_step(const Analyses& a, const Question& q, const Evaluation& ev,
                      int wrong_attempts, Rng& rng, const QuizOptions& opts = {});

/// Answer to a hint question (single label). Unknown labels throw.
bool evaluate_hint(const HintQuestion& h, const std::string& label);

}  // namespace parsetutor
