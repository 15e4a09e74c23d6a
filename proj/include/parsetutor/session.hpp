#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "parsetutor/analysis.hpp"
#include "parsetutor/quiz.hpp"

namespace parsetutor {

/// An answer names a question or hint that is not the one awaiting an answer.
class StaleQuestion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Score {
  int first_try = 0;
  int after_hint = 0;
  int total = 0;  // questions closed, including revealed ones
  bool operator==(const Score&) const = default;
};

struct HistoryEvent {
  enum class Kind { Asked, Answered, HintIssued, HintAnswered, TopicCompleted };
  // Outcome of an Answered event.
  enum class Outcome { None, FirstTry, AfterHint, Repeat, Revealed };

  Kind kind = Kind::Asked;
  std::string item;  // question or hint id
  Topic topic = Topic::FirstSet;
  std::set<std::string> selected;
  bool correct = false;
  Outcome outcome = Outcome::None;
  bool operator==(const HistoryEvent&) const = default;
};

/// Wrong answers to one hint before its answer is revealed.
inline constexpr int kHintAttempts = 2;

struct Session {
  std::string id;
  std::string grammar_id;
  std::string grammar_source;
  std::vector<Topic> topics;
  size_t topic_index = 0;
  size_t per_topic_limit = 0;  // 0: every target once
  size_t topic_asked = 0;
  QuizOptions options;

  // Each random decision draws from Rng(seed, rng_counter++), so the session
  // resumes identically from its stored state.
  uint64_t seed = 0;
  uint64_t rng_counter = 0;

  std::optional<Question> current;
  int wrong_attempts = 0;
  std::vector<HintQuestion> pending_hints;  // answered front first
  int hint_attempts = 0;
  std::set<std::string> asked;  // target keys
  int questions_asked = 0;

  std::vector<HistoryEvent> history;  // append-only
  Score score;
  bool hint_string_enabled = true;
  bool finished = false;

  bool operator==(const Session&) const = default;
};

struct SessionSettings {
  std::vector<Topic> topics;  // empty: all topics
  uint64_t seed = 0;
  size_t per_topic_limit = 0;
  QuizOptions options;
};

/// Generates the first question. The grammar must already have been analysed.
Session create_session(const Analyses& a, std::string id, std::string grammar_id,
                       std::string grammar_source, const SessionSettings& settings);

struct SubmitResult {
  bool hint = false;  // the answer was to a hint question
  std::string answered;
  std::optional<Evaluation> evaluation;  // question answers
  bool correct = false;
  TutorAction action;  // question answers: hints issued, repeat or advance, reveal
  std::optional<Option> revealed_hint_answer;  // hint cap reached
};

/// Throws StaleQuestion for an id that is not awaiting an answer and
/// std::invalid_argument for bad labels or a multi-label single-select answer.
SubmitResult submit_answer(Session& s, const Analyses& a, const std::string& id,
                           const std::set<std::string>& selected);

/// The hint awaiting an answer, if any. Otherwise the current question is.
const HintQuestion* pending_hint(const Session& s);

/// Score recomputed from the history alone.
Score score_from_history(const Session& s);

}  // namespace parsetutor
