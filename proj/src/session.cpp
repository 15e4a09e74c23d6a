#include "parsetutor/session.hpp"

#include <algorithm>

namespace parsetutor {

namespace {

void record(Session& s, HistoryEvent::Kind kind, const std::string& item, Topic topic,
            std::set<std::string> selected = {}, bool correct = false,
            HistoryEvent::Outcome outcome = HistoryEvent::Outcome::None) {
  s.history.push_back({kind, item, topic, std::move(selected), correct, outcome});
}

void advance(Session& s, const Analyses& a) {
  s.current.reset();
  s.wrong_attempts = 0;
  while (s.topic_index < s.topics.size()) {
    const Topic topic = s.topics[s.topic_index];
    if (s.per_topic_limit == 0 || s.topic_asked < s.per_topic_limit) {
      Rng rng(s.seed, s.rng_counter++);
      try {
        Question q = generate_question(a, topic, rng, s.asked, s.options);
        s.asked.insert(q.id);
        q.id = "q" + std::to_string(++s.questions_asked);
        ++s.topic_asked;
        record(s, HistoryEvent::Kind::Asked, q.id, topic);
        s.current = std::move(q);
        return;
      } catch (const TopicExhausted&) {
      }
    }
    record(s, HistoryEvent::Kind::TopicCompleted, std::string(topic_name(topic)), topic);
    ++s.topic_index;
    s.topic_asked = 0;
  }
  s.finished = true;
}

bool table_topic_conflicted(const Analyses& a, Topic t) {
  if (t == Topic::LLTable) return !a.ll.conflict_free();
  if (t == Topic::SLRTable) return !a.slr.conflict_free();
  return false;
}

}  // namespace

Session create_session(const Analyses& a, std::string id, std::string grammar_id,
                       std::string grammar_source, const SessionSettings& settings) {
  Session s;
  s.id = std::move(id);
  s.grammar_id = std::move(grammar_id);
  s.grammar_source = std::move(grammar_source);
  s.topics = settings.topics.empty() ? all_topics() : settings.topics;
  s.per_topic_limit = settings.per_topic_limit;
  s.options = settings.options;
  s.seed = settings.seed;
  s.hint_string_enabled = std::none_of(s.topics.begin(), s.topics.end(),
                                       [&](Topic t) { return table_topic_conflicted(a, t); });
  advance(s, a);
  return s;
}

const HintQuestion* pending_hint(const Session& s) {
  return s.pending_hints.empty() ? nullptr : &s.pending_hints.front();
}

SubmitResult submit_answer(Session& s, const Analyses& a, const std::string& id,
                           const std::set<std::string>& selected) {
  SubmitResult r;
  r.answered = id;
  if (const HintQuestion* h = pending_hint(s)) {
    if (id != h->id) throw StaleQuestion("hint " + h->id + " is awaiting an answer, not " + id);
    if (selected.size() != 1) throw std::invalid_argument("a hint question takes exactly one option");
    r.hint = true;
    r.correct = evaluate_hint(*h, *selected.begin());
    Topic topic = Topic::FirstSet;
    for (const auto& e : s.history) {
      if (e.kind == HistoryEvent::Kind::HintIssued && e.item == h->id) topic = e.topic;
    }
    record(s, HistoryEvent::Kind::HintAnswered, h->id, topic, selected, r.correct);
    if (r.correct || ++s.hint_attempts >= kHintAttempts) {
      if (!r.correct) {
        for (const auto& o : h->options) {
          if (o.label == h->correct) r.revealed_hint_answer = o;
        }
      }
      s.pending_hints.erase(s.pending_hints.begin());
      s.hint_attempts = 0;
    }
    return r;
  }

  if (s.finished || !s.current) throw StaleQuestion("the session has no open question");
  if (id != s.current->id) throw StaleQuestion("question " + s.current->id + " is awaiting an answer, not " + id);
  const Question q = *s.current;
  if (!q.multi_select && selected.size() > 1) {
    throw std::invalid_argument("this question takes a single option");
  }
  Evaluation ev = evaluate_answer(q, selected);
  Rng rng(s.seed, s.rng_counter++);
  r.action = next_step(a, q, ev, s.wrong_attempts, rng, s.options);
  r.correct = ev.correct_overall;
  r.evaluation = ev;

  HistoryEvent::Outcome outcome;
  if (ev.correct_overall) {
    outcome = s.wrong_attempts == 0 ? HistoryEvent::Outcome::FirstTry : HistoryEvent::Outcome::AfterHint;
  } else {
    outcome = r.action.reveal ? HistoryEvent::Outcome::Revealed : HistoryEvent::Outcome::Repeat;
  }
  record(s, HistoryEvent::Kind::Answered, q.id, q.topic, selected, ev.correct_overall, outcome);
  for (const auto& h : r.action.hints) {
    record(s, HistoryEvent::Kind::HintIssued, h.id, q.topic);
    s.pending_hints.push_back(h);
  }
  s.hint_attempts = 0;

  switch (outcome) {
    case HistoryEvent::Outcome::FirstTry:
      ++s.score.first_try;
      ++s.score.total;
      break;
    case HistoryEvent::Outcome::AfterHint:
      ++s.score.after_hint;
      ++s.score.total;
      break;
    case HistoryEvent::Outcome::Revealed:
      ++s.score.total;
      break;
    default:
      break;
  }
  if (r.action.next == TutorAction::Next::Advance) {
    advance(s, a);
  } else {
    ++s.wrong_attempts;
  }
  return r;
}

Score score_from_history(const Session& s) {
  Score sc;
  for (const auto& e : s.history) {
    if (e.kind != HistoryEvent::Kind::Answered) continue;
    if (e.outcome == HistoryEvent::Outcome::FirstTry) ++sc.first_try;
    if (e.outcome == HistoryEvent::Outcome::AfterHint) ++sc.after_hint;
    if (e.outcome != HistoryEvent::Outcome::Repeat) ++sc.total;
  }
  return sc;
}

}  // namespace parsetutor
