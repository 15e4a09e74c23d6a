#pragma once

#include <json.hpp>
#include <string>

#include "parsetutor/analysis.hpp"
#include "parsetutor/input_gen.hpp"
#include "parsetutor/parse_sim.hpp"
#include "parsetutor/quiz.hpp"
#include "parsetutor/session.hpp"

namespace parsetutor::io {

using nlohmann::json;

// Public views. Symbols appear by name ("eps" and "$" for the reserved ones);
// question and hint views never carry the answer.
json grammar_json(const Grammar& g);
json ll_table_json(const Grammar& g, const LlTable& t);
json slr_table_json(const Grammar& g_aug, const SlrTable& t);
json analysis_json(const Analyses& a);
json trace_json(const ParseTrace& trace, const Grammar& g);
json gen_result_json(const Analyses& a, ParserKind kind, Cell cell, const GenResult& r);
json question_json(const Question& q);
json hint_json(const Analyses& a, const HintQuestion& h);
json evaluation_json(const Evaluation& ev);
json score_json(const Score& s);
json session_json(const Analyses& a, const Session& s);
json progress_json(const Analyses& a, const Session& s);
json submit_json(const Analyses& a, const Session& s, const SubmitResult& r);
/// The item awaiting an answer: {"kind": "question" | "hint" | "finished", ...}.
json pending_json(const Analyses& a, const Session& s);

/// Reads a table in the ll_table_json / slr_table_json shape, or a whole
/// analysis_json document. Throws std::invalid_argument on malformed input.
LlTable ll_table_from_json(const Analyses& a, const json& j);
SlrTable slr_table_from_json(const Analyses& a, const json& j);

// Lossless storage form of a session (ids, answers and rng state included).
json session_to_store(const Session& s);
Session session_from_store(const json& j);

}  // namespace parsetutor::io
