#include "parsetutor/service.hpp"

#include <httplib.h>

#include <iostream>

#include "parsetutor/json_io.hpp"
#include "parsetutor/session.hpp"

namespace parsetutor {

using nlohmann::json;

namespace {

std::string diagnostic_kind(Diagnostic::Kind k) {
  switch (k) {
    case Diagnostic::Kind::Unreachable:
      return "unreachable";
    case Diagnostic::Kind::Unproductive:
      return "unproductive";
    case Diagnostic::Kind::DuplicateRhs:
      return "duplicate-rhs";
  }
  return "unknown";
}

json diagnostics_json(const Grammar& g, const std::vector<Diagnostic>& ds) {
  json out = json::array();
  for (const auto& d : ds) {
    out.push_back({{"kind", diagnostic_kind(d.kind)}, {"symbol", g.name(d.symbol)}, {"message", d.message}});
  }
  return out;
}

ApiResponse bad_request(const std::string& message) { return error_response(400, "bad-request", message); }

struct MalformedBody : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace

ApiResponse error_response(int status, const std::string& code, const std::string& message) {
  return {status, {{"error", {{"code", code}, {"message", message}}}}};
}

TutorService::TutorService(ServiceConfig config) : config_(std::move(config)), store_(config_.store_dir) {}

std::string TutorService::grammar_id_for(const Grammar& g) { return "g" + hex64(fnv1a64(to_text(g))); }

std::shared_ptr<const Analyses> TutorService::analyses(const std::string& grammar_id) {
  {
    std::lock_guard lock(mu_);
    auto it = analyses_.find(grammar_id);
    if (it != analyses_.end()) return it->second;
  }
  // Throws NotFound or CorruptRecord.
  const std::string source = store_.load_grammar(grammar_id);
  auto a = std::make_shared<const Analyses>(analyze(parse_grammar(source)));
  std::lock_guard lock(mu_);
  return analyses_.emplace(grammar_id, std::move(a)).first->second;
}

std::shared_ptr<std::mutex> TutorService::session_lock(const std::string& id) {
  std::lock_guard lock(mu_);
  auto& m = session_locks_[id];
  if (!m) m = std::make_shared<std::mutex>();
  return m;
}

ApiResponse TutorService::create_grammar(const json& body) {
  if (!body.is_object() || !body.contains("source") || !body["source"].is_string()) {
    return bad_request("expected {\"source\": string}");
  }
  Grammar g;
  try {
    g = parse_grammar(body["source"].get<std::string>());
  } catch (const GrammarError& e) {
    ApiResponse r = error_response(400, "grammar-error", e.what());
    r.body["error"]["line"] = e.line();
    r.body["error"]["column"] = e.column();
    return r;
  }
  const auto diagnostics = validate(g);
  for (const auto& d : diagnostics) {
    if (d.kind == Diagnostic::Kind::Unproductive) {
      ApiResponse r = error_response(400, "unproductive", d.message);
      r.body["error"]["diagnostics"] = diagnostics_json(g, diagnostics);
      return r;
    }
  }
  const std::string id = grammar_id_for(g);
  const std::string source = to_text(g);
  if (!store_.has_grammar(id)) store_.save_grammar(id, source);
  auto a = analyses(id);
  return {201,
          {{"id", id},
           {"source", source},
           {"grammar", io::grammar_json(a->grammar)},
           {"diagnostics", diagnostics_json(g, diagnostics)},
           {"llConflictFree", a->ll.conflict_free()},
           {"slrConflictFree", a->slr.conflict_free()}}};
}

ApiResponse TutorService::get_grammar(const std::string& id) {
  if (!store_.has_grammar(id)) return error_response(404, "not-found", "no grammar '" + id + "'");
  auto a = analyses(id);
  return {200, {{"id", id}, {"source", to_text(a->grammar)}, {"analysis", io::analysis_json(*a)}}};
}

ApiResponse TutorService::create_session(const json& body) {
  if (!body.is_object() || !body.contains("grammarId") || !body["grammarId"].is_string()) {
    return bad_request("expected {\"grammarId\": string, \"topics\": [string], \"seed\"?: integer}");
  }
  const std::string grammar_id = body["grammarId"];
  if (!store_.has_grammar(grammar_id)) return error_response(404, "not-found", "no grammar '" + grammar_id + "'");

  SessionSettings settings;
  if (body.contains("topics")) {
    if (!body["topics"].is_array()) return bad_request("\"topics\" must be an array of topic names");
    for (const auto& t : body["topics"]) {
      auto topic = t.is_string() ? parse_topic(t.get<std::string>()) : std::nullopt;
      if (!topic) return bad_request("unknown topic " + t.dump());
      settings.topics.push_back(*topic);
    }
  }
  if (body.contains("perTopicLimit")) {
    if (!body["perTopicLimit"].is_number_unsigned()) return bad_request("\"perTopicLimit\" must be >= 0");
    settings.per_topic_limit = body["perTopicLimit"];
  }
  settings.options.option_count = config_.option_count;
  settings.options.hint_probability = config_.hint_probability;
  if (body.contains("seed") && !body["seed"].is_number_unsigned()) {
    return bad_request("\"seed\" must be a non-negative integer");
  }
  auto a = analyses(grammar_id);

  std::string id;
  {
    std::lock_guard lock(mu_);
    do {
      id = "s" + std::to_string(next_session_++);
    } while (store_.has_session(id));
    settings.seed = body.contains("seed") ? body["seed"].get<uint64_t>() : config_.seed + (next_session_ - 1);
    Session s = parsetutor::create_session(*a, id, grammar_id, to_text(a->grammar), settings);
    store_.save_session(s);
    return {201, io::session_json(*a, s)};
  }
}

template <typename F>
ApiResponse TutorService::with_session(const std::string& id, bool write, F&& f) {
  if (!valid_record_id(id)) return error_response(404, "not-found", "no session '" + id + "'");
  auto lock_ptr = session_lock(id);
  std::lock_guard lock(*lock_ptr);
  StoreRecord rec;
  try {
    rec = store_.load_session(id);
  } catch (const NotFound&) {
    return error_response(404, "not-found", "no session '" + id + "'");
  }
  auto a = analyses(rec.session.grammar_id);
  ApiResponse r = f(*a, rec.session);
  if (write && r.status < 400) store_.save_session(rec.session);
  return r;
}

ApiResponse TutorService::get_session(const std::string& id) {
  return with_session(id, false, [](const Analyses& a, Session& s) { return ApiResponse{200, io::session_json(a, s)}; });
}

ApiResponse TutorService::get_question(const std::string& id) {
  return with_session(id, false, [](const Analyses& a, Session& s) { return ApiResponse{200, io::pending_json(a, s)}; });
}

ApiResponse TutorService::get_progress(const std::string& id) {
  return with_session(id, false, [](const Analyses& a, Session& s) { return ApiResponse{200, io::progress_json(a, s)}; });
}

ApiResponse TutorService::submit_answer(const std::string& id, const json& body) {
  if (!body.is_object() || !body.contains("questionId") || !body["questionId"].is_string() ||
      !body.contains("selected") || !body["selected"].is_array()) {
    return bad_request("expected {\"questionId\": string, \"selected\": [string]}");
  }
  std::set<std::string> selected;
  for (const auto& x : body["selected"]) {
    if (!x.is_string()) return bad_request("\"selected\" must hold option labels");
    selected.insert(x.get<std::string>());
  }
  const std::string qid = body["questionId"];
  return with_session(id, true, [&](const Analyses& a, Session& s) {
    try {
      SubmitResult r = parsetutor::submit_answer(s, a, qid, selected);
      return ApiResponse{200, io::submit_json(a, s, r)};
    } catch (const StaleQuestion& e) {
      return error_response(409, "stale-question", e.what());
    } catch (const std::invalid_argument& e) {
      return bad_request(e.what());
    }
  });
}

void mount_routes(httplib::Server& server, TutorService& service) {
  auto reply = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  // Wraps a handler with body parsing and error mapping.
  auto route = [reply](auto handler) {
    return [reply, handler](const httplib::Request& req, httplib::Response& res) {
      try {
        reply(res, handler(req));
      } catch (const MalformedBody& e) {
        reply(res, error_response(400, "bad-request", e.what()));
      } catch (const json::exception& e) {
        reply(res, error_response(400, "bad-request", e.what()));
      } catch (const CorruptRecord& e) {
        reply(res, error_response(500, "corrupt-record", e.what()));
      } catch (const NotFound& e) {
        reply(res, error_response(404, "not-found", e.what()));
      } catch (const std::exception& e) {
        reply(res, error_response(500, "internal", e.what()));
      }
    };
  };
  auto body_of = [](const httplib::Request& req) {
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded()) throw MalformedBody("request body is not valid JSON");
    return body;
  };
  TutorService* svc = &service;

  server.Post("/grammars", route([svc, body_of](const httplib::Request& req) {
                return svc->create_grammar(body_of(req));
              }));
  server.Get(R"(/grammars/([^/]+))", route([svc](const httplib::Request& req) {
               return svc->get_grammar(req.matches[1]);
             }));
  server.Post("/sessions", route([svc, body_of](const httplib::Request& req) {
                return svc->create_session(body_of(req));
              }));
  server.Get(R"(/sessions/([^/]+))", route([svc](const httplib::Request& req) {
               return svc->get_session(req.matches[1]);
             }));
  server.Get(R"(/sessions/([^/]+)/question)", route([svc](const httplib::Request& req) {
               return svc->get_question(req.matches[1]);
             }));
  server.Post(R"(/sessions/([^/]+)/answer)", route([svc, body_of](const httplib::Request& req) {
                return svc->submit_answer(req.matches[1], body_of(req));
              }));
  server.Get(R"(/sessions/([^/]+)/progress)", route([svc](const httplib::Request& req) {
               return svc->get_progress(req.matches[1]);
             }));
  server.set_error_handler([reply](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    reply(res, error_response(res.status, res.status == 404 ? "not-found" : "error",
                              "no route for this request"));
  });
}

bool serve(const ServiceConfig& config) {
  TutorService service(config);
  httplib::Server server;
  mount_routes(server, service);
  if (!server.bind_to_port(config.host, config.port)) {
    std::cerr << "cannot bind " << config.host << ':' << config.port << '\n';
    return false;
  }
  std::cerr << "listening on http://" << config.host << ':' << config.port << '\n';
  return server.listen_after_bind();
}

}  // namespace parsetutor
