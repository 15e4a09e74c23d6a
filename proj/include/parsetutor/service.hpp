#pragma once

#include <cstdint>
#include <json.hpp>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "parsetutor/analysis.hpp"
#include "parsetutor/store.hpp"

namespace httplib {
class Server;
}

namespace parsetutor {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string store_dir = "parsetutor-store";
  double hint_probability = 0.15;
  uint64_t seed = 0;  // sessions without a seed get seed + their number
  size_t option_count = 4;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

/// Transport-independent API. Every method is safe to call concurrently:
/// analyses are immutable and shared, and requests on one session run one at
/// a time against the stored record, so a restarted service resumes exactly.
class TutorService {
 public:
  explicit TutorService(ServiceConfig config);

  const ServiceConfig& config() const { return config_; }
  SessionStore& store() { return store_; }

  ApiResponse create_grammar(const nlohmann::json& body);
  ApiResponse get_grammar(const std::string& id);
  ApiResponse create_session(const nlohmann::json& body);
  ApiResponse get_session(const std::string& id);
  ApiResponse get_question(const std::string& id);
  ApiResponse submit_answer(const std::string& id, const nlohmann::json& body);
  ApiResponse get_progress(const std::string& id);

  /// Grammar ids are "g" followed by a hash of the canonical grammar text.
  static std::string grammar_id_for(const Grammar& g);
  std::shared_ptr<const Analyses> analyses(const std::string& grammar_id);

 private:
  std::shared_ptr<std::mutex> session_lock(const std::string& id);
  template <typename F>
  ApiResponse with_session(const std::string& id, bool write, F&& f);

  ServiceConfig config_;
  SessionStore store_;
  std::mutex mu_;  // guards the maps and session numbering
  std::map<std::string, std::shared_ptr<const Analyses>> analyses_;
  std::map<std::string, std::shared_ptr<std::mutex>> session_locks_;
  uint64_t next_session_ = 1;
};

/// {"error": {"code", "message", ...}}.
ApiResponse error_response(int status, const std::string& code, const std::string& message);

/// Registers the HTTP routes on a server.
void mount_routes(httplib::Server& server, TutorService& service);

/// Binds and blocks until the server stops. Returns false on bind failure.
bool serve(const ServiceConfig& config);

}  // namespace parsetutor
