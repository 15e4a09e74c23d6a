#pragma once

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>

#include "parsetutor/session.hpp"

namespace parsetutor {

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CorruptRecord : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StoreRecord {
  Session session;
  std::string grammar_source;
  std::string created_at;  // ISO 8601 UTC
  std::string updated_at;
};

/// FNV-1a 64-bit, used for record checksums and grammar ids.
uint64_t fnv1a64(std::string_view data);
std::string hex64(uint64_t v);

/// A directory of JSON records: sessions/<id>.json and grammars/<id>.json.
/// Each record is {"format", "checksum", "payload"}; the checksum covers the
/// payload's compact dump. Writes go through a temporary file and a rename,
/// so readers never see a partial record.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }

  /// Keeps the original creation time when the session already exists.
  StoreRecord save_session(const Session& s);
  /// Throws NotFound or CorruptRecord.
  StoreRecord load_session(const std::string& id) const;
  bool has_session(const std::string& id) const;

  void save_grammar(const std::string& id, const std::string& source);
  std::string load_grammar(const std::string& id) const;
  bool has_grammar(const std::string& id) const;

 private:
  std::filesystem::path record_path(const char* kind, const std::string& id) const;
  void write_record(const std::filesystem::path& path, const nlohmann::json& payload) const;
  nlohmann::json read_record(const std::filesystem::path& path, const std::string& id) const;

  std::filesystem::path dir_;
};

/// Ids are non-empty runs of [A-Za-z0-9_-], so they are safe as file names.
bool valid_record_id(std::string_view id);

}  // namespace parsetutor
