#include "parsetutor/store.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include "parsetutor/json_io.hpp"

namespace parsetutor {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kFormat = 1;

std::string now_iso8601() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string temp_suffix() {
  static std::atomic<uint64_t> counter{0};
  std::ostringstream out;
  out << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '.' << counter++;
  return out.str();
}

}  // namespace

uint64_t fnv1a64(std::string_view data) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

bool valid_record_id(std::string_view id) {
  if (id.empty() || id.size() > 128) return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

SessionStore::SessionStore(fs::path dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_ / "sessions");
  fs::create_directories(dir_ / "grammars");
}

fs::path SessionStore::record_path(const char* kind, const std::string& id) const {
  if (!valid_record_id(id)) throw NotFound("invalid id '" + id + "'");
  return dir_ / kind / (id + ".json");
}

void SessionStore::write_record(const fs::path& path, const json& payload) const {
  const json record = {{"format", kFormat}, {"checksum", hex64(fnv1a64(payload.dump()))}, {"payload", payload}};
  const fs::path tmp = path.string() + temp_suffix();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << record.dump(2) << '\n';
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

json SessionStore::read_record(const fs::path& path, const std::string& id) const {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("no record '" + id + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  json record = json::parse(buf.str(), nullptr, false);
  if (record.is_discarded() || !record.is_object() || !record.contains("payload") ||
      !record.contains("checksum") || !record["checksum"].is_string()) {
    throw CorruptRecord("record '" + id + "' is not a valid store record");
  }
  if (record.value("format", 0) != kFormat) {
    throw CorruptRecord("record '" + id + "' has an unsupported format");
  }
  if (record["checksum"].get<std::string>() != hex64(fnv1a64(record["payload"].dump()))) {
    throw CorruptRecord("record '" + id + "' fails its checksum");
  }
  return record["payload"];
}

StoreRecord SessionStore::save_session(const Session& s) {
  const fs::path path = record_path("sessions", s.id);
  StoreRecord rec{s, s.grammar_source, now_iso8601(), ""};
  rec.updated_at = rec.created_at;
  if (fs::exists(path)) {
    try {
      rec.created_at = read_record(path, s.id).at("createdAt").get<std::string>();
    } catch (const std::exception&) {
      // A damaged record is replaced wholesale.
    }
  }
  write_record(path, {{"session", io::session_to_store(s)},
                      {"grammarSource", rec.grammar_source},
                      {"createdAt", rec.created_at},
                      {"updatedAt", rec.updated_at}});
  return rec;
}

StoreRecord SessionStore::load_session(const std::string& id) const {
  const json payload = read_record(record_path("sessions", id), id);
  try {
    return {io::session_from_store(payload.at("session")), payload.at("grammarSource").get<std::string>(),
            payload.at("createdAt").get<std::string>(), payload.at("updatedAt").get<std::string>()};
  } catch (const std::exception& e) {
    throw CorruptRecord("record '" + id + "' is malformed: " + e.what());
  }
}

bool SessionStore::has_session(const std::string& id) const {
  return valid_record_id(id) && fs::exists(record_path("sessions", id));
}

void SessionStore::save_grammar(const std::string& id, const std::string& source) {
  write_record(record_path("grammars", id), {{"source", source}, {"createdAt", now_iso8601()}});
}

std::string SessionStore::load_grammar(const std::string& id) const {
  const json payload = read_record(record_path("grammars", id), id);
  if (!payload.contains("source") || !payload["source"].is_string()) {
    throw CorruptRecord("grammar record '" + id + "' is malformed");
  }
  return payload["source"].get<std::string>();
}

bool SessionStore::has_grammar(const std::string& id) const {
  return valid_record_id(id) && fs::exists(record_path("grammars", id));
}

}  // namespace parsetutor
