// Minimal JSON Schema checker covering the keywords the API schema uses:
// type, const, enum, required, properties, additionalProperties, items,
// minimum, anyOf, oneOf and local $ref.
#pragma once

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace schema {

using nlohmann::json;

inline json load(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return json::parse(buf.str());
}

class Validator {
 public:
  explicit Validator(json root) : root_(std::move(root)) {}

  /// Errors of `value` against the definition named `def`; empty when valid.
  std::vector<std::string> check(const json& value, const std::string& def) const {
    std::vector<std::string> errors;
    validate(value, root_.at("$defs").at(def), "$", errors);
    return errors;
  }

  bool valid(const json& value, const std::string& def) const { return check(value, def).empty(); }

  const json& root() const { return root_; }

 private:
  const json& resolve(const std::string& ref) const {
    const std::string prefix = "#/$defs/";
    return root_.at("$defs").at(ref.substr(prefix.size()));
  }

  static bool has_type(const json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    return false;
  }

  void validate(const json& v, const json& s, const std::string& path, std::vector<std::string>& errors) const {
    if (s.contains("$ref")) {
      validate(v, resolve(s["$ref"]), path, errors);
      return;
    }
    if (s.contains("type")) {
      bool ok = false;
      if (s["type"].is_array()) {
        for (const auto& t : s["type"]) ok = ok || has_type(v, t);
      } else {
        ok = has_type(v, s["type"]);
      }
      if (!ok) {
        errors.push_back(path + ": expected type " + s["type"].dump() + ", got " + v.dump().substr(0, 80));
        return;
      }
    }
    if (s.contains("const") && v != s["const"]) errors.push_back(path + ": expected " + s["const"].dump());
    if (s.contains("enum")) {
      bool found = false;
      for (const auto& e : s["enum"]) found = found || e == v;
      if (!found) errors.push_back(path + ": " + v.dump() + " not in enum");
    }
    if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>()) {
      errors.push_back(path + ": below minimum");
    }
    if (s.contains("anyOf") || s.contains("oneOf")) {
      const bool one = s.contains("oneOf");
      int matches = 0;
      for (const auto& sub : one ? s["oneOf"] : s["anyOf"]) {
        std::vector<std::string> sub_errors;
        validate(v, sub, path, sub_errors);
        if (sub_errors.empty()) ++matches;
      }
      if (one ? matches != 1 : matches == 0) {
        errors.push_back(path + ": " + std::to_string(matches) + " alternatives match");
      }
    }
    if (v.is_object()) {
      if (s.contains("required")) {
        for (const auto& k : s["required"]) {
          if (!v.contains(k.get<std::string>())) errors.push_back(path + ": missing " + k.get<std::string>());
        }
      }
      const json props = s.value("properties", json::object());
      for (const auto& [k, sub] : v.items()) {
        const std::string p = path + "." + k;
        if (props.contains(k)) {
          validate(sub, props[k], p, errors);
        } else if (s.contains("additionalProperties")) {
          const json& extra = s["additionalProperties"];
          if (extra.is_boolean()) {
            if (!extra.get<bool>()) errors.push_back(path + ": unexpected property " + k);
          } else {
            validate(sub, extra, p, errors);
          }
        }
      }
    }
    if (v.is_array() && s.contains("items")) {
      for (size_t i = 0; i < v.size(); ++i) validate(v[i], s["items"], path + "[" + std::to_string(i) + "]", errors);
    }
  }

  json root_;
};

}  // namespace schema
