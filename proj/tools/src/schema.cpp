#include "rotlab_cli/schema.hpp"

namespace rotlab::cli {

using nlohmann::json;

namespace {

bool has_type(const json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  if (t == "null") return v.is_null();
  return false;
}

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~')
      out += "~0";
    else if (c == '/')
      out += "~1";
    else
      out += c;
  }
  return out;
}

struct Validator {
  const json& root;

  const json& resolve(const json& s) const {
    if (!s.is_object() || !s.contains("$ref")) return s;
    std::string ref = s["$ref"].get<std::string>();
    if (ref.rfind("#", 0) != 0) throw std::runtime_error("unsupported schema reference " + ref);
    return resolve(root.at(json::json_pointer(ref.substr(1))));
  }

  std::optional<SchemaViolation> check(const json& schema_in, const json& v, const std::string& at) const {
    const json& s = resolve(schema_in);
    auto fail = [&](std::string msg) { return SchemaViolation{at.empty() ? "/" : at, std::move(msg)}; };

    if (s.contains("type")) {
      std::string t = s["type"].get<std::string>();
      if (!has_type(v, t)) return fail("expected " + t + ", got " + std::string(v.type_name()));
    }
    if (s.contains("enum")) {
      bool ok = false;
      for (const auto& e : s["enum"]) ok = ok || e == v;
      if (!ok) return fail("value " + v.dump() + " is not one of " + s["enum"].dump());
    }
    if (v.is_number()) {
      double x = v.get<double>();
      if (s.contains("minimum") && x < s["minimum"].get<double>())
        return fail("value " + v.dump() + " is below the minimum " + s["minimum"].dump());
      if (s.contains("maximum") && x > s["maximum"].get<double>())
        return fail("value " + v.dump() + " is above the maximum " + s["maximum"].dump());
      if (s.contains("exclusiveMinimum") && x <= s["exclusiveMinimum"].get<double>())
        return fail("value " + v.dump() + " must exceed " + s["exclusiveMinimum"].dump());
    }
    if (v.is_object()) {
      if (s.contains("required"))
        for (const auto& r : s["required"])
          if (!v.contains(r.get<std::string>())) return fail("missing required property \"" + r.get<std::string>() + "\"");
      const json empty = json::object();
      const json& props = s.contains("properties") ? s["properties"] : empty;
      for (auto it = v.begin(); it != v.end(); ++it) {
        std::string child = at + "/" + escape_token(it.key());
        if (props.contains(it.key())) {
          if (auto bad = check(props[it.key()], it.value(), child)) return bad;
        } else if (s.contains("additionalProperties") && s["additionalProperties"] == false) {
          return SchemaViolation{child, "unknown property \"" + it.key() + "\""};
        }
      }
    }
    if (v.is_array()) {
      if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>())
        return fail("expected at least " + s["minItems"].dump() + " items");
      if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>())
        return fail("expected at most " + s["maxItems"].dump() + " items");
      if (s.contains("items"))
        for (std::size_t i = 0; i < v.size(); ++i)
          if (auto bad = check(s["items"], v[i], at + "/" + std::to_string(i))) return bad;
    }
    return std::nullopt;
  }
};

}  // namespace

std::optional<SchemaViolation> validate(const json& schema, const json& doc) {
  return Validator{schema}.check(schema, doc, "");
}

}  // namespace rotlab::cli
