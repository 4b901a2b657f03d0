#pragma once

#include <optional>
#include <string>

#include <json.hpp>

namespace rotlab::cli {

struct SchemaViolation {
  std::string pointer;  // JSON pointer to the offending value
  std::string message;
};

// Draft-07 subset: type, enum, properties, required, additionalProperties, items,
// minItems, maxItems, minimum, maximum, exclusiveMinimum and local "#/definitions/..." refs.
std::optional<SchemaViolation> validate(const nlohmann::json& schema, const nlohmann::json& doc);

}  // namespace rotlab::cli
