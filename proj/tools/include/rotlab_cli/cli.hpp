#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "rotlab/horseshoe.hpp"
#include "rotlab/rotation.hpp"

namespace rotlab::cli {

using nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kConfigSchemaId = "rotlab.config.v1";
inline constexpr const char* kReportSchemaId = "rotlab.report.v1";

const json& config_schema();
const json& report_schema();

// A built system together with what the estimators need to know about it.
struct SystemSetup {
  SystemPtr system;
  std::shared_ptr<const SurfaceGroup> group;
  std::string name;
  std::optional<Word> core;               // class the system rotates along, if any
  double tube_width = 0.3;
  std::optional<ExampleGeometry> example;  // heteroclinic geometry for drift and f3
  std::vector<Direction> extra;            // non-closed directions to bind against
};

SystemSetup make_system(const json& config);
std::vector<LocatedPoint> default_seeds(const SystemSetup& s, std::size_t count, std::uint64_t seed);

struct Outcome {
  int exit_code = 0;   // 0 success, 2 audit findings
  json result = json::object();
  std::vector<std::string> findings;
  std::vector<std::pair<std::string, std::string>> figures;  // file name, contents
};

// `command` is "group build", "rotset estimate", ... ; config is already validated.
Outcome execute(const std::string& command, const json& config);

std::string render_disk_svg(const json& config);

// Whole front end; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rotlab::cli
