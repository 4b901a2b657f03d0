#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rotlab_cli/cli.hpp"
#include "rotlab_cli/schema.hpp"
#include "schemas_embedded.hpp"

namespace rotlab::cli {

const json& config_schema() {
  static const json s = json::parse(kConfigSchemaText);
  return s;
}

const json& report_schema() {
  static const json s = json::parse(kReportSchemaText);
  return s;
}

namespace {

struct Flags {
  std::string config, out;
  std::optional<std::uint64_t> seed;
  std::optional<int> budget_n, budget_seeds, radius, genus;
  std::optional<std::string> word, w1, w2;
};

void apply_flags(json& c, const Flags& f, const std::string& command) {
  if (f.seed) c["seed"] = *f.seed;
  if (f.genus) c["genus"] = *f.genus;
  if (f.budget_n) c["budgets"]["n"] = *f.budget_n;
  if (f.budget_seeds) c["budgets"]["seeds"] = *f.budget_seeds;
  if (f.radius) {
    bool covering = command == "covering classify" || command == "geodesic selfx";
    c["budgets"][covering ? "covering_radius" : "word_radius"] = *f.radius;
  }
  if (f.word) c["words"]["word"] = *f.word;
  if (f.w1) c["words"]["w1"] = *f.w1;
  if (f.w2) c["words"]["w2"] = *f.w2;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rotation sets of surface homeomorphisms: geometry, estimation and horseshoe checks", "rotlab"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", f.seed, "RNG seed");
  app.add_option("--out", f.out, "output directory for the report and figures");
  app.add_option("--budget-n", f.budget_n, "iterations per sample");
  app.add_option("--budget-seeds", f.budget_seeds, "number of seeds");
  app.add_option("--radius", f.radius, "word radius (covering radius for covering/selfx)");
  app.add_option("--genus", f.genus, "surface genus");
  app.add_option("--word", f.word, "word for geodesic axis/selfx");
  app.add_option("--w1", f.w1, "first word of a pair");
  app.add_option("--w2", f.w2, "second word of a pair");

  const std::vector<std::pair<std::string, std::vector<std::string>>> tree = {
      {"group", {"build"}},
      {"geodesic", {"axis", "cross", "selfx"}},
      {"covering", {"classify"}},
      {"rotset", {"estimate", "homology", "star-audit", "power-audit"}},
      {"periodic", {"search"}},
      {"horseshoe", {"check", "audit"}},
      {"plot", {"disk"}},
  };
  std::string command;
  for (const auto& [group, leaves] : tree) {
    CLI::App* sub = app.add_subcommand(group);
    sub->require_subcommand(1);
    sub->fallthrough();
    for (const auto& leaf : leaves) {
      CLI::App* cmd = sub->add_subcommand(leaf);
      cmd->fallthrough();
      std::string name = group + " " + leaf;
      cmd->callback([&command, name] { command = name; });
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  auto started = std::chrono::steady_clock::now();
  try {
    json config = json::object();
    if (!f.config.empty()) {
      std::ifstream in(f.config);
      try {
        config = json::parse(in);
      } catch (const json::parse_error& e) {
        err << "error: " << f.config << " is not valid JSON: " << e.what() << "\n";
        return 1;
      }
      if (auto bad = validate(config_schema(), config)) {
        err << "error: config violates schema at " << bad->pointer << ": " << bad->message << "\n";
        return 1;
      }
    }
    apply_flags(config, f, command);
    if (auto bad = validate(config_schema(), config)) {
      err << "error: options violate schema at " << bad->pointer << ": " << bad->message << "\n";
      return 1;
    }
    config["schema"] = kConfigSchemaId;

    Outcome o = execute(command, config);
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    json figures = json::array();
    for (const auto& fig : o.figures) figures.push_back(fig.first);
    json report = {{"schema", kReportSchemaId},
                   {"command", command},
                   {"config", config},
                   {"result", o.result},
                   {"figures", figures},
                   {"findings", o.findings},
                   {"versions", {{"rotlab", kVersion}, {"config_schema", kConfigSchemaId}, {"report_schema", kReportSchemaId}}},
                   {"wall_clock_seconds", elapsed}};

    if (f.out.empty()) {
      out << report.dump(2) << "\n";
      for (const auto& fig : o.figures) out << fig.second;
    } else {
      std::filesystem::create_directories(f.out);
      std::ofstream(std::filesystem::path(f.out) / "report.json") << report.dump(2) << "\n";
      for (const auto& fig : o.figures) std::ofstream(std::filesystem::path(f.out) / fig.first) << fig.second;
      out << command << ": " << (o.findings.empty() ? "ok" : std::to_string(o.findings.size()) + " finding(s)")
          << ", report in " << (std::filesystem::path(f.out) / "report.json").string() << "\n";
    }
    for (const auto& msg : o.findings) err << "finding: " << msg << "\n";
    return o.exit_code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace rotlab::cli
