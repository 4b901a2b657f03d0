#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "rotlab_cli/cli.hpp"
#include "rotlab_cli/schema.hpp"

using namespace rotlab;
using rotlab::cli::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rotlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_config(const std::string& name, const json& j) {
  std::string path = testing::TempDir() + name;
  std::ofstream(path) << j.dump();
  return path;
}

const json* direction(const json& estimate, const std::string& label) {
  for (const auto& d : estimate["directions"])
    if (d["label"] == label) return &d;
  return nullptr;
}

}  // namespace

TEST(Cli, GroupBuildReport) {
  auto r = run_cli({"group", "build", "--genus", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  json rep = json::parse(r.out);
  EXPECT_EQ(rep["schema"], "rotlab.report.v1");
  EXPECT_EQ(rep["result"]["genus"], 2);
  EXPECT_EQ(rep["result"]["generators"].size(), 8u);
  EXPECT_LT(rep["result"]["angle_sum_error"].get<double>(), 1e-8);
  EXPECT_FALSE(cli::validate(cli::report_schema(), rep).has_value());
}

TEST(Cli, IdentityEstimateIsZero) {
  json c = {{"system", {{"name", "identity"}}}, {"budgets", {{"n", 100}, {"seeds", 8}}}};
  auto o = cli::execute("rotset estimate", c);
  EXPECT_EQ(o.exit_code, 0);
  EXPECT_EQ(o.result["estimate"]["max_speed"].get<double>(), 0.0);
}

TEST(Cli, ThreePieceSystemRegistersCore) {
  json c = {{"system", {{"name", "f3"}}}, {"budgets", {{"n", 400}, {"seeds", 24}}}, {"seed", 3}};
  auto o = cli::execute("rotset estimate", c);
  const json* core = direction(o.result["estimate"], "A2");
  ASSERT_NE(core, nullptr);
  EXPECT_NEAR((*core)["v_max"].get<double>(), 0.8, 0.04);
  EXPECT_EQ(direction(o.result["estimate"], "a1"), nullptr);
}

TEST(Cli, SchemaViolationNamesThePointer) {
  auto path = write_config("bad.json", {{"system", {{"name", "spiral"}}}});
  auto r = run_cli({"rotset", "estimate", "--config", path});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("/system/name"), std::string::npos) << r.err;
}

TEST(Cli, UnknownFlagFails) {
  auto r = run_cli({"group", "build", "--frobnicate"});
  EXPECT_NE(r.code, 0);
}

TEST(Cli, ReportRoundTripsThroughJson) {
  json c = {{"words", {{"w1", "a1"}, {"w2", "b1"}}}};
  auto path = write_config("pair.json", c);
  auto r = run_cli({"covering", "classify", "--config", path});
  ASSERT_EQ(r.code, 0) << r.err;
  json rep = json::parse(r.out);
  EXPECT_EQ(json::parse(rep.dump()), rep);
  EXPECT_EQ(rep["config"]["words"], c["words"]);
  EXPECT_FALSE(cli::validate(cli::report_schema(), rep).has_value());
}

TEST(Cli, DeterministicApartFromWallClock) {
  json c = {{"system", {{"name", "twist"}, {"core", "A2"}, {"theta", 0.8}}},
            {"budgets", {{"n", 200}, {"seeds", 12}}},
            {"seed", 9}};
  auto path = write_config("twist.json", c);
  auto first = run_cli({"rotset", "estimate", "--config", path});
  auto second = run_cli({"rotset", "estimate", "--config", path});
  ASSERT_EQ(first.code, 0) << first.err;
  json a = json::parse(first.out), b = json::parse(second.out);
  a.erase("wall_clock_seconds");
  b.erase("wall_clock_seconds");
  EXPECT_EQ(a, b);
}

TEST(Cli, SeedFlagOverridesConfig) {
  json c = {{"system", {{"name", "twist"}, {"core", "A2"}, {"theta", 0.8}}}, {"budgets", {{"n", 50}, {"seeds", 4}}}};
  auto path = write_config("seeded.json", c);
  auto r = run_cli({"rotset", "estimate", "--config", path, "--seed", "17"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["config"]["seed"], 17);
}

TEST(Cli, HorseshoeAuditPasses) {
  auto o = cli::execute("horseshoe audit", json::object());
  EXPECT_EQ(o.exit_code, 0);
  EXPECT_TRUE(o.findings.empty());
}
