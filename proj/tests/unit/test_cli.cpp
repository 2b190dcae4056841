#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "flipcli/cli.hpp"
#include "flipcli/config.hpp"

using namespace flipcli;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

bool mentions(const std::vector<std::string>& errors, const std::string& needle) {
  for (const auto& e : errors)
    if (e.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(Config, JsonRoundTrip) {
  ExperimentConfig cfg;
  cfg.mode = "transference";
  cfg.rule = "extremist:3";
  cfg.init = "block2:0.4,0.3,0.7,0.5";
  cfg.seed = 123456789012345ULL;
  cfg.n = 500;
  cfg.t_end = 0.75;
  cfg.rtol = 1e-9;
  cfg.replicates = 3;
  std::vector<std::string> errors;
  const auto back = config_from_json(config_to_json(cfg), errors);
  EXPECT_TRUE(errors.empty());
  EXPECT_EQ(back, cfg);
}

TEST(Config, UnknownKeyIsReported) {
  std::vector<std::string> errors;
  config_from_json(R"({"mode":"trajectory","rule":"er","tend":1})", errors);
  EXPECT_TRUE(mentions(errors, "tend"));
}

TEST(Config, MergePrefersFlags) {
  ExperimentConfig base, flags;
  base.mode = flags.mode = "trajectory";
  base.rule = "er";
  base.t_end = 2;
  flags.t_end = 3;
  const auto m = merge(base, flags);
  EXPECT_EQ(m.rule, "er");
  EXPECT_EQ(m.t_end, 3.0);
}

TEST(Config, ValidationListsEveryProblem) {
  ExperimentConfig cfg;
  cfg.mode = "simulate";
  cfg.rule = "er";
  cfg.init = "const:0.5";
  cfg.n = -4;
  const auto errors = validate(cfg);
  EXPECT_TRUE(mentions(errors, "seed"));
  EXPECT_TRUE(mentions(errors, "n"));
  EXPECT_GE(errors.size(), 2u);
}

TEST(Config, ParseInit) {
  const auto W = parse_init("block2:0.25,0.1,0.9,0.4");
  ASSERT_EQ(W.part_count(), 2);
  EXPECT_DOUBLE_EQ(W.mass(0), 0.25);
  EXPECT_DOUBLE_EQ(W.value(0, 1), 0.4);
  EXPECT_DOUBLE_EQ(W.value(1, 1), 0.9);
  EXPECT_THROW(parse_init("const:1.5"), std::exception);
  EXPECT_THROW(parse_init("ring:3"), std::exception);
}

TEST(Cli, MissingSeedIsValidationError) {
  const auto r = call({"simulate", "--rule", "er", "--init", "const:0.5", "--n", "50", "--steps",
                       "100"});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("seed"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, BadRuleFileNamesTheRow) {
  const auto path = temp_file("flip_bad_rule.json", R"({"k":3,"rows":[[5,[[1,0.5],[7,0.4]]]]})");
  const auto r = call({"trajectory", "--rule-file", path.string(), "--init", "const:0.3",
                       "--t-end", "1"});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("5"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, UnknownRuleIsValidationError) {
  const auto r = call({"fixed-points", "--rule", "no-such-rule"});
  EXPECT_EQ(r.code, kExitValidation);
}

TEST(Cli, TrajectoryCsv) {
  const auto r = call({"trajectory", "--rule", "er", "--init", "const:0", "--t-end", "1",
                       "--checkpoints", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream in(r.out);
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("t,", 0), 0u);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(Cli, WriteConfigThenReplay) {
  const auto cfg_path = std::filesystem::temp_directory_path() / "flip_replay.json";
  const auto first = call({"fixed-points", "--rule", "extremist:3", "--grid", "201",
                           "--write-config", cfg_path.string()});
  ASSERT_EQ(first.code, kExitOk) << first.err;
  const auto second = call({"fixed-points", "--config", cfg_path.string()});
  ASSERT_EQ(second.code, kExitOk) << second.err;
  EXPECT_EQ(first.out, second.out);
  std::filesystem::remove(cfg_path);
}
