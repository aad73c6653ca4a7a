#include "cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace lulab::cli {
namespace {

struct Run {
  int status;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = run_command(args, out, err);
  return {status, out.str(), err.str()};
}

TEST(Cli, ExactJson) {
  const auto r = run({"exact", "--dist", "7/10,3/10", "--format", "json"});
  ASSERT_EQ(r.status, kOk) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["expected_cost"], "71/50");
  EXPECT_EQ(j["excess"], "3/25");
  EXPECT_EQ(j["opt"], "13/10");
  EXPECT_EQ(j["Q"]["[1,2]"], "7/10");
  EXPECT_EQ(j["s"][0]["s"], "3/25");
}

TEST(Cli, ExactKeepsUserLabels) {
  const auto r = run({"exact", "--dist", "3/10,7/10", "--format", "json"});
  ASSERT_EQ(r.status, kOk) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["items"][0]["item"], 2);
  // User item 2 in front: position vector (2, 1).
  EXPECT_EQ(j["Q"]["[2,1]"], "7/10");
}

TEST(Cli, ExactStrengths) {
  const auto r = run({"exact", "--dist", "1.4,0.6", "--strengths", "--format", "json"});
  ASSERT_EQ(r.status, kOk) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["gladiator_excess"][1]["excess"], "6/25");
}

TEST(Cli, SimulateIsDeterministic) {
  const std::vector<std::string> args{"simulate", "--dist", "uniform", "--n", "3", "--rule",
                                      "transposition", "--steps", "1000", "--seed", "7"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.status, kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(Json::parse(a.out)["rng"], "mt19937_64");
}

TEST(Cli, InvalidInputs) {
  auto r = run({"coeffs", "--n", "2", "--j", "5"});
  EXPECT_EQ(r.status, kInvalid);
  EXPECT_NE(r.err.find("j out of range"), std::string::npos);
  r = run({"exact", "--dist", "0.5,-0.1"});
  EXPECT_EQ(r.status, kInvalid);
  r = run({"exact", "--bogus"});
  EXPECT_EQ(r.status, kInvalid);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  r = run({});
  EXPECT_EQ(r.status, kInvalid);
  r = run({"exact", "--dist", "uniform", "--n", "9"});
  EXPECT_EQ(r.status, kInvalid);
  EXPECT_NE(r.err.find("limit"), std::string::npos);
}

TEST(Cli, ExactLimitFlagAndEnvironment) {
  EXPECT_EQ(run({"exact", "--dist", "uniform", "--n", "4", "--exact-limit", "3"}).status, kInvalid);
  ::setenv("LULAB_EXACT_LIMIT", "3", 1);
  EXPECT_EQ(run({"exact", "--dist", "uniform", "--n", "4"}).status, kInvalid);
  ::unsetenv("LULAB_EXACT_LIMIT");
  EXPECT_EQ(run({"exact", "--dist", "uniform", "--n", "4", "--no-q"}).status, kOk);
}

TEST(Cli, ZeroWeightsAreDropped) {
  const auto r = run({"exact", "--dist", "0.5,0,0.5", "--format", "json", "--no-q"});
  ASSERT_EQ(r.status, kOk) << r.err;
  EXPECT_EQ(Json::parse(r.out)["n"], 2);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, Coefficients) {
  auto r = run({"coeffs", "--n", "2", "--j", "2", "--format", "json"});
  ASSERT_EQ(r.status, kOk) << r.err;
  auto j = Json::parse(r.out);
  const auto& scan = j.is_array() ? j[0] : j;
  EXPECT_EQ(scan["min_coefficient"], "0");
  EXPECT_EQ(scan["nonzero"][0]["value"], "2");
  r = run({"coeffs", "--n", "2", "--j", "2", "--d", "0,2", "--format", "json"});
  ASSERT_EQ(r.status, kOk) << r.err;
  EXPECT_NE(r.out.find('2'), std::string::npos);
}

TEST(Cli, InjectionVerifyAndTrace) {
  auto r = run({"inject-verify", "--n", "3", "--format", "json"});
  ASSERT_EQ(r.status, kOk) << r.err;
  r = run({"inject-trace", "--d", "0,2,2,2,5", "--j", "4", "--words", "2,,353,4545,55", "--i", "1"});
  ASSERT_EQ(r.status, kOk) << r.err;
  EXPECT_NE(r.out.find("2432"), std::string::npos);
  EXPECT_NE(r.out.find("new deficit: 5"), std::string::npos);
  r = run({"inject-trace", "--d", "0,2,2,2,5", "--j", "4", "--words", "2,,353,4545,55", "--i", "1", "--format",
           "json"});
  ASSERT_EQ(r.status, kOk) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["output"][0], "2432");
  EXPECT_EQ(j["new_deficit"], 5);
  r = run({"inject-trace", "--d", "1,1", "--j", "2", "--words", "2,", "--i", "1"});
  EXPECT_EQ(r.status, kInvalid);
}

TEST(Cli, ReportAgreesWithExact) {
  const auto r = run({"report", "--dist", "7/10,3/10", "--format", "json"});
  ASSERT_EQ(r.status, kOk) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["transposition_cost"], "71/50");
  EXPECT_EQ(j["mtf_cost"], "71/50");
  EXPECT_EQ(j["opt"], "13/10");
}

TEST(Cli, OutFile) {
  const auto path = std::filesystem::temp_directory_path() / "lulab_cli_test.json";
  const auto r = run({"exact", "--dist", "1/2,1/2", "--format", "json", "--out", path.string()});
  ASSERT_EQ(r.status, kOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  EXPECT_EQ(Json::parse(in)["expected_cost"], "3/2");
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace lulab::cli
