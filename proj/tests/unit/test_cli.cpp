#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "acarm/cli.hpp"

namespace cli = acarm::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST(Cli, CheckTrueHasCertificate) {
  const auto r = run({"check", "561", "1"});
  EXPECT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc["verdict"].get<bool>());
  EXPECT_EQ(doc["certificate"]["factors"].size(), 3u);
  EXPECT_EQ(doc["config"]["command"], "check");
}

TEST(Cli, CheckFalseExitsOne) {
  const auto r = run({"check", "561", "2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(nlohmann::json::parse(r.out)["detail"], "9 ∤ 559");
}

TEST(Cli, EnumerateNegativeShift) {
  const auto r = run({"enumerate", "-1", "1000"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "399 935\n");
  EXPECT_NE(r.err.find("\"limit\":1000"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"check", "56x", "1"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"--format", "xml", "check", "561", "1"}).code, 2);
  EXPECT_EQ(run({"construct", "/nonexistent/params"}).code, 2);
}

TEST(Cli, HbScanCsv) {
  const auto r = run({"hb-scan", "3", "4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "m,worst_c,worst_p,ratio2,ratioA\n"
            "3,1,7,1.933249,1.933249\n"
            "4,1,5,0.650428,0.650428\n");
}

TEST(Cli, HbScanBudgetExitsThree) {
  EXPECT_EQ(run({"--cap", "10", "hb-scan", "3", "10"}).code, 3);
}

TEST(Cli, GroupBound) {
  const auto r = run({"group-bound", "8"});
  EXPECT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["lambda"], 2);
  EXPECT_EQ(doc["n_exact"], 3);
}

TEST(Cli, BoundsWithBinom) {
  const auto r = run({"bounds", "--y", "100", "--theta", "1.5", "--A", "2", "--gamma", "1",
                      "--omega", "300", "--kappa", "1", "--binom", "10", "3"});
  EXPECT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_FALSE(doc["report"]["applicable"].get<bool>());
  EXPECT_EQ(doc["binom"]["exact"], 120);
}

TEST(Cli, ConstructRelaxedAndStrict) {
  const auto good = temp_file("acarm_cli_relaxed.params",
                              "mode = relaxed\na = 1\nblocks = 3,4,5,7,11,13,17,19,23\n"
                              "k_cap = 1000\nkprime_cap = 100000\nseed = 1\n");
  const auto trace = (std::filesystem::temp_directory_path() / "acarm_cli.trace").string();
  auto r = run({"construct", good, "--trace", trace});
  EXPECT_EQ(r.code, 0);
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc.contains("n"));
  EXPECT_FALSE(doc.contains("timings"));
  EXPECT_TRUE(std::filesystem::file_size(trace) > 0);
  EXPECT_EQ(run({"construct", good}).out, r.out);

  const auto strict = temp_file("acarm_cli_strict.params", "mode = strict\na = 1\ny = 10\n");
  r = run({"construct", strict});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(nlohmann::json::parse(r.out)["error"]["kind"], "budget");
}
