#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wfarey_cli/cli.hpp"

namespace {

std::string data(const std::string& name) { return std::string(WFAREY_DATA_DIR) + "/" + name; }

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = wfarey::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Lines after "# table: name" and its header row, up to the next comment line.
std::vector<std::string> table_rows(const std::string& text, const std::string& name) {
  std::istringstream is(text);
  std::string line;
  std::vector<std::string> rows;
  bool in = false, header = false;
  while (std::getline(is, line)) {
    if (line == "# table: " + name) {
      in = header = true;
      continue;
    }
    if (!in) continue;
    if (header) {
      header = false;
      continue;
    }
    if (line.empty() || line[0] == '#') break;
    rows.push_back(line);
  }
  return rows;
}

}  // namespace

TEST(Cli, GenListsEverySequencePoint) {
  const Invocation r = run({"gen", "--unit", data("one.unit"), "--Q", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(table_rows(r.out, "sequence").size(), 10u);
  EXPECT_NE(r.out.find("# n: 10"), std::string::npos);
  EXPECT_NE(r.out.find("0,0,1,0,1,1"), std::string::npos);
}

TEST(Cli, MetadataHeader) {
  const Invocation r = run({"gen", "--unit", data("example1.unit"), "--Q", "20", "--seed", "9"});
  ASSERT_EQ(r.code, 0);
  for (const char* key : {"# tool: wfarey", "# command: gen", "# unit_hash: ", "# Q: 20", "# seed: 9", "# tol: "})
    EXPECT_NE(r.out.find(key), std::string::npos) << key;
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({"gen", "--unit", "/nonexistent.unit", "--Q", "5"}).code, 2);
  EXPECT_EQ(run({"gen", "--unit", data("one.unit")}).code, 2);
  EXPECT_EQ(run({"gen", "--unit", data("one.unit"), "--Q", "x"}).code, 2);
  EXPECT_EQ(run({"gen", "--unit", data("one.unit"), "--Q", "5", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);

  const auto bad = std::filesystem::temp_directory_path() / "wfarey_bad.unit";
  std::ofstream(bad) << R"({"pieces":[{"from":"0","to":"1","poly":["1","-2"]}]})";
  const Invocation r = run({"dist", "--unit", bad.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("invalid unit"), std::string::npos);
  std::filesystem::remove(bad);
}

TEST(Cli, PentagonRefusesBelowThreshold) {
  const Invocation r = run({"pentagon", "--unit", data("steep.unit"), "--Q", "5"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("measured Q' = 11"), std::string::npos) << r.err;
}

TEST(Cli, PentagonAboveThreshold) {
  const Invocation r = run({"pentagon", "--unit", data("example1.unit"), "--Q", "100", "--bins", "5", "--grid", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("# exact_containment: ok"), std::string::npos);
}

TEST(Cli, DistWithSingleGridPoint) {
  const Invocation r = run({"dist", "--unit", data("example1.unit"), "--grid", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(table_rows(r.out, "law").size(), 1u);
  EXPECT_NE(r.out.find("# kinks: 7"), std::string::npos);
}

TEST(Cli, ReportFormat) {
  const Invocation r = run({"dist", "--unit", data("one.unit"), "--format", "report"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\nkinks: 2\n"), std::string::npos);
  EXPECT_EQ(r.out.find("# table:"), std::string::npos);
}

TEST(Cli, GapsOverlayAddsLawColumns) {
  const Invocation plain = run({"gaps", "--unit", data("one.unit"), "--Q", "50", "--bins", "7"});
  const Invocation over = run({"gaps", "--unit", data("one.unit"), "--Q", "50", "--bins", "7", "--overlay"});
  ASSERT_EQ(plain.code, 0);
  ASSERT_EQ(over.code, 0);
  EXPECT_NE(over.out.find("z_lo,z_hi,density,h_u"), std::string::npos);
  EXPECT_EQ(plain.out.find("h_u"), std::string::npos);
  EXPECT_EQ(table_rows(over.out, "histogram").size(), 7u);
}

TEST(Cli, VerifyPasses) {
  const Invocation r = run({"verify", "--unit", data("one.unit"), "--Q", "200"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("# result: PASS"), std::string::npos);
  EXPECT_EQ(r.out.find(",FAIL,"), std::string::npos);
}

TEST(Cli, QprimeReportsBoundAndMeasurement) {
  const Invocation r = run({"qprime", "--unit", data("steep.unit")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("297"), std::string::npos);
  EXPECT_NE(r.out.find("11"), std::string::npos);
}

TEST(Cli, OutWritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "wfarey_out.csv";
  std::filesystem::remove(path);
  const Invocation r = run({"gen", "--unit", data("one.unit"), "--Q", "3", "--out", path.string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(table_rows(text, "sequence").size(), 4u);
  std::filesystem::remove(path);
}
