#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "meshcoop/network_io.hpp"
#include "support/fixtures.hpp"

namespace meshcoop {
namespace {

namespace fs = std::filesystem;

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("meshcoop_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string worked_example() const {
    const std::string p = path("worked.json");
    write_network(testing::worked_example_spec(), p);
    return p;
  }

  fs::path dir_;
};

TEST_F(CliTest, GenWritesCaseStudyScale) {
  const std::string net = path("net.json");
  const Result r = run({"gen", "--sps", "3", "--nodes", "20", "--sessions", "3", "--seed", "42", "-o", net});
  ASSERT_EQ(r.status, 0) << r.err;
  const NetworkSpec spec = read_network(net);
  EXPECT_EQ(spec.nodes.size(), 60u);
  EXPECT_EQ(spec.sessions.size(), 9u);
  EXPECT_EQ(spec, generate_random(3, 20, 3, Params{}, 42));
  EXPECT_EQ(run({"gen", "--seed", "42"}).out, slurp(net));
}

TEST_F(CliTest, GenParamFlags) {
  const Result r = run({"gen", "--sps", "2", "--nodes", "4", "--sessions", "1", "--price", "12", "--rate-min", "5",
                        "--rate-max", "6"});
  ASSERT_EQ(r.status, 0) << r.err;
  const NetworkSpec spec = parse_network(r.out);
  EXPECT_EQ(spec.params.price_per_rate, 12.0);
  for (const auto& s : spec.sessions) EXPECT_LE(s.rate_req_kbps, 6.0);
}

TEST_F(CliTest, AllocateShapleySumsToGrandValue) {
  const std::string net = worked_example();
  const Result r = run({"allocate", "--method", "shapley", "--csv", net});
  ASSERT_EQ(r.status, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);  // header
  double sum = 0.0;
  int rows = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("SP", 0) != 0) continue;
    const auto first = line.find(',');
    sum += std::stod(line.substr(first + 1, line.find(',', first + 1) - first - 1));
    ++rows;
  }
  EXPECT_EQ(rows, 3);
  EXPECT_NEAR(sum, 1385.0, 1e-3);
}

TEST_F(CliTest, AllocateDualMatchesWorkedExample) {
  const Result r = run({"allocate", "--method", "dual", worked_example()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("855.0000"), std::string::npos) << r.out;
}

TEST_F(CliTest, StructuresHasFiveRows) {
  const Result r = run({"structures", "--csv", worked_example()});
  ASSERT_EQ(r.status, 0) << r.err;
  int lines = 0;
  for (char c : r.out) lines += c == '\n';
  EXPECT_EQ(lines, 6);  // header + 5 structures
  const Result text = run({"structures", worked_example()});
  EXPECT_EQ(text.status, 0);
  EXPECT_EQ(run({"structures", worked_example()}).out, text.out);
}

TEST_F(CliTest, ValueOfOneCoalition) {
  const Result r = run({"value", "--coalition", "1,2", worked_example()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("{1,2}"), std::string::npos);
  EXPECT_NE(r.out.find("1175.0000"), std::string::npos) << r.out;
  const Result all = run({"value", "--threads", "2", worked_example()});
  ASSERT_EQ(all.status, 0);
  EXPECT_NE(all.out.find("1385.0000"), std::string::npos);
}

TEST_F(CliTest, CoreCheck) {
  const std::string net = worked_example();
  const Result ok = run({"core", "--x", "855,320,210", net});
  ASSERT_EQ(ok.status, 0) << ok.err;
  const Result wrong = run({"core", "--x", "1,2", net});
  EXPECT_NE(wrong.status, 0);
  EXPECT_NE(wrong.err.find("error:"), std::string::npos);
}

TEST_F(CliTest, BreakdownWorkedExample) {
  const Result r = run({"breakdown", "--csv", worked_example()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("1300.0000"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("445.0000"), std::string::npos);
  EXPECT_NE(r.out.find("855.0000"), std::string::npos);
}

TEST_F(CliTest, PlotWritesDeterministicSvg) {
  const std::string net = path("net.json");
  ASSERT_EQ(run({"gen", "--seed", "3", "-o", net}).status, 0);
  const std::string a = path("a.svg"), b = path("b.svg");
  const Result r = run({"plot", "-o", a, net});
  if (r.status != 0) {
    // A game without surplus has no imputation triangle to draw.
    EXPECT_NE(r.err.find("degenerate"), std::string::npos) << r.err;
    return;
  }
  ASSERT_EQ(run({"plot", "-o", b, net}).status, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_NE(slurp(a).find("<svg"), std::string::npos);
}

TEST_F(CliTest, PlotNeedsThreeProviders) {
  const std::string net = path("two.json");
  write_network(testing::cooperation_spec(), net);
  const Result r = run({"plot", "-o", path("x.svg"), net});
  EXPECT_NE(r.status, 0);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_NE(run({}).status, 0);
  EXPECT_NE(run({"value", path("missing.json")}).status, 0);
  EXPECT_NE(run({"allocate", "--method", "nucleolus", worked_example()}).status, 0);
  EXPECT_NE(run({"gen", "--bogus"}).status, 0);
  EXPECT_NE(run({"value", "--coalition", "4", worked_example()}).status, 0);
}

TEST_F(CliTest, StrictModeFlag) {
  const Result r = run({"value", "--mode", "strict", worked_example()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("1385.0000"), std::string::npos);
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(run({"--help"}).status, 0); }

}  // namespace
}  // namespace meshcoop
