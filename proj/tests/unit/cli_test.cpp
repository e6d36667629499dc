#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "gwhk/tree.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "gwhk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = gwhk::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("gwhk_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ::unsetenv("GWHK_SEED");
  }
  void TearDown() override {
    fs::remove_all(dir_);
    ::unsetenv("GWHK_SEED");
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, AnnealIsDeterministic) {
  const std::vector<std::string> base{"anneal", "--dist", "0:0.2,2:0.8", "--tmax", "64", "--trees", "1000", "--seed", "7"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", path("a.csv")});
  b.insert(b.end(), {"--out", path("b.csv"), "--workers", "3"});
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  const auto text = slurp(path("a.csv"));
  EXPECT_EQ(text, slurp(path("b.csv")));
  ASSERT_EQ(text.rfind("# {", 0), 0u);
  const auto header = nlohmann::json::parse(text.substr(2, text.find('\n') - 2));
  EXPECT_EQ(header["master_seed"], 7);
  EXPECT_EQ(header["dist"], "0:1/5,2:4/5");
}

TEST_F(CliTest, IslandsOnFiveVertexExample) {
  {
    std::ofstream(path("t.gwtree")) << gwhk::serialize_tree(gwhk::test::FiveVertexTree::build());
  }
  const auto r = run({"islands", "--tree", path("t.gwtree"), "--q", "1/2", "--out-dir", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(path("islands.json")));
  EXPECT_EQ(j["islands"], nlohmann::json::parse("[[1,3,4]]"));
  EXPECT_EQ(j["meta"]["q"], "1/2");
}

TEST_F(CliTest, VerifySmallCorpus) {
  const auto r = run({"verify", "--corpus", "small"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, SampleTreeAndPipeline) {
  ASSERT_EQ(run({"sample-tree", "--seed", "4", "--depth-cap", "5", "--out-dir", dir_.string()}).code, 0);
  const auto tree = gwhk::parse_tree(slurp(path("tree.gwtree")));
  EXPECT_EQ(tree.max_depth(), 5u);
  ASSERT_EQ(run({"ocean-chain", "--tree", path("tree.gwtree"), "--q", "1/5", "--out-dir", dir_.string()}).code, 0);
  EXPECT_TRUE(nlohmann::json::parse(slurp(path("ocean.json"))).contains("edges"));
  ASSERT_EQ(run({"heat-kernel", "--tree", path("tree.gwtree"), "--steps", "4", "--out-dir", dir_.string()}).code, 0);
  EXPECT_NE(slurp(path("heat_kernel.csv")).find("\n0,1,0,1\n"), std::string::npos);
}

TEST_F(CliTest, FitAndEvents) {
  ASSERT_EQ(run({"anneal", "--dist", "2:1", "--tmax", "40", "--trees", "1", "--out", path("r.csv")}).code, 0);
  const auto r = run({"fit", "--in", path("r.csv"), "--t-lo", "5", "--t-hi", "40", "--out", path("fit.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(path("fit.csv")).find("\nt_lo,t_hi,beta_hat,c_hat,r_squared\n5,40,"), std::string::npos);
  ASSERT_EQ(run({"events", "--event", "M", "--tmax", "4", "--trees", "20", "--out-dir", dir_.string()}).code, 0);
  EXPECT_TRUE(fs::exists(path("events_M.csv")));
}

TEST_F(CliTest, SeedPrecedence) {
  {
    std::ofstream(path("c.json")) << R"({"master_seed": 1, "t_max": 3, "n_trees": 5})";
  }
  auto header_seed = [&](const std::string& file) {
    const auto text = slurp(path(file));
    return nlohmann::json::parse(text.substr(2, text.find('\n') - 2))["master_seed"].get<std::uint64_t>();
  };
  ASSERT_EQ(run({"anneal", "--config", path("c.json"), "--out", path("a.csv")}).code, 0);
  EXPECT_EQ(header_seed("a.csv"), 1u);
  ::setenv("GWHK_SEED", "22", 1);
  ASSERT_EQ(run({"anneal", "--config", path("c.json"), "--out", path("b.csv")}).code, 0);
  EXPECT_EQ(header_seed("b.csv"), 22u);
  ASSERT_EQ(run({"anneal", "--config", path("c.json"), "--seed", "333", "--out", path("c.csv")}).code, 0);
  EXPECT_EQ(header_seed("c.csv"), 333u);
  ::setenv("GWHK_SEED", "x", 1);
  EXPECT_EQ(run({"anneal", "--config", path("c.json"), "--out", path("d.csv")}).code, 1);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({"anneal", "--h", "2"}).code, 1);
  EXPECT_EQ(run({"anneal", "--config", path("missing.json")}).code, 1);
  EXPECT_EQ(run({"events", "--event", "Q"}).code, 1);
  EXPECT_EQ(run({"verify", "--corpus", "huge"}).code, 1);
  {
    std::ofstream(path("t.gwtree")) << gwhk::serialize_tree(gwhk::regular_tree(2, 3));
  }
  const auto r = run({"heat-kernel", "--tree", path("t.gwtree"), "--steps", "10", "--out-dir", dir_.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("depth-exceeded"), std::string::npos);
  std::ofstream(path("flat.csv")) << "s,value,stderr,n\n0,1,0,1\n2,0.5,0,1\n";
  EXPECT_EQ(run({"fit", "--in", path("flat.csv"), "--out", path("f.csv")}).code, 2);
}
