#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace georand;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "georand");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::uint8_t> load_bits(const fs::path& p) {
  std::istringstream in(slurp(p));
  return parse_sequence(in);
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("georand_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenerateVoronoi) {
  const auto r = run_cli({"generate", "--mode", "voronoi", "--points", "100", "--seed", "5",
                          "--out", path("v.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto bits = load_bits(path("v.txt"));
  EXPECT_EQ(bits.size(), 100u);
  EXPECT_TRUE(fs::exists(path("v.txt.meta")));
  EXPECT_NE(r.out.find("length=100"), std::string::npos);
  EXPECT_EQ(bits, generate_sequence(5, 100, GeometryMode::voronoi, default_bounds()).bits());
}

TEST_F(Cli, GenerateDelaunayLengthLaw) {
  const auto r = run_cli({"generate", "--points", "60", "--seed", "9", "--out", path("d.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto k = convex_hull(sample_points(9, 60, default_bounds())).size();
  EXPECT_EQ(load_bits(path("d.txt")).size(), 2 * 60 - k - 2);
  EXPECT_NE(r.out.find("hull_k=" + std::to_string(k)), std::string::npos);
}

TEST_F(Cli, GenerateThreePoints) {
  const auto r = run_cli({"generate", "--points", "3", "--out", path("t.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_bits(path("t.txt")), std::vector<std::uint8_t>{0});
}

TEST_F(Cli, GenerateDeterministic) {
  ASSERT_EQ(run_cli({"generate", "--seed", "77", "--out", path("a.txt")}).code, 0);
  ASSERT_EQ(run_cli({"generate", "--seed", "77", "--out", path("b.txt")}).code, 0);
  EXPECT_EQ(slurp(path("a.txt")), slurp(path("b.txt")));
  EXPECT_EQ(slurp(path("a.txt.meta")), slurp(path("b.txt.meta")));
}

TEST_F(Cli, GenerateErrors) {
  auto r = run_cli({"generate", "--points", "2", "--out", path("x.txt")});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
  EXPECT_NE(run_cli({"generate", "--mode", "hexagon", "--out", path("x.txt")}).code, 0);
  EXPECT_NE(run_cli({"generate", "--bounds", "0,0,0,5", "--out", path("x.txt")}).code, 0);
  EXPECT_NE(run_cli({"frobnicate"}).code, 0);
}

TEST_F(Cli, PatternAcceptsExactLength) {
  for (std::uint64_t s : {1u, 2u}) {
    ASSERT_EQ(run_cli({"generate", "--seed", std::to_string(s), "--points", "30", "--out",
                       path("s" + std::to_string(s) + ".txt")})
                  .code,
              0);
  }
  const auto a = load_bits(path("s1.txt"));
  const auto b = load_bits(path("s2.txt"));
  const std::size_t total = a.size() + b.size();
  const std::string size = std::to_string(total) + "x1";
  for (std::string fmt : {"p1", "p4"}) {
    const auto r = run_cli({"pattern", "--input", path("s1.txt"), path("s2.txt"), "--size", size,
                            "--format", fmt, "--out", path("p." + fmt)});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto img = read_pbm(slurp(path("p." + fmt)));
    ASSERT_EQ(img.width(), total);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(img.at(0, i), a[i]);
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(img.at(0, a.size() + i), b[i]);
  }
}

TEST_F(Cli, PatternMismatchReportsLengths) {
  ASSERT_EQ(run_cli({"generate", "--points", "20", "--out", path("s.txt")}).code, 0);
  const auto n = load_bits(path("s.txt")).size();
  const auto r = run_cli({"pattern", "--input", path("s.txt"), "--size", "10x10", "--out", path("p.pbm")});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find(std::to_string(n)), std::string::npos);
  EXPECT_NE(r.err.find("100"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("p.pbm")));
  EXPECT_NE(run_cli({"pattern", "--input", path("s.txt"), "--size", "10x10", "--format", "png"}).code, 0);
  EXPECT_NE(run_cli({"pattern", "--input", path("missing.txt"), "--size", "1x1"}).code, 0);
}

TEST_F(Cli, TestAutocorrelationCurve) {
  ASSERT_EQ(run_cli({"generate", "--seed", "11", "--points", "100", "--out", path("s.txt")}).code, 0);
  const auto r = run_cli({"test", "--input", path("s.txt"), "--only", "autocorrelation", "--curve",
                          path("c.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("k=188"), std::string::npos);
  std::istringstream curve(slurp(path("c.txt")));
  std::string first;
  std::getline(curve, first);
  EXPECT_EQ(first, "0 1");
  std::size_t lines = 1;
  for (std::string l; std::getline(curve, l);) ++lines;
  EXPECT_EQ(lines, 189u);
}

TEST_F(Cli, TestSplitmixBinaryRank) {
  const auto r = run_cli({"test", "--generator", "splitmix", "--seed", "3", "--only", "binary-rank",
                          "--out", path("report.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = slurp(path("report.txt"));
  const auto at = text.find("binary-rank.p_value=");
  ASSERT_NE(at, std::string::npos);
  const double p = std::stod(text.substr(at + 20));
  EXPECT_GT(p, 0.001);
  EXPECT_LT(p, 0.999);
}

TEST_F(Cli, TestDSequenceIsDegenerate) {
  const auto r = run_cli({"test", "--generator", "dsequence:13", "--only", "runs,binary-rank"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (std::string key : {"runs.p_value=", "binary-rank.p_value="}) {
    const auto at = r.out.find(key);
    ASSERT_NE(at, std::string::npos) << key;
    EXPECT_LT(std::stod(r.out.substr(at + key.size())), 1e-6) << key;
  }
}

TEST_F(Cli, TestInsufficientDataIsReported) {
  ASSERT_EQ(run_cli({"generate", "--points", "50", "--out", path("s.txt")}).code, 0);
  const auto r = run_cli({"test", "--input", path("s.txt"), "--only", "runs"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("insufficient data"), std::string::npos);
  EXPECT_NE(r.out.find("runs"), std::string::npos);
}

TEST_F(Cli, TestArgumentErrors) {
  EXPECT_NE(run_cli({"test", "--only", "runs"}).code, 0);
  EXPECT_NE(run_cli({"test", "--generator", "splitmix", "--only", "parking-lot"}).code, 0);
  EXPECT_NE(run_cli({"test", "--generator", "mersenne", "--only", "runs"}).code, 0);
}

TEST_F(Cli, FiguresDeterministic) {
  const auto r1 = run_cli({"figures", "--seed", "2", "--out", path("f1")});
  ASSERT_EQ(r1.code, 0) << r1.err;
  ASSERT_EQ(run_cli({"figures", "--seed", "2", "--out", path("f2")}).code, 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(path("f1"))) {
    ++files;
    EXPECT_EQ(slurp(e.path()), slurp(fs::path(path("f2")) / e.path().filename()))
        << e.path().filename();
  }
  EXPECT_EQ(files, 20u);

  std::istringstream counts(slurp(fs::path(path("f1")) / "fig3_counts.txt"));
  std::string header;
  std::getline(counts, header);
  std::size_t rows = 0;
  for (std::size_t n, cells, tris, k, law; counts >> n >> cells >> tris >> k >> law; ++rows) {
    EXPECT_EQ(cells, n);
    EXPECT_EQ(tris, law);
    EXPECT_EQ(tris, 2 * n - k - 2);
  }
  EXPECT_EQ(rows, 20u);

  const auto img = read_pbm(slurp(fs::path(path("f1")) / "fig6_128x64.pbm"));
  EXPECT_EQ(img.width(), 128u);
  EXPECT_EQ(img.height(), 64u);
}
