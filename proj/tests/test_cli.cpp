#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string out;
};

// Runs the CLI with stderr discarded unless `keep_err`.
Result run(const std::string& args, bool keep_err = false) {
  std::string cmd = std::string(GALLERY_CLI) + " " + args + (keep_err ? " 2>&1" : " 2>/dev/null");
  Result r;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return r;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, f)) r.out.append(buf, n);
  int st = pclose(f);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string data(const char* name) { return (fs::path(GALLERY_TEST_DATA) / name).string(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("gallery_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string tmp(const char* name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, VerifyCovered) {
  Result r = run("verify --polygon " + data("l.poly") + " --guards \"1/1,1/1\"");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "covered\n");
}

TEST_F(Cli, VerifyNotCoveredPrintsWitness) {
  Result r = run("verify --polygon " + data("l.poly") + " --guards \"19/10,1/10\"");
  EXPECT_EQ(r.status, 1);
  ASSERT_EQ(r.out.rfind("not covered: ", 0), 0u) << r.out;
  EXPECT_NE(r.out.find(','), std::string::npos);
}

TEST_F(Cli, SolveComb3) {
  Result r = run("solve --polygon " + data("comb3.poly") + " --mode exact --max-bits 32");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("guards 3\n", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("bits max "), std::string::npos);
  Result g = run("solve --polygon " + data("comb3.poly") + " --mode greedy --grid-level 2");
  EXPECT_EQ(g.status, 0);
  EXPECT_NE(g.out.find("guards 3\n"), std::string::npos) << g.out;
  Result none = run("solve --polygon " + data("comb3.poly") + " --max-bits 0");
  EXPECT_EQ(none.status, 1);
}

TEST_F(Cli, Validate) {
  EXPECT_EQ(run("validate --polygon " + data("l.poly")).out, "valid\n");
  std::ofstream(tmp("cw.poly")) << "L 1\nouter 4\n0 0\n0 1\n1 1\n1 0\nholes 0\n";
  Result cw = run("validate --polygon " + tmp("cw.poly"), true);
  EXPECT_EQ(cw.status, 1);
  EXPECT_NE(cw.out.find("orientation"), std::string::npos);
  std::ofstream(tmp("zero.poly")) << "L 1\nouter 3\n0 0\n1/0 0\n0 1\nholes 0\n";
  Result z = run("validate --polygon " + tmp("zero.poly"), true);
  EXPECT_EQ(z.status, 2);
  EXPECT_NE(z.out.find("zero denominator"), std::string::npos);
  EXPECT_NE(z.out.find("line 4"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("bogus").status, 2);
  EXPECT_EQ(run("verify --polygon " + data("l.poly")).status, 2);
  EXPECT_EQ(run("verify --polygon /nonexistent.poly --guards 1,1").status, 2);
  EXPECT_EQ(run("verify --polygon " + data("l.poly") + " --guards 0.5,1").status, 2);
  EXPECT_EQ(run("solve --polygon " + data("l.poly") + " --mode fast").status, 2);
  EXPECT_EQ(run("--help").status, 0);
}

TEST_F(Cli, GuardOutsideIsDomainFailure) {
  Result r = run("verify --polygon " + data("l.poly") + " --guards \"3/2,3/2\"", true);
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("GuardOutsidePolygon"), std::string::npos);
}

TEST_F(Cli, PerturbComposesWithVerify) {
  std::string out = tmp("p.poly");
  EXPECT_EQ(run("perturb --polygon " + data("l.poly") + " --delta 1/4 --q 8 --seed 3 --out " + out).status, 0);
  std::string text = slurp(out);
  EXPECT_NE(text.find("# model edge-inflate"), std::string::npos);
  EXPECT_EQ(run("verify --polygon " + out + " --guards 1,1").out, "covered\n");
  EXPECT_EQ(run("validate --no-bounds --polygon " + out).status, 0);
  // Same seed, same output.
  EXPECT_EQ(run("perturb --polygon " + data("l.poly") + " --delta 1/4 --q 8 --seed 3").out, text);
  EXPECT_EQ(run("perturb --polygon " + data("l.poly") + " --model vertex-perturb --delta 1/8 --seed 1").status, 0);
  EXPECT_EQ(run("perturb --polygon " + data("l.poly") + " --model sideways --delta 1/8 --seed 1").status, 2);
  EXPECT_EQ(run("perturb --polygon " + data("l.poly") + " --delta 1/4").status, 2);
}

TEST_F(Cli, Visibility) {
  Result r = run("visibility --polygon " + data("l.poly") + " --guard 1/2,1/2 --svg " + tmp("v.svg"));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 6);
  EXPECT_NE(slurp(tmp("v.svg")).find("class=\"visibility\""), std::string::npos);
  EXPECT_EQ(run("visibility --polygon " + data("l.poly") + " --guard 3/2,3/2").status, 1);
}

TEST_F(Cli, RenderMatchesGolden) {
  Result r = run("render --polygon " + data("l.poly") + " --guards 1,1 --visibility --grid 1/2");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, slurp(data("l_polygon_guard.svg")));
  Result w = run("render --polygon " + data("l.poly") + " --guards 3/2,1/2 --witnesses --inflate 1/4 --out " +
                 tmp("r.svg"));
  EXPECT_EQ(w.status, 0);
  std::string svg = slurp(tmp("r.svg"));
  EXPECT_NE(svg.find("class=\"witness\""), std::string::npos);
  EXPECT_NE(svg.find("id=\"inflated\""), std::string::npos);
}

TEST_F(Cli, Gen) {
  Result r = run("gen --spec \"Comb 3\"");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.substr(r.out.find('\n') + 1), slurp(data("comb3.poly")).substr(slurp(data("comb3.poly")).find('\n') + 1));
  Result c = run("gen --spec \"Convex 7\" --seed 5 --out " + tmp("c.poly"));
  EXPECT_EQ(c.status, 0);
  EXPECT_EQ(run("validate --polygon " + tmp("c.poly")).out, "valid\n");
  EXPECT_EQ(run("gen --spec \"Hexagon 6\"").status, 2);
  EXPECT_EQ(run("gen --spec \"Convex 2\"").status, 2);
}

TEST_F(Cli, ExperimentDeterministicAndSeedRequired) {
  std::ofstream(tmp("cfg.json")) << R"({
    "experiment": "GridContainment",
    "polygons": ["Comb 2", {"generator": "Convex 5", "seed": 1}],
    "deltas": ["1/8", "1/16"],
    "samples": 2
  })";
  EXPECT_EQ(run("experiment --config " + tmp("cfg.json")).status, 2);
  Result a = run("experiment --config " + tmp("cfg.json") + " --seed 11 --workers 1 --rows " + tmp("a.csv"));
  Result b = run("experiment --config " + tmp("cfg.json") + " --seed 11 --workers 3 --rows " + tmp("b.csv"));
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(b.status, 0);
  std::string rows = slurp(tmp("a.csv"));
  EXPECT_EQ(rows, slurp(tmp("b.csv")));
  EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 9);
  EXPECT_EQ(rows.find('\r'), std::string::npos);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("scope,delta", 0), 0u);

  std::ofstream(tmp("bad.json")) << R"({"experiment": "DiscreteHighProb", "polygons": ["Pinwheel"],
    "deltas": ["1/8"], "q": 10, "p": "1/4"})";
  Result bad = run("experiment --config " + tmp("bad.json") + " --seed 1", true);
  EXPECT_EQ(bad.status, 2);
  EXPECT_NE(bad.out.find("q > 2n/p"), std::string::npos);
  std::ofstream(tmp("broken.json")) << "{ not json";
  EXPECT_EQ(run("experiment --config " + tmp("broken.json") + " --seed 1").status, 2);
}
