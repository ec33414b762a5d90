#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Result {
  int         code = -1;
  std::string out;
};

std::string slurp(fs::path const& p) {
  std::ifstream      in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result hace(std::string const& args, std::string const& env = "") {
  static int n   = 0;
  fs::path   out = fs::temp_directory_path() / ("hace_cli_" + std::to_string(::getpid()) + "_" +
                                              std::to_string(n++) + ".out");
  std::string cmd = env + " \"" HACE_CLI "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
  int         st  = std::system(cmd.c_str());
  Result      r;
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.out  = slurp(out);
  fs::remove(out);
  return r;
}

std::string corpus(std::string const& rel) {
  return std::string(HACE_CORPUS_DIR) + "/" + rel;
}

fs::path write_temp(std::string const& name, std::string const& text) {
  fs::path p = fs::temp_directory_path() / (std::to_string(::getpid()) + "_" + name);
  std::ofstream(p) << text;
  return p;
}

std::vector<std::string> stems() {
  std::vector<std::string> out;
  for (auto const& e : fs::directory_iterator(HACE_CORPUS_DIR)) {
    if (e.path().extension() == ".cat") {
      out.push_back(e.path().stem().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

class CliCorpus : public ::testing::TestWithParam<std::string> {};

TEST_P(CliCorpus, TextReport) {
  auto r = hace("run \"" + corpus(GetParam() + ".cat") + "\"");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, slurp(corpus("golden/" + GetParam() + ".txt")));
}

TEST_P(CliCorpus, JsonReport) {
  auto r = hace("run --format json \"" + corpus(GetParam() + ".cat") + "\"");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, slurp(corpus("golden/" + GetParam() + ".json")));
}

TEST_P(CliCorpus, PrintIsCanonical) {
  auto r = hace("print \"" + corpus(GetParam() + ".cat") + "\"");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, slurp(corpus("golden/" + GetParam() + ".canon")));
}

INSTANTIATE_TEST_SUITE_P(Files, CliCorpus, ::testing::ValuesIn(stems()),
                         [](auto const& info) { return info.param; });

TEST(Cli, StdinMatchesFile) {
  auto a = hace("run \"" + corpus("ordinary_end.cat") + "\"");
  auto b = hace("run - < \"" + corpus("ordinary_end.cat") + "\"");
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, GenerateRunIsDeterministic) {
  auto g = hace("generate --seed 11 --sig 1 1");
  ASSERT_EQ(g.code, 0);
  auto p  = write_temp("gen.cat", g.out);
  auto r1 = hace("run --seed 5 \"" + p.string() + "\"");
  auto r2 = hace("run --seed 5 \"" + p.string() + "\"");
  EXPECT_EQ(r1.code, 0);
  EXPECT_EQ(r1.out, r2.out);
  EXPECT_EQ(hace("print \"" + p.string() + "\"").out, g.out);
  fs::remove(p);
}

TEST(Cli, ParseErrorExitsThree) {
  auto p = write_temp("bad.cat", "frobnicate\n");
  EXPECT_EQ(hace("run \"" + p.string() + "\"").code, 3);
  fs::remove(p);
}

TEST(Cli, ValidationErrorExitsFour) {
  auto p = write_temp("cyc.cat", "category P poset\n  objects a b\n  le a b\n  le b a\nend\n");
  EXPECT_EQ(hace("run \"" + p.string() + "\"").code, 4);
  fs::remove(p);
}

TEST(Cli, CapExitsTwo) {
  auto p = write_temp("cap.cat",
                      "category A = walking_arrow\n"
                      "functor E on A sig 2 1 = const a b c d e f g h\n"
                      "job end E\n");
  EXPECT_EQ(hace("run --cap 40 \"" + p.string() + "\"").code, 2);
  EXPECT_EQ(hace("run \"" + p.string() + "\"", "HACE_CAP=40").code, 2);
  EXPECT_EQ(hace("run \"" + p.string() + "\"").code, 0);
  fs::remove(p);
}

TEST(Cli, MethodFlag) {
  auto r = hace("run --method twisted \"" + corpus("ordinary_end.cat") + "\"");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("methods=twisted\n"), std::string::npos);
  EXPECT_NE(hace("run --method bogus \"" + corpus("ordinary_end.cat") + "\"").code, 0);
}

TEST(Cli, MissingFileIsAnError) {
  EXPECT_NE(hace("run /nonexistent/x.cat").code, 0);
}
