#include <gtest/gtest.h>

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include <json.hpp>
#endif

#include "fixtures.hpp"
#include "hace/config.hpp"
#include "hace/generate.hpp"
#include "hace/runner.hpp"

using namespace hace;

namespace {

Report run_corpus(std::string const& stem, RunFlags const& flags = {}) {
  return run(parse_catspec(fixtures::read_file(fixtures::corpus_path(stem, ".cat"))), flags);
}

std::size_t failed_checks(Report const& r) {
  std::size_t n = 0;
  for (auto const& j : r.jobs) {
    for (auto const& c : j.checks) {
      n += c.ok ? 0 : 1;
    }
  }
  return n;
}

}  // namespace

TEST(Runner, ExitCodeTable) {
  EXPECT_EQ(exit_code_for(ErrorKind::SizeCapExceeded), 2);
  EXPECT_EQ(exit_code_for(ErrorKind::ParseError), 3);
  EXPECT_EQ(exit_code_for(ErrorKind::ResolutionError), 3);
  for (auto k : {ErrorKind::MissingIdentity, ErrorKind::NonAssociative, ErrorKind::NotAPoset,
                 ErrorKind::CyclicGraph, ErrorKind::NotFunctorial}) {
    EXPECT_EQ(exit_code_for(k), 4) << to_string(k);
  }
  EXPECT_EQ(exit_code_for(ErrorKind::GenerationExhausted), 5);
}

TEST(Runner, ReportExitCodes) {
  Report r;
  EXPECT_EQ(exit_code(r), 0);
  JobRecord j;
  j.checks.push_back({"x", false, {}, {"broken"}});
  r.jobs.push_back(j);
  EXPECT_EQ(exit_code(r), 1);
  r.jobs[0].error = ErrorKind::SizeCapExceeded;
  EXPECT_EQ(exit_code(r), 2);
}

TEST(Runner, CapErrorsStayOnTheirJob) {
  auto spec = parse_catspec(
      "category A = walking_arrow\n"
      "functor H on A sig 1 1 = hom\n"
      "functor E on A sig 2 1 = const a b c d e f g h\n"
      "job end E\n"
      "job end H\n");
  std::uint64_t old = size_cap();
  set_size_cap(40);
  auto r = run(spec);
  set_size_cap(old);
  ASSERT_EQ(r.jobs.size(), 2u);
  EXPECT_EQ(r.jobs[0].error, std::optional<ErrorKind>(ErrorKind::SizeCapExceeded));
  EXPECT_FALSE(r.jobs[1].error.has_value());
  EXPECT_EQ(exit_code(r), 2);
}

TEST(Runner, MethodSelectionIsRecorded) {
  RunFlags flags;
  flags.methods = {EndMethod::twisted};
  auto r        = run_corpus("ordinary_end", flags);
  EXPECT_EQ(r.methods, (std::vector<std::string>{"twisted"}));
  EXPECT_EQ(failed_checks(r), 0u);
}

class RunnerCorpus : public ::testing::TestWithParam<std::string> {};

TEST_P(RunnerCorpus, TextMatchesGolden) {
  auto r = run_corpus(GetParam());
  EXPECT_EQ(render_text(r), fixtures::read_file(fixtures::corpus_path(GetParam(), ".txt")));
  EXPECT_EQ(exit_code(r), 0);
}

TEST_P(RunnerCorpus, JsonMatchesGoldenAndParses) {
  auto r    = run_corpus(GetParam());
  auto text = render_json(r);
  EXPECT_EQ(text, fixtures::read_file(fixtures::corpus_path(GetParam(), ".json")));
  auto doc = nlohmann::json::parse(text);
  EXPECT_EQ(doc["jobs"].size(), r.jobs.size());
  EXPECT_EQ(doc.dump(2) + "\n", text);
}

INSTANTIATE_TEST_SUITE_P(Files, RunnerCorpus, ::testing::ValuesIn(fixtures::corpus_names()),
                         [](auto const& info) { return info.param; });

class RunnerSeeds : public ::testing::TestWithParam<int> {};

TEST_P(RunnerSeeds, DeterministicAndLawful) {
  Profile prof;
  prof.max_arity = 2;
  auto     spec  = generate(GetParam(), prof);
  RunFlags flags;
  flags.seed = GetParam();
  auto a     = run(spec, flags);
  auto b     = run(parse_catspec(print_catspec(spec)), flags);
  EXPECT_EQ(render_text(a), render_text(b));
  EXPECT_EQ(render_json(a), render_json(b));
  EXPECT_EQ(failed_checks(a), 0u) << render_text(a);
  for (auto const& j : a.jobs) {
    if (j.error) {
      EXPECT_EQ(*j.error, ErrorKind::SizeCapExceeded) << j.error_message;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RunnerSeeds, ::testing::Range(0, 25));
