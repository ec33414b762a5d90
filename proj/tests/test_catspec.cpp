#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "hace/catspec.hpp"
#include "hace/generate.hpp"
#include "oracle.hpp"

using namespace hace;

namespace {

ErrorKind resolve_error(std::string const& text) {
  try {
    resolve(parse_catspec(text));
  } catch (Error const& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ErrorKind::ParseError;
}

}  // namespace

TEST(CatSpec, ParsesEveryStanzaKind) {
  auto s = parse_catspec(
      "# comment\n"
      "category A = walking_arrow\n"
      "category P poset\n"
      "  objects a b\n"
      "  le a b\n"
      "end\n"
      "category M monoid\n"
      "  elements e s\n"
      "  unit e\n"
      "  row e = e s\n"
      "  row s = s e\n"
      "end\n"
      "category AP = product A P\n"
      "functor H on A sig 1 1 = hom\n"
      "functor E on P sig 0 1 = const x y\n"
      "monoidal T = trivial\n"
      "job end H\n"
      "job check-all\n");
  EXPECT_EQ(s.categories.size(), 4u);
  EXPECT_EQ(s.functors.size(), 2u);
  EXPECT_EQ(s.monoidals.size(), 1u);
  ASSERT_EQ(s.jobs.size(), 2u);
  EXPECT_EQ(s.jobs[0].kind, "end");
  EXPECT_EQ(s.jobs[0].args, (std::vector<std::string>{"H"}));
  EXPECT_EQ(s.jobs[1].line, 18u);
  EXPECT_EQ(s.categories[1].kind, CategoryDecl::Kind::poset);
  EXPECT_EQ(s.categories[3].parts, (std::vector<std::string>{"A", "P"}));
  EXPECT_EQ(s.functors[1].args, (std::vector<std::string>{"x", "y"}));
  auto m = resolve(s);
  EXPECT_EQ(m.categories.at("AP")->num_objects(), 4u);
}

TEST(CatSpec, ParseErrorsCarryPositions) {
  struct Case {
    std::string text;
    std::size_t line, col;
  };
  std::vector<Case> cases{
      {"frobnicate\n", 1, 1},
      {"functor F on C sig x 1 = point\n", 1, 20},
      {"category C poset\n  objects a b\n  le a\nend\n", 3, 7},
  };
  for (auto const& c : cases) {
    try {
      parse_catspec(c.text);
      ADD_FAILURE() << "no error for " << c.text;
    } catch (ParseError const& e) {
      EXPECT_EQ(e.kind(), ErrorKind::ParseError);
      EXPECT_EQ(e.line(), c.line) << c.text;
      EXPECT_EQ(e.col(), c.col) << c.text;
      EXPECT_FALSE(e.expected().empty());
    }
  }
}

TEST(CatSpec, UnterminatedBlockIsAParseError) {
  EXPECT_THROW(parse_catspec("category C poset\n  objects a\n"), ParseError);
}

TEST(CatSpec, ResolutionErrors) {
  EXPECT_EQ(resolve_error("category A = walking_arrow\ncategory A = terminal\n"),
            ErrorKind::ResolutionError);
  EXPECT_EQ(resolve_error("category A = walking_arrow\nfunctor F on B sig 1 1 = hom\n"),
            ErrorKind::ResolutionError);
  EXPECT_EQ(resolve_error("category A = walking_arrow\njob end Q\n"),
            ErrorKind::ResolutionError);
}

TEST(CatSpec, ValidationErrorsComeFromTheModules) {
  EXPECT_EQ(resolve_error("category P poset\n  objects a b\n  le a b\n  le b a\nend\n"),
            ErrorKind::NotAPoset);
  EXPECT_EQ(resolve_error("category G graph\n  objects a b\n  edge f a b\n  edge g b a\nend\n"),
            ErrorKind::CyclicGraph);
}

TEST(CatSpec, ExplicitFunctorRoundTrip) {
  auto c = walking_arrow();
  auto H = hom_functor(c);
  CatSpec s;
  s.add(export_category(*c, "A"));
  s.add(export_functor(H, "H", "A"));
  auto text = print_catspec(s);
  auto back = parse_catspec(text);
  EXPECT_EQ(back, s);
  auto m = resolve(back);
  auto const& H2 = m.functors.at("H");
  for (std::size_t t = 0; t < H.domain()->num_objects(); ++t) {
    EXPECT_EQ(H2.fiber(t), H.fiber(t));
  }
  for (std::size_t f = 0; f < H.domain()->num_morphisms(); ++f) {
    EXPECT_EQ(H2.act(f), H.act(f));
  }
}

TEST(CatSpec, GeneratingMorphismsGenerate) {
  for (auto c : {fixtures::chain(4), fixtures::cyclic(4), fixtures::diamond()}) {
    auto gens = generating_morphisms(*c);
    auto t    = oracle::tables_of(*c);
    std::size_t const nm = t.src.size();
    std::vector<bool> hit(nm, false);
    for (auto i : t.id) {
      hit[i] = true;
    }
    for (auto g : gens) {
      EXPECT_FALSE(c->is_identity(g));
      hit[g] = true;
    }
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t f = 0; f < nm; ++f) {
        for (auto g : gens) {
          std::size_t h = hit[f] ? t.comp[g * nm + f] : FinCat::npos;
          if (h != FinCat::npos && !hit[h]) {
            hit[h] = grew = true;
          }
        }
      }
    }
    EXPECT_EQ(std::count(hit.begin(), hit.end(), true), static_cast<long>(nm));
  }
  EXPECT_EQ(generating_morphisms(*fixtures::cyclic(4)).size(), 1u);
}

TEST(CatSpec, ExportedTablesRebuildTheCategory) {
  for (auto c : {fixtures::cyclic(3), fixtures::diamond(), walking_arrow()}) {
    CatSpec s;
    s.add(export_category(*c, "X"));
    auto m = resolve(parse_catspec(print_catspec(s)));
    auto x = m.categories.at("X");
    auto a = oracle::tables_of(*c);
    auto b = oracle::tables_of(*x);
    EXPECT_EQ(a.comp, b.comp);
    EXPECT_EQ(a.id, b.id);
  }
}

class CatSpecSeeds : public ::testing::TestWithParam<int> {};

TEST_P(CatSpecSeeds, PrintParseRoundTrip) {
  auto s    = generate(GetParam());
  auto text = print_catspec(s);
  auto back = parse_catspec(text);
  EXPECT_EQ(back, s);
  EXPECT_EQ(print_catspec(back), text);
}

TEST_P(CatSpecSeeds, GenerationIsDeterministic) {
  EXPECT_EQ(print_catspec(generate(GetParam())), print_catspec(generate(GetParam())));
}

TEST_P(CatSpecSeeds, GeneratedSpecsResolve) {
  auto m = resolve(generate(GetParam()));
  EXPECT_EQ(m.functors.count("F"), 1u);
  EXPECT_EQ(m.functors.count("G"), 1u);
  auto const& F = m.functors.at("F");
  auto const& G = m.functors.at("G");
  EXPECT_EQ(F.sig().p, G.sig().q);
  EXPECT_EQ(F.sig().q, G.sig().p);
  EXPECT_TRUE(check_functor_pq(F).empty());
}

INSTANTIATE_TEST_SUITE_P(Seeds, CatSpecSeeds, ::testing::Range(0, 100));

class Corpus : public ::testing::TestWithParam<std::string> {};

TEST_P(Corpus, CanonicalFormMatchesGolden) {
  auto s = parse_catspec(fixtures::read_file(fixtures::corpus_path(GetParam(), ".cat")));
  EXPECT_EQ(print_catspec(s), fixtures::read_file(fixtures::corpus_path(GetParam(), ".canon")));
  EXPECT_EQ(parse_catspec(print_catspec(s)), s);
  EXPECT_NO_THROW(resolve(s));
}

INSTANTIATE_TEST_SUITE_P(Files, Corpus, ::testing::ValuesIn(fixtures::corpus_names()),
                         [](auto const& info) { return info.param; });
