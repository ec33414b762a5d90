#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "hace/fincat.hpp"
#include "oracle.hpp"

using namespace hace;

namespace {

RawCategory arrow_raw() {
  RawCategory r;
  r.name       = "arrow";
  r.objects    = {"a", "b"};
  r.morphisms  = {{"ida", "a", "a"}, {"idb", "b", "b"}, {"f", "a", "b"}};
  r.identities = {{"a", "ida"}, {"b", "idb"}};
  r.composition = {{"ida", "ida", "ida"}, {"idb", "idb", "idb"},
                   {"f", "ida", "f"},     {"idb", "f", "f"}};
  return r;
}

bool has_kind(std::vector<Violation> const& vs, ErrorKind k) {
  for (auto const& v : vs) {
    if (v.kind == k) {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST(FinCat, WalkingArrowHasThreeMorphisms) {
  auto c = walking_arrow();
  EXPECT_EQ(c->num_objects(), 2u);
  EXPECT_EQ(c->num_morphisms(), 3u);
  EXPECT_EQ(c->hom(0, 1).size(), 1u);
  EXPECT_TRUE(c->hom(1, 0).empty());
  EXPECT_TRUE(oracle::is_category(oracle::tables_of(*c)));
}

TEST(FinCat, ValidRawTablesPass) {
  EXPECT_TRUE(check_category(arrow_raw()).empty());
  auto c = validate_category(arrow_raw());
  EXPECT_EQ(c->morphism_name(c->compose(*c->find_morphism("idb"), *c->find_morphism("f"))),
            "f");
}

TEST(FinCat, MissingIdentityIsReported) {
  auto r       = arrow_raw();
  r.identities = {{"a", "ida"}};
  EXPECT_TRUE(has_kind(check_category(r), ErrorKind::MissingIdentity));
  try {
    validate_category(r);
    FAIL() << "expected an error";
  } catch (Error const& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingIdentity);
  }
}

TEST(FinCat, IllTypedCompositeIsReported) {
  auto r = arrow_raw();
  r.composition.push_back({"f", "f", "f"});
  EXPECT_TRUE(has_kind(check_category(r), ErrorKind::IllTypedComposite));
}

TEST(FinCat, DanglingNameIsReported) {
  auto r = arrow_raw();
  r.morphisms.push_back({"g", "a", "nowhere"});
  EXPECT_TRUE(has_kind(check_category(r), ErrorKind::DanglingId));
}

TEST(FinCat, NonAssociativeTablesAreReported) {
  // Monoid {e, x, y} with x.y = x but y.x = y and x.x = y: (x.x).y = y.y
  // must match x.(x.y) = x.x.
  RawCategory r;
  r.objects    = {"*"};
  r.morphisms  = {{"e", "*", "*"}, {"x", "*", "*"}, {"y", "*", "*"}};
  r.identities = {{"*", "e"}};
  std::vector<std::string> m{"e", "x", "y"};
  std::string              tab[3][3] = {{"e", "x", "y"}, {"x", "y", "x"}, {"y", "y", "e"}};
  for (int g = 0; g < 3; ++g) {
    for (int f = 0; f < 3; ++f) {
      r.composition.push_back({m[g], m[f], tab[g][f]});
    }
  }
  auto vs = check_category(r);
  EXPECT_TRUE(has_kind(vs, ErrorKind::NonAssociative));
  EXPECT_FALSE(has_kind(check_category(r, false), ErrorKind::NonAssociative));
}

TEST(FinCat, PosetClosureAndCycles) {
  auto c = build_poset("p", {{"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}});
  EXPECT_EQ(c->num_morphisms(), 6u);
  EXPECT_EQ(c->morphism_name(c->hom(0, 2)[0]), "a<c");
  EXPECT_TRUE(oracle::is_category(oracle::tables_of(*c)));
  try {
    build_poset("bad", {{"a", "b"}, {{"a", "b"}, {"b", "a"}}});
    FAIL() << "expected NotAPoset";
  } catch (Error const& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAPoset);
  }
}

TEST(FinCat, MonoidComposition) {
  auto z3 = fixtures::cyclic(3);
  EXPECT_EQ(z3->num_objects(), 1u);
  EXPECT_EQ(z3->num_morphisms(), 3u);
  EXPECT_EQ(z3->compose(1, 1), 2u);
  EXPECT_EQ(z3->compose(1, 2), 0u);
  EXPECT_TRUE(oracle::is_category(oracle::tables_of(*z3)));
}

TEST(FinCat, MonoidWithoutUnitLawFails) {
  MonoidData d{{"e", "x"}, "e", {{0, 0}, {0, 1}}};
  EXPECT_THROW(build_monoid("bad", d), Error);
}

TEST(FinCat, FreeCategoryOnPathGraph) {
  GraphData g{{"a", "b", "c"}, {{"f", "a", "b"}, {"g", "b", "c"}}};
  auto      c = build_free("free", g);
  EXPECT_EQ(c->num_morphisms(), 6u);
  ASSERT_EQ(c->hom(0, 2).size(), 1u);
  EXPECT_EQ(c->morphism_name(c->hom(0, 2)[0]), "g.f");
  GraphData cyc{{"a", "b"}, {{"f", "a", "b"}, {"g", "b", "a"}}};
  try {
    build_free("cyc", cyc);
    FAIL() << "expected CyclicGraph";
  } catch (Error const& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CyclicGraph);
  }
}

TEST(FinCat, ParallelEdgesGiveDistinctPaths) {
  GraphData g{{"a", "b"}, {{"f", "a", "b"}, {"g", "a", "b"}}};
  auto      c = build_free("par", g);
  EXPECT_EQ(c->hom(0, 1).size(), 2u);
}

TEST(FinCat, ProductIndexingIsLexicographic) {
  auto a = walking_arrow();
  auto z = fixtures::cyclic(2);
  auto p = FinCat::product({a, z});
  EXPECT_EQ(p->num_objects(), 2u);
  EXPECT_EQ(p->num_morphisms(), 6u);
  EXPECT_EQ(p->object_name(1), "(1,*)");
  EXPECT_TRUE(oracle::is_category(oracle::tables_of(*p->materialize())));
  EXPECT_TRUE(oracle::is_category(oracle::tables_of(*p)));
}

TEST(FinCat, OppositeReversesMorphisms) {
  auto a  = walking_arrow();
  auto op = opposite(a);
  EXPECT_EQ(op->hom(1, 0).size(), 1u);
  EXPECT_TRUE(op->hom(0, 1).empty());
  EXPECT_TRUE(oracle::is_category(oracle::tables_of(*op)));
}

TEST(FinCat, CoproductPrefixesNames) {
  auto c = coproduct({walking_arrow(), fixtures::cyclic(2)}, "sum");
  EXPECT_EQ(c->num_objects(), 3u);
  EXPECT_EQ(c->num_morphisms(), 5u);
  EXPECT_EQ(c->object_name(0), "0.0");
  EXPECT_EQ(c->object_name(2), "1.*");
  EXPECT_TRUE(oracle::is_category(oracle::tables_of(*c)));
}

TEST(FinCat, PowerZeroZeroIsTerminal) {
  auto t = power_pq(fixtures::chain(3), {0, 0});
  EXPECT_EQ(t->num_objects(), 1u);
  EXPECT_EQ(t->num_morphisms(), 1u);
}

TEST(FinCat, PowerPqMixesVariance) {
  auto a = walking_arrow();
  auto p = power_pq(a, {1, 1});
  // (x ; y) -> (x' ; y') needs x' <= x and y <= y'.
  EXPECT_EQ(p->num_objects(), 4u);
  EXPECT_EQ(p->num_morphisms(), 9u);
  EXPECT_EQ(p->hom(tuple_code({1, 0}, 2), tuple_code({0, 1}, 2)).size(), 1u);
  EXPECT_TRUE(p->hom(tuple_code({0, 0}, 2), tuple_code({1, 0}, 2)).empty());
}

TEST(FinCat, FunctorLawsAreChecked) {
  auto    a  = walking_arrow();
  Functor id = identity_functor(a);
  EXPECT_TRUE(check_functor(id).empty());
  Functor bad = id;
  bad.on_objects = {1, 1};
  EXPECT_FALSE(check_functor(bad).empty());
  Functor t = to_terminal(a);
  EXPECT_TRUE(check_functor(compose(t, id)).empty());
}

TEST(FinCat, DiagonalFunctorIsFunctorial) {
  auto c = fixtures::diamond();
  for (VarianceSig s : {VarianceSig{1, 1}, VarianceSig{2, 1}, VarianceSig{0, 2}}) {
    EXPECT_TRUE(check_functor(diagonal_functor(c, s)).empty()) << to_string(s);
  }
}

TEST(FinCat, TupleCodesRoundTrip) {
  for (std::size_t code = 0; code < 27; ++code) {
    EXPECT_EQ(tuple_code(tuple_decode(code, 3, 3), 3), code);
  }
  EXPECT_EQ(tuple_decode(5, 3, 2), (Tuple{1, 2}));
}
