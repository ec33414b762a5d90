#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "hace/config.hpp"
#include "hace/generate.hpp"
#include "hace/setops.hpp"
#include "oracle.hpp"

using namespace hace;

TEST(SetOps, EqualizerKeepsAgreeingElements) {
  FinSet dom = FinSet::range(4);
  FinFn  f(3, {0, 1, 2, 2});
  FinFn  g(3, {0, 2, 2, 1});
  auto   r = equalizer(dom, f, g);
  ASSERT_EQ(r.carrier.size(), 2u);
  EXPECT_EQ(r.legs[0].table(), (std::vector<std::size_t>{0, 2}));
}

TEST(SetOps, CoequalizerMergesImages) {
  FinSet cod = FinSet::range(4);
  FinFn  f(4, {0, 2});
  FinFn  g(4, {1, 3});
  auto   r = coequalizer(cod, f, g);
  EXPECT_EQ(r.carrier.size(), 2u);
  EXPECT_EQ(r.legs[0].table(), (std::vector<std::size_t>{0, 0, 1, 1}));
}

TEST(SetOps, EmptyEqualizerAndCoequalizer) {
  auto e = equalizer(FinSet(), FinFn(2, {}), FinFn(2, {}));
  EXPECT_EQ(e.carrier.size(), 0u);
  auto q = coequalizer(FinSet(), FinFn(0, {}), FinFn(0, {}));
  EXPECT_EQ(q.carrier.size(), 0u);
}

TEST(SetOps, HomSetEnumeratesAllFunctions) {
  FinSet x = FinSet::range(2);
  FinSet y = FinSet::range(3);
  EXPECT_EQ(hom_set(x, y).size(), 9u);
  EXPECT_EQ(hom_set(FinSet(), y).size(), 1u);
  EXPECT_EQ(hom_set(x, FinSet()).size(), 0u);
  for (std::size_t k = 0; k < 9; ++k) {
    EXPECT_EQ(index_of_function(function_at(k, 2, 3)), k);
  }
}

TEST(SetOps, CopowerAndPowerSizes) {
  FinSet s = FinSet::range(3);
  FinSet x = FinSet::range(2);
  EXPECT_EQ(copower(s, x).size(), 6u);
  EXPECT_EQ(power(s, x).size(), 8u);  // x^s
}

TEST(SetOps, EnumerateFamiliesHonoursConstraints) {
  // v0 == v1 over three values.
  std::vector<EqConstraint> cs{{0, FinFn::identity(3), 1, FinFn::identity(3)}};
  auto                      fs = enumerate_families({3, 3}, cs);
  ASSERT_EQ(fs.size(), 3u);
  EXPECT_EQ(fs[2], (std::vector<std::size_t>{2, 2}));
}

TEST(SetOps, EnumerateFamiliesRespectsCap) {
  std::uint64_t old = size_cap();
  set_size_cap(100);
  EXPECT_THROW(enumerate_families({10, 10, 10}, {}), Error);
  set_size_cap(old);
}

class SetOpsRandom : public ::testing::TestWithParam<int> {};

TEST_P(SetOpsRandom, LimitsAndColimitsMatchOracle) {
  Rng     rng(GetParam());
  Profile prof;
  auto    gc = random_category(rng, prof, "C");
  for (VarianceSig sig : {VarianceSig{0, 1}, VarianceSig{1, 0}}) {
    auto       F = random_functor(rng, gc.cat, sig, prof);
    SetFunctor D = F.functor();
    Diagram    d = diagram_of(D);
    auto       l = limit(d);
    auto       c = colimit(d);
    EXPECT_EQ(l.carrier.size(), oracle::limit_size(D));
    EXPECT_EQ(c.carrier.size(), oracle::colimit_size(D));
    EXPECT_TRUE(legs_form_cone(d, l));
    EXPECT_TRUE(legs_form_cocone(d, c));
  }
}

TEST_P(SetOpsRandom, WeightedLimitCountsNaturalTransformations) {
  Rng     rng(1000 + GetParam());
  Profile prof;
  prof.max_fiber = 2;
  auto gc = random_category(rng, prof, "C");
  auto W  = random_functor(rng, gc.cat, {0, 1}, prof).functor();
  auto D  = random_functor(rng, gc.cat, {0, 1}, prof).functor();
  auto r  = weighted_limit(W, D);
  EXPECT_EQ(r.carrier.size(), oracle::count_nat(W, D));
  EXPECT_EQ(r.carrier.size(), count_nat(W, D));
}

INSTANTIATE_TEST_SUITE_P(Seeds, SetOpsRandom, ::testing::Range(0, 40));
