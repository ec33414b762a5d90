#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "hace/ends.hpp"
#include "hace/generate.hpp"
#include "oracle.hpp"

using namespace hace;

namespace {

// Components of every element of an end carrier, sorted.
std::vector<Tuple> families_of(EndPQ const& e) {
  std::vector<Tuple> out;
  for (std::size_t x = 0; x < e.carrier.carrier.size(); ++x) {
    Tuple t;
    for (auto const& l : e.carrier.legs) {
      t.push_back(l(x));
    }
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> classes_of(CoendPQ const& q) {
  std::vector<std::size_t> out;
  for (auto const& l : q.carrier.legs) {
    out.insert(out.end(), l.table().begin(), l.table().end());
  }
  return out;
}

// Delta^n : C -> C^(0,n)
Functor diagonal_n(SetFunctorPQ const& F, std::size_t n) {
  auto const& c = F.base();
  Functor     k{c, F.domain(), {}, {}};
  for (std::size_t a = 0; a < c->num_objects(); ++a) {
    k.on_objects.push_back(tuple_code(Tuple(n, a), c->num_objects()));
  }
  for (std::size_t f = 0; f < c->num_morphisms(); ++f) {
    k.on_morphisms.push_back(tuple_code(Tuple(n, f), c->num_morphisms()));
  }
  return k;
}

}  // namespace

TEST(Ends, MethodNamesRoundTrip) {
  for (auto m : all_end_methods()) {
    EXPECT_EQ(parse_end_method(to_string(m)), m);
  }
  EXPECT_FALSE(parse_end_method("bogus").has_value());
}

TEST(Ends, ZeroZeroEndOverTerminalIsTheSet) {
  auto D = constant_functor(terminal_category(), {0, 0}, FinSet({"x", "y", "z"}));
  EXPECT_EQ(end_pq(D).carrier.carrier.size(), 3u);
  EXPECT_EQ(coend_pq(D).carrier.carrier.size(), 3u);
}

TEST(Ends, ZeroZeroEndIsAPowerOverComponents) {
  auto two = discrete("two", {"p", "q"});
  auto D   = constant_functor(two, {0, 0}, FinSet::range(2));
  EXPECT_EQ(end_pq(D).carrier.carrier.size(), 4u);
  auto arrow = constant_functor(walking_arrow(), {0, 0}, FinSet::range(3));
  EXPECT_EQ(end_pq(arrow).carrier.carrier.size(), 3u);
}

TEST(Ends, HomOnArrowAndZ2) {
  auto H = hom_functor(walking_arrow());
  EXPECT_EQ(end_pq(H).carrier.carrier.size(), 1u);
  EXPECT_EQ(coend_pq(H).carrier.carrier.size(), 2u);
  auto Z = hom_functor(fixtures::cyclic(2));
  EXPECT_EQ(end_pq(Z).carrier.carrier.size(), 2u);
  EXPECT_EQ(coend_pq(Z).carrier.carrier.size(), 2u);
  // Z/3 is abelian, so every element is its own conjugacy class.
  auto Z3 = hom_functor(fixtures::cyclic(3));
  EXPECT_EQ(coend_pq(Z3).carrier.carrier.size(), 3u);
}

TEST(Ends, EndCarrierLabelsListComponents) {
  auto H = hom_functor(fixtures::cyclic(2));
  auto e = end_pq(H);
  ASSERT_EQ(e.carrier.carrier.size(), 2u);
  EXPECT_NE(e.carrier.carrier.label(0).find('e'), std::string::npos);
}

TEST(Ends, FindFamilyLocatesElements) {
  auto H = hom_functor(fixtures::cyclic(2));
  auto e = end_pq(H);
  EXPECT_EQ(find_family(e, Tuple{1}), std::optional<std::size_t>(1));
  auto A = hom_functor(walking_arrow());
  EXPECT_FALSE(find_family(end_pq(A), Tuple{5, 5}).has_value());
}

class EndsRandom : public ::testing::TestWithParam<int> {};

TEST_P(EndsRandom, EveryMethodMatchesTheOracle) {
  auto in = fixtures::instance(GetParam());
  for (auto const* F : {&in.F, &in.G}) {
    auto expect = oracle::end_families(*F);
    auto part   = oracle::coend_partition(*F);
    for (auto m : all_end_methods()) {
      auto e = end_pq(*F, m);
      EXPECT_EQ(families_of(e), expect) << to_string(m);
      auto q = coend_pq(*F, m);
      EXPECT_EQ(q.carrier.carrier.size(), part.classes) << to_string(m);
      EXPECT_TRUE(oracle::same_partition(classes_of(q), part.cls)) << to_string(m);
    }
  }
}

TEST_P(EndsRandom, LabelsAgreeAcrossMethods) {
  auto in = fixtures::instance(GetParam());
  auto e0 = end_pq(in.F);
  auto q0 = coend_pq(in.F);
  for (auto m : all_end_methods()) {
    EXPECT_EQ(end_pq(in.F, m).carrier.carrier, e0.carrier.carrier);
    EXPECT_EQ(coend_pq(in.F, m).carrier.carrier, q0.carrier.carrier);
  }
}

TEST_P(EndsRandom, UniversalProperty) {
  auto in = fixtures::instance(GetParam());
  auto u  = verify_universal_property(end_pq(in.F), in.F);
  EXPECT_TRUE(u.ok);
  auto v = verify_universal_property(coend_pq(in.G), in.G);
  EXPECT_TRUE(v.ok);
  EXPECT_EQ(u.wedges, u.factorizations);
}

TEST_P(EndsRandom, UniversalWedgeIsAWedge) {
  auto in = fixtures::instance(GetParam());
  EXPECT_TRUE(check_wedge(end_pq(in.F).wedge(), in.F).ok);
  EXPECT_TRUE(check_cowedge(coend_pq(in.F).cowedge(), in.F).ok);
}

TEST_P(EndsRandom, DinatAsEnd) {
  Profile prof;
  prof.max_fiber = 2;
  auto in        = fixtures::instance(GetParam(), prof);
  auto r         = dinat_as_end(in.F, in.G);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.dinat_count, r.end_count);
  EXPECT_EQ(r.dinat_count, oracle::count_dinat(in.F, in.G));
  EXPECT_EQ(r.pt_dinat_count, r.weight_nat);
}

TEST_P(EndsRandom, PeLaws) {
  auto in = fixtures::instance(GetParam());
  auto r  = check_pe_laws(in.F);
  EXPECT_TRUE(r.pe1 && r.pe7 && r.pe8);
}

TEST_P(EndsRandom, MuteSlotsLeaveTheEndUnchanged) {
  Profile prof;
  prof.max_arity = 2;
  auto in        = fixtures::instance(GetParam(), prof);
  auto M = mute_extend(in.F, 1, 0);
  EXPECT_EQ(end_pq(M).carrier.carrier.size(), end_pq(in.F).carrier.carrier.size());
  EXPECT_EQ(coend_pq(M).carrier.carrier.size(), coend_pq(in.F).carrier.carrier.size());
}

INSTANTIATE_TEST_SUITE_P(Seeds, EndsRandom, ::testing::Range(0, 40));

class Degenerate : public ::testing::TestWithParam<int> {};

TEST_P(Degenerate, OneZeroAndZeroOneAreLimits) {
  Rng     rng(GetParam());
  Profile prof;
  auto    gc = random_category(rng, prof, "C");
  for (VarianceSig s : {VarianceSig{1, 0}, VarianceSig{0, 1}}) {
    auto F = random_functor(rng, gc.cat, s, prof);
    EXPECT_EQ(end_pq(F).carrier.carrier.size(), oracle::limit_size(F.functor()));
    EXPECT_EQ(coend_pq(F).carrier.carrier.size(), oracle::colimit_size(F.functor()));
  }
}

TEST_P(Degenerate, ZeroNIsALimitAlongTheDiagonal) {
  Rng     rng(500 + GetParam());
  Profile prof;
  auto    gc = random_category(rng, prof, "C");
  for (std::size_t n : {2u, 3u}) {
    auto       F = random_functor(rng, gc.cat, {0, n}, prof);
    SetFunctor D = precompose(F.functor(), diagonal_n(F, n));
    EXPECT_EQ(end_pq(F).carrier.carrier.size(), oracle::limit_size(D));
    EXPECT_EQ(coend_pq(F).carrier.carrier.size(), oracle::colimit_size(D));
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, Degenerate, ::testing::Range(0, 25));

TEST(Fubini, ConstantOnArrowTimesDiscrete) {
  auto a = walking_arrow();
  auto b = discrete("B", {"p", "q"});
  auto D = constant_functor(fubini_domain(a, {1, 0}, b, {0, 1}), {0, 1}, FinSet::range(2));
  auto r = fubini_check(a, {1, 0}, b, {0, 1}, D.functor());
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.joint_end, 4u);
  EXPECT_EQ(r.a_outer_end, 4u);
  EXPECT_EQ(r.b_outer_end, 4u);
  EXPECT_EQ(r.joint_coend, 4u);
}

class FubiniRandom : public ::testing::TestWithParam<int> {};

TEST_P(FubiniRandom, ThreeExpressionsAgree) {
  Rng     rng(GetParam());
  Profile prof;
  prof.max_objects   = 3;
  prof.max_morphisms = 6;
  prof.max_arity     = 2;
  auto a  = random_category(rng, prof, "A").cat;
  auto b  = random_category(rng, prof, "B").cat;
  auto sa = random_sig(rng, prof);
  auto sb = random_sig(rng, prof);
  if (sa.arity() + sb.arity() > 3) {
    sb = {sb.p > 0 ? 1u : 0u, sb.p > 0 ? 0u : 1u};
  }
  auto dom = fubini_domain(a, sa, b, sb);
  auto D   = random_functor(rng, dom, {0, 1}, prof);
  auto r   = fubini_check(a, sa, b, sb, D.functor());
  EXPECT_TRUE(r.ok) << (r.failures.empty() ? "" : r.failures[0]);
  EXPECT_EQ(r.joint_end, r.a_outer_end);
  EXPECT_EQ(r.joint_end, r.b_outer_end);
  EXPECT_EQ(r.joint_coend, r.a_outer_coend);
  EXPECT_EQ(r.joint_coend, r.b_outer_coend);
  auto J = fubini_joint(a, sa, b, sb, D.functor());
  EXPECT_EQ(end_pq(J).carrier.carrier.size(), r.joint_end);
}

INSTANTIATE_TEST_SUITE_P(Seeds, FubiniRandom, ::testing::Range(0, 20));

TEST(Arity, SplittingHomTimesHomOverZ3) {
  // D(A1,A2 ; B1,B2) = C(A1,B1) x C(A2,B2).  Over C x C the end splits as
  // end(hom)^2; over C itself the two copies are tied together.
  auto c = walking_arrow();
  auto H = hom_functor(c);
  auto D = SetFunctorPQ::lazy(
      c, {2, 2},
      [H](Tuple const& t) {
        auto const& x = H.fiber(Tuple{t[0], t[2]});
        auto const& y = H.fiber(Tuple{t[1], t[3]});
        std::vector<std::string> l;
        for (auto const& u : x.labels()) {
          for (auto const& v : y.labels()) {
            l.push_back(u + "," + v);
          }
        }
        return FinSet(l);
      },
      [H, c](Tuple const& m) {
        auto const& f = H.act(Tuple{m[0], m[2]});
        auto const& g = H.act(Tuple{m[1], m[3]});
        std::vector<std::size_t> t;
        for (std::size_t u = 0; u < f.dom(); ++u) {
          for (std::size_t v = 0; v < g.dom(); ++v) {
            t.push_back(f(u) * g.cod() + g(v));
          }
        }
        return FinFn(f.cod() * g.cod(), t);
      });
  EXPECT_TRUE(check_functor_pq(D).empty());
  auto r = arity_comparison(D, {1, 1});
  EXPECT_EQ(r.single, end_pq(D).carrier.carrier.size());
  EXPECT_EQ(r.joint, 1u);
}
