// Seeded property checks for the laws each module promises.

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "hace/apps.hpp"
#include "hace/catspec.hpp"
#include "hace/dinat.hpp"
#include "hace/ends.hpp"
#include "hace/generate.hpp"
#include "hace/kusarigama.hpp"
#include "hace/setops.hpp"
#include "oracle.hpp"

using namespace hace;

namespace {

// A one-object table with n elements, unit 0 and a random product.
RawCategory random_magma(Rng& rng, std::size_t n) {
  RawCategory r;
  r.name    = "m";
  r.objects = {"*"};
  for (std::size_t i = 0; i < n; ++i) {
    r.morphisms.push_back({"m" + std::to_string(i), "*", "*"});
  }
  r.identities = {{"*", "m0"}};
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t f = 0; f < n; ++f) {
      std::size_t h = g == 0 ? f : f == 0 ? g : draw(rng, n);
      r.composition.push_back({"m" + std::to_string(g), "m" + std::to_string(f),
                               "m" + std::to_string(h)});
    }
  }
  return r;
}

// A generated category's tables with one composite overwritten at random.
RawCategory perturbed(Rng& rng, FinCat const& c) {
  RawCategory r;
  r.name = "p";
  for (std::size_t a = 0; a < c.num_objects(); ++a) {
    r.objects.push_back(c.object_name(a));
    r.identities.emplace_back(c.object_name(a), c.morphism_name(c.identity(a)));
  }
  for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
    r.morphisms.push_back({c.morphism_name(f), c.object_name(c.src(f)),
                           c.object_name(c.tgt(f))});
  }
  for (std::size_t g = 0; g < c.num_morphisms(); ++g) {
    for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
      std::size_t h = c.compose(g, f);
      if (h != FinCat::npos) {
        r.composition.push_back({c.morphism_name(g), c.morphism_name(f), c.morphism_name(h)});
      }
    }
  }
  if (!r.composition.empty() && draw(rng, 2) == 0) {
    auto& e = r.composition[draw(rng, r.composition.size())];
    e.h     = c.morphism_name(draw(rng, c.num_morphisms()));
  }
  return r;
}

// The raw tables read directly, for the independent checker.
oracle::Tables raw_tables(RawCategory const& r) {
  auto idx = [](auto const& names, std::string const& s) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == s) {
        return i;
      }
    }
    return FinCat::npos;
  };
  std::vector<std::string> mor;
  for (auto const& m : r.morphisms) {
    mor.push_back(m.name);
  }
  oracle::Tables t;
  t.objects = r.objects.size();
  for (auto const& m : r.morphisms) {
    t.src.push_back(idx(r.objects, m.src));
    t.tgt.push_back(idx(r.objects, m.tgt));
  }
  t.id.assign(t.objects, FinCat::npos);
  for (auto const& [o, m] : r.identities) {
    t.id[idx(r.objects, o)] = idx(mor, m);
  }
  std::size_t const n = mor.size();
  t.comp.assign(n * n, FinCat::npos);
  for (auto const& c : r.composition) {
    t.comp[idx(mor, c.g) * n + idx(mor, c.f)] = idx(mor, c.h);
  }
  return t;
}

bool same_legs(std::vector<FinFn> const& a, std::vector<FinFn> const& b) {
  return a == b;
}

}  // namespace

class Props : public ::testing::TestWithParam<int> {};

TEST_P(Props, CategoryCheckersAgree) {
  Rng  rng(GetParam());
  auto r = GetParam() % 2 == 0
               ? random_magma(rng, 2 + draw(rng, 2))
               : perturbed(rng, *random_category(rng, Profile{}, "C").cat);
  EXPECT_EQ(check_category(r).empty(), oracle::is_category(raw_tables(r)));
}

TEST_P(Props, PowerHasAllMorphismTuples) {
  Rng     rng(GetParam());
  Profile prof;
  auto    c = random_category(rng, prof, "C").cat;
  auto    s = random_sig(rng, prof);
  std::size_t expect = 1;
  for (std::size_t i = 0; i < s.arity(); ++i) {
    expect *= c->num_morphisms();
  }
  EXPECT_EQ(power_pq(c, s)->num_morphisms(), expect);
}

TEST_P(Props, MuteSlotsRestrictAway) {
  Profile prof;
  prof.max_arity = 2;
  auto in        = fixtures::instance(GetParam(), prof);
  Rng  rng(GetParam());
  std::size_t r = draw(rng, 2), s = 1 - r;
  auto a = restrict_diagonal(in.F);
  auto b = restrict_diagonal(mute_extend(in.F, r, s));
  for (std::size_t t = 0; t < a.domain()->num_objects(); ++t) {
    EXPECT_EQ(a.fiber(t), b.fiber(t));
  }
  for (std::size_t m = 0; m < a.domain()->num_morphisms(); ++m) {
    EXPECT_EQ(a.act(m), b.act(m));
  }
}

TEST_P(Props, GeneratedFunctorsAreFunctors) {
  auto in = fixtures::instance(GetParam());
  EXPECT_TRUE(check_functor_pq(in.F).empty());
  EXPECT_TRUE(check_functor_pq(in.G).empty());
}

TEST_P(Props, CoequalizerClassesAreLeastRepresentatives) {
  Rng         rng(GetParam());
  std::size_t n = 1 + draw(rng, 6), k = draw(rng, 5);
  std::vector<std::size_t> ft, gt;
  for (std::size_t i = 0; i < k; ++i) {
    ft.push_back(draw(rng, n));
    gt.push_back(draw(rng, n));
  }
  auto q   = coequalizer(FinSet::range(n), FinFn(n, ft), FinFn(n, gt));
  auto cls = q.legs[0];
  EXPECT_TRUE(cls.is_surjective());
  for (std::size_t i = 0; i < k; ++i) {
    EXPECT_EQ(cls(ft[i]), cls(gt[i]));
  }
  // class c's least member precedes class c+1's
  std::size_t seen = 0;
  for (std::size_t x = 0; x < n; ++x) {
    ASSERT_LE(cls(x), seen);
    if (cls(x) == seen) {
      ++seen;
    }
  }
}

TEST_P(Props, RepresentableWeightIsYoneda) {
  Rng     rng(GetParam());
  Profile prof;
  prof.max_fiber = 2;
  auto c         = random_category(rng, prof, "C").cat;
  auto D         = random_functor(rng, c, {0, 1}, prof).functor();
  for (std::size_t a = 0; a < c->num_objects(); ++a) {
    auto W = covariant_representable(c, a).functor();
    EXPECT_EQ(weighted_limit(W, D).carrier.size(), D.fiber(a).size());
  }
}

TEST_P(Props, EnumeratedDinaturalsPassTheHexagon) {
  Profile prof;
  prof.max_fiber = 2;
  auto in        = fixtures::instance(GetParam(), prof);
  auto all       = enumerate_dinat(in.F, in.G);
  EXPECT_EQ(all.size(), oracle::count_dinat(in.F, in.G));
  for (auto const& a : all) {
    EXPECT_TRUE(check_dinatural(a).ok);
  }
}

TEST_P(Props, WedgePrecompositionIsFunctorial) {
  Profile prof;
  prof.max_fiber = 2;
  auto in        = fixtures::instance(GetParam(), prof);
  Rng  rng(GetParam());
  auto X  = FinSet::range(2);
  auto X1 = FinSet::range(3);
  auto X2 = FinSet::range(2);
  FinFn h(2, {draw(rng, 2), draw(rng, 2), draw(rng, 2)});
  FinFn g(3, {draw(rng, 3), draw(rng, 3)});
  for (auto const& w : enumerate_wedges(X, in.F)) {
    auto a = precompose(precompose(w, h, X1), g, X2);
    auto b = precompose(w, compose(h, g), X2);
    EXPECT_TRUE(same_legs(a.legs, b.legs));
    EXPECT_TRUE(check_wedge(a, in.F).ok);
  }
}

TEST_P(Props, NaturalPostcompositionKeepsWedges) {
  Profile prof;
  prof.max_fiber = 2;
  prof.max_arity = 2;
  auto in        = fixtures::instance(GetParam(), prof);
  Rng  rng(GetParam());
  auto D2   = random_functor(rng, in.c, in.F.sig(), prof);
  auto nats = enumerate_nat(in.F.functor(), D2.functor());
  auto ws   = enumerate_wedges(FinSet::range(1), in.F);
  for (std::size_t i = 0; i < nats.size() && i < 4; ++i) {
    for (auto const& w : ws) {
      EXPECT_TRUE(check_wedge(postcompose(nats[i], w, D2), D2).ok);
    }
  }
}

TEST_P(Props, EndElementsAreWedgesFromThePoint) {
  auto in = fixtures::instance(GetParam());
  auto e  = end_pq(in.F);
  for (auto const& fam : e.families()) {
    WedgePQ w{FinSet::range(1), {}};
    for (std::size_t a = 0; a < fam.size(); ++a) {
      w.legs.push_back(FinFn(in.F.fiber(in.F.diag(a)).size(), {fam[a]}));
    }
    EXPECT_TRUE(check_wedge(w, in.F).ok);
  }
}

TEST_P(Props, CoendClassesAreSaturated) {
  auto        in = fixtures::instance(GetParam());
  auto const& D  = in.F;
  auto        q  = coend_pq(D);
  auto const& c  = *D.base();
  for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
    std::size_t a = c.src(f), b = c.tgt(f);
    auto const& lo = D.act(oracle::mor_tuple(D, f, c.identity(a)));
    auto const& up = D.act(oracle::mor_tuple(D, c.identity(b), f));
    for (std::size_t y = 0; y < lo.dom(); ++y) {
      EXPECT_EQ(q.carrier.legs[a](lo(y)), q.carrier.legs[b](up(y)));
    }
  }
}

TEST_P(Props, WeightAdjunctionCounts) {
  Profile prof;
  prof.max_fiber = 2;
  prof.max_arity = 2;
  auto in        = fixtures::instance(GetParam(), prof);
  for (std::size_t n : {0u, 1u, 2u}) {
    auto r = weight_adjunction_count(in.F, FinSet::range(n));
    EXPECT_EQ(r.nat_weight, r.set_maps);
    if (r.hom_pi) {
      EXPECT_EQ(r.nat_hom_pi, r.set_maps);
    }
  }
}

TEST_P(Props, UniversalDinaturalsAreDinatural) {
  Profile prof;
  prof.max_fiber = 2;
  prof.max_arity = 2;
  auto in        = fixtures::instance(GetParam(), prof);
  EXPECT_TRUE(check_dinatural(cokusarigama(in.F).unit()).ok);
  EXPECT_TRUE(check_dinatural(kusarigama(in.G).counit()).ok);
}

TEST_P(Props, PointWeightedEndIsTheEnd) {
  Rng     rng(GetParam());
  Profile prof;
  prof.max_objects   = 3;
  prof.max_morphisms = 6;
  auto c             = random_category(rng, prof, "C").cat;
  auto D             = random_functor(rng, c, {1, 1}, prof);
  auto P             = point_functor(c, {1, 1});
  // Set(pt, X) is X, so the families coincide component by component.
  EXPECT_EQ(weighted_end(P, D).families(), end_pq(D).families());
}

TEST_P(Props, DayConvolutionIsAPresheaf) {
  Rng     rng(GetParam());
  Profile prof;
  prof.max_fiber = 2;
  auto M         = monoid_monoidal(fixtures::cyclic(2 + GetParam() % 2));
  auto F         = random_functor(rng, M.base, {1, 0}, prof);
  auto G         = random_functor(rng, M.base, {1, 0}, prof);
  EXPECT_TRUE(check_functor_pq(day_convolution(M, {F, G})).empty());
}

TEST_P(Props, PrintParseKeepsReports) {
  Profile prof;
  prof.max_arity = 2;
  auto spec      = generate(1000 + GetParam(), prof);
  EXPECT_EQ(parse_catspec(print_catspec(spec)), spec);
}

INSTANTIATE_TEST_SUITE_P(Seeds, Props, ::testing::Range(0, 100));
