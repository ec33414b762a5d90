#ifndef HACE_APPS_HPP_
#define HACE_APPS_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "hace/ends.hpp"
#include "hace/functor.hpp"
#include "hace/kusarigama.hpp"

namespace hace {

// A factor of an integrand: F reads the integrand slots listed in `slots`,
// F's slot i from slots[i].
struct Slotted {
  SetFunctorPQ             F;
  std::vector<std::size_t> slots;
};

// Pointwise product of factors.  Each factor slot must have the variance of
// the integrand slot it reads.
SetFunctorPQ product_integrand(CatPtr base, VarianceSig sig,
                               std::vector<Slotted> factors);
// Set(prod dom, prod cod).  Domain factors read their slots with the
// opposite variance.
SetFunctorPQ function_integrand(CatPtr base, VarianceSig sig,
                                std::vector<Slotted> dom,
                                std::vector<Slotted> cod);

// Weighted co/ends of a (1,1) functor D by a (1,1) weight W, as the
// (2,2)-end of Set(W, D) and the (2,2)-coend of W x D.
SetFunctorPQ weighted_end_integrand(SetFunctorPQ const& W, SetFunctorPQ const& D);
SetFunctorPQ weighted_coend_integrand(SetFunctorPQ const& W,
                                      SetFunctorPQ const& D);
EndPQ   weighted_end(SetFunctorPQ const& W, SetFunctorPQ const& D);
CoendPQ weighted_coend(SetFunctorPQ const& W, SetFunctorPQ const& D);

// n weights: the (n+1,n+1)-end of Set(W_1 x .. x W_n, D), and the coend of
// W_1 x .. x W_n x D.
SetFunctorPQ weighted_end_integrand(std::vector<SetFunctorPQ> const& Ws,
                                    SetFunctorPQ const&              D);
SetFunctorPQ weighted_coend_integrand(std::vector<SetFunctorPQ> const& Ws,
                                      SetFunctorPQ const&              D);
EndPQ   weighted_end(std::vector<SetFunctorPQ> const& Ws, SetFunctorPQ const& D);
CoendPQ weighted_coend(std::vector<SetFunctorPQ> const& Ws,
                       SetFunctorPQ const&              D);

struct CountCheck {
  bool                     ok = true;
  std::vector<std::size_t> counts;
  std::vector<std::string> failures;
};

// |weighted end| = |DiNat(W, Set(X, D))| and 2^|weighted coend| =
// |DiNat(W, Set(D, 2))|, for X of sizes 1 and 2.
CountCheck weighted_end_vs_dinat(SetFunctorPQ const& W, SetFunctorPQ const& D);
CountCheck weighted_coend_vs_dinat(SetFunctorPQ const& W, SetFunctorPQ const& D);
// The doubly weighted end against the W1-weighted end of Set(W2, D), by an
// explicit currying bijection.
CountCheck doubly_weighted_check(SetFunctorPQ const& W1, SetFunctorPQ const& W2,
                                 SetFunctorPQ const& D);

enum class KanSide { left, right };

// Lan^W_K F (left) and Ran^W_K F (right) for F : C -> Set, K : C -> B and a
// (1,1) weight W on C, as pointwise (2,2)-co/ends.
SetFunctor weighted_kan(SetFunctor const& F, Functor const& K,
                        SetFunctorPQ const& W, KanSide side);
// Nat(Lan^W F, G) against the W-weighted end of Set(F a, G K b); dually
// Nat(G, Ran^W F) against that of Set(G K a, F b).
CountCheck weighted_kan_check(SetFunctor const& F, Functor const& K,
                              SetFunctorPQ const& W, SetFunctor const& G,
                              KanSide side);

// DiLan_K F and DiRan_K F for F of sig (1,1) on C and K : C^op x C -> B.
// The left integrand at d is B(K(b,a), d) x F(z,w) over (a,z ; b,w).
SetFunctor diagonal_kan(SetFunctorPQ const& F, Functor const& K, KanSide side);
// Nat(DiLan F, G) against DiNat(F, G K), or Nat(G, DiRan F) against
// DiNat(G K, F), by composing with the universal dinatural; every composite
// is checked and the map must be bijective.
CountCheck diagonal_kan_check(SetFunctorPQ const& F, Functor const& K,
                              SetFunctor const& G, KanSide side);
// Fiber sizes of the diagonal Kan extension against the hom-weighted
// co/end of B(K(B,A), d) x F(A,B) (resp. its dual), object by object.
CountCheck diagonal_vs_hom_weighted(SetFunctorPQ const& F, Functor const& K,
                                    KanSide side);

// The (4,4) forms with a (2,2) weight W.
SetFunctor weighted_diagonal_kan(SetFunctorPQ const& F, Functor const& K,
                                 SetFunctorPQ const& W, KanSide side);
// The left integrand at d, for oracles.
SetFunctorPQ weighted_diagonal_integrand(SetFunctorPQ const& F, Functor const& K,
                                         SetFunctorPQ const& W, std::size_t d,
                                         KanSide side);

// A strict monoidal finite category.
struct MonoidalFinCat {
  CatPtr      base;
  Functor     tensor;  // base x base -> base
  std::size_t unit = 0;

  std::size_t tensor_objects(std::vector<std::size_t> const& xs) const;
  std::size_t tensor_morphisms(std::vector<std::size_t> const& fs) const;
};

// Validates the tensor as a functor and the strict unit and associativity
// laws on objects and morphisms; throws NotStrictMonoidal.
MonoidalFinCat make_monoidal(CatPtr base, Functor tensor, std::size_t unit);
// One object, one morphism.
MonoidalFinCat trivial_monoidal();
// A commutative monoid with tensor given by multiplication.
MonoidalFinCat monoid_monoidal(CatPtr monoid);

// The (n,n)-coend of F_1(A_1) x .. x F_n(A_n) x C(X, B_1 .. B_n) for
// presheaves of sig (1,0); the result has sig (1,0).
SetFunctorPQ day_integrand(MonoidalFinCat const& M,
                           std::vector<SetFunctorPQ> const& Fs, std::size_t x);
SetFunctorPQ day_convolution(MonoidalFinCat const&            M,
                             std::vector<SetFunctorPQ> const& Fs);
// The classical binary convolution, the coend over C x C of
// F(A) x G(B) x C(X, A B).
SetFunctorPQ day_classical(MonoidalFinCat const& M, SetFunctorPQ const& F,
                           SetFunctorPQ const& G);
// n = 1: the class of (A, e, g : X -> A) goes to F(g)(e); the map must be
// well defined and bijective onto F(X) at every X.
CountCheck day_coyoneda_check(MonoidalFinCat const& M, SetFunctorPQ const& F);

// C(A1 x A2, B) of sig (2,1) on a thin category with binary products, the
// product being the meet.  Throws NotALattice for a pair with no meet.
SetFunctorPQ product_hom(CatPtr c);

}  // namespace hace

#endif  // HACE_APPS_HPP_
