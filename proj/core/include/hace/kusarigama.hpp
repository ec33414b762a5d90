#ifndef HACE_KUSARIGAMA_HPP_
#define HACE_KUSARIGAMA_HPP_

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "hace/dinat.hpp"
#include "hace/ends.hpp"
#include "hace/functor.hpp"

namespace hace {

// J(F) for F of sig (p,q), a functor of sig (q,p).  At T = (X.. ; Y..) it is
// the coend over A of C(A,Y_i) x C(X_j,A) x F(A..;A..), computed per tuple;
// elements are classes [A ; h_1..h_p ; k_1..k_q ; e].
class CokusarigamaResult {
 public:
  explicit CokusarigamaResult(SetFunctorPQ F);

  SetFunctorPQ const& source() const noexcept {
    return _source;
  }
  SetFunctorPQ const& functor() const noexcept {
    return _functor;
  }
  // eta : F =>> J(F), e |-> [A ; id.. ; id.. ; e]
  DinatPQ const& unit() const noexcept {
    return _unit;
  }
  // The integrand at T, of sig (p,q); elements are (h.., k.., e).
  SetFunctorPQ const& integrand(Tuple const& t) const;
  CoendPQ const&      coend_at(Tuple const& t) const;
  // `legs` lists h_1..h_p (A -> Y_i) then k_1..k_q (X_j -> A).
  std::size_t class_of(Tuple const& t, std::size_t a, Tuple const& legs,
                       std::size_t e) const;
  // Least representative (A, legs, e) of a class.
  struct Rep {
    std::size_t a;
    Tuple       legs;
    std::size_t e;
  };
  Rep rep_of(Tuple const& t, std::size_t cls) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> _impl;
  SetFunctorPQ          _source;
  SetFunctorPQ          _functor;
  DinatPQ               _unit;
};

// Gamma(G) for G of sig (q,p), a functor of sig (p,q).  At T = (A.. ; B..)
// it is the end over X of Set(C(B_j,X) x C(X,A_i), G(X..;X..)) computed per
// tuple; elements are families of such functions.
class KusarigamaResult {
 public:
  explicit KusarigamaResult(SetFunctorPQ G);

  SetFunctorPQ const& source() const noexcept {
    return _source;
  }
  SetFunctorPQ const& functor() const noexcept {
    return _functor;
  }
  // eps : Gamma(G) =>> G, phi |-> phi_A(id.., id..)
  DinatPQ const& counit() const noexcept {
    return _counit;
  }
  // The integrand at T, of sig (q,p).  Fibers are function sets whose domain
  // is the product of C(B_j, X_j) then C(Y_i, A_i).
  SetFunctorPQ const& integrand(Tuple const& t) const;
  EndPQ const&        end_at(Tuple const& t) const;
  // phi_X evaluated at (k_1..k_q ; h_1..h_p).
  std::size_t evaluate(Tuple const& t, std::size_t family, std::size_t x,
                       Tuple const& legs) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> _impl;
  SetFunctorPQ          _source;
  SetFunctorPQ          _functor;
  DinatPQ               _counit;
};

CokusarigamaResult cokusarigama(SetFunctorPQ const& F);
KusarigamaResult   kusarigama(SetFunctorPQ const& G);

struct LawReport {
  bool                     ok = true;
  std::vector<std::size_t> counts;
  std::vector<std::string> failures;
};

// Unique factorisation of every dinatural F =>> G through eta and through
// eps; counts are |Nat(J F, G)|, |DiNat(F, G)|, |Nat(F, Gamma G)|.
LawReport factorization_check(SetFunctorPQ const& F, SetFunctorPQ const& G);

enum class KanDirection { left, right };

// Pointwise Kan extension of F : A -> Set along K : A -> B.
SetFunctor kan_extension(SetFunctor const& F, Functor const& K,
                         KanDirection dir);

// |Nat(Lan_K F, G)| = |Nat(F, G K)| and |Nat(G K, F)| = |Nat(G, Ran_K F)|.
LawReport kan_adjunction_check(SetFunctor const& F, Functor const& K,
                               SetFunctor const& G);

// PK3: Set(J(F)(B..;A..), S) against Gamma(Set(F(-), S))(A..;B..).
LawReport check_pk3(SetFunctorPQ const& F, FinSet const& S);
// PK4: end F against lim Gamma(F) and coend F against colim J(F).
LawReport check_pk4(SetFunctorPQ const& F);
// PK5: J(F) against Lan along Delta_{q,p} of J(restrict_diagonal F).
LawReport check_pk5(SetFunctorPQ const& F);

// J(pt) against hom_Pi fiberwise, by the composite-grid map.  Meaningful for
// p, q >= 1 with min(p,q) = 1.
LawReport check_j_pt_hom_pi(CatPtr const& c, VarianceSig sig);
// The (2,1) case in the form (X ; Y1, Y2) -> C(X,Y1) x C(X,Y2),
// [A ; h1, h2 ; k] |-> (h1 k, h2 k).
LawReport check_sigma_21(CatPtr const& c);

// J(D)(A;B) as a colimit over the elements of tw_j_functor(C, A, B), and
// Gamma(D)(A;B) as a limit over those of tw_j_functor(C, B, A).
struct TwJComparison {
  bool                     ok = true;
  std::size_t              j_fiber      = 0;
  std::size_t              colimit_size = 0;
  std::size_t              gamma_fiber  = 0;
  std::size_t              limit_size   = 0;
  std::vector<std::string> failures;
};
TwJComparison cokusarigama_via_tw_j(SetFunctorPQ const& D, std::size_t a,
                                    std::size_t b);

// Lattice helpers and checks.  Throws NotALattice when C is not a finite
// lattice poset.
struct Lattice {
  CatPtr                   c;
  std::size_t              top;
  std::size_t              bottom;
  std::vector<std::size_t> join;  // a * n + b
  std::vector<std::size_t> meet;
  bool        le(std::size_t a, std::size_t b) const;
  std::size_t join_of(std::vector<std::size_t> const& xs) const;
  std::size_t meet_of(std::vector<std::size_t> const& xs) const;
};
Lattice as_lattice(CatPtr const& c);

// J(E) for a constant E of sig (p,q) has fiber C(join X, meet Y) x E, and
// Gamma(E) of sig (q,p) has fiber Set(C(join B, meet A), E).
LawReport check_constant_kusarigama(CatPtr const& c, VarianceSig sig,
                                    FinSet const& E);
// J and Gamma of the identity of C^(p,q), computed as joins and meets of
// the weighted copowers and powers, against the closed forms.
LawReport check_identity_kusarigama(CatPtr const& c, VarianceSig sig);

}  // namespace hace

#endif  // HACE_KUSARIGAMA_HPP_
