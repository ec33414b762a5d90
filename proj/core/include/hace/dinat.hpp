#ifndef HACE_DINAT_HPP_
#define HACE_DINAT_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "hace/functor.hpp"

namespace hace {

// alpha : F =>> G with F of type [p/q] and G of type [q/p]; one component
// F(A..;A..) -> G(A..;A..) per base object A.
struct DinatPQ {
  SetFunctorPQ       F;
  SetFunctorPQ       G;
  std::vector<FinFn> components;
};

struct Verdict {
  bool                     ok = true;
  std::vector<std::string> violations;
};

Verdict check_dinatural(DinatPQ const& alpha);

// All dinatural families, components in object order, tables lexicographic.
std::vector<DinatPQ> enumerate_dinat(SetFunctorPQ const& F,
                                     SetFunctorPQ const& G);
std::size_t          count_dinat(SetFunctorPQ const& F, SetFunctorPQ const& G);

// theta . alpha for alpha : F' => F natural, and beta . theta for
// beta : G => G' natural.
DinatPQ compose_with_nat(DinatPQ const& theta, NatTransf const& alpha,
                         SetFunctorPQ const& F_prime);
DinatPQ compose_nat_with(NatTransf const& beta, DinatPQ const& theta,
                         SetFunctorPQ const& G_prime);

// Only defined for p == q; throws IdentityUnavailable otherwise.
DinatPQ identity_dinat(SetFunctorPQ const& F);

// A wedge X -> D has legs X -> D(A..;A..); a cowedge D -> X has legs the
// other way.
struct WedgePQ {
  FinSet             apex;
  std::vector<FinFn> legs;
};

struct CowedgePQ {
  FinSet             apex;
  std::vector<FinFn> legs;
};

Verdict check_wedge(WedgePQ const& w, SetFunctorPQ const& D);
Verdict check_cowedge(CowedgePQ const& w, SetFunctorPQ const& D);

std::vector<WedgePQ>   enumerate_wedges(FinSet const& x, SetFunctorPQ const& D);
std::vector<CowedgePQ> enumerate_cowedges(SetFunctorPQ const& D,
                                          FinSet const&       x);

// theta . h for h : X' -> X, and alpha . theta for alpha : D => D'.
WedgePQ   precompose(WedgePQ const& w, FinFn const& h, FinSet const& x_prime);
WedgePQ   postcompose(NatTransf const& alpha, WedgePQ const& w,
                      SetFunctorPQ const& D);
CowedgePQ postcompose(CowedgePQ const& w, FinFn const& h,
                      FinSet const& x_prime);

// The composite morphism tuples of the hexagon for f : A -> B.
// lower(f) = (f..;id_A..) and upper(f) = (id_B..;f..) for a [p/q] functor.
std::size_t hex_lower(SetFunctorPQ const& F, std::size_t f);
std::size_t hex_upper(SetFunctorPQ const& F, std::size_t f);

}  // namespace hace

#endif  // HACE_DINAT_HPP_
