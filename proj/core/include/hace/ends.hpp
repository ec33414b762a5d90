#ifndef HACE_ENDS_HPP_
#define HACE_ENDS_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hace/dinat.hpp"
#include "hace/functor.hpp"
#include "hace/setops.hpp"

namespace hace {

// equalizer: family search over the diagonal fibers.
// restriction: ordinary end of the diagonal restriction, by product filter.
// twisted: limit over the category of elements of the factorisation weight.
// weighted: natural transformations out of the weight J(pt).
enum class EndMethod { equalizer, restriction, twisted, weighted };

std::string              to_string(EndMethod m);
std::optional<EndMethod> parse_end_method(std::string_view s);
std::vector<EndMethod>   all_end_methods();

// legs[A] : carrier -> D(A..;A..), one per base object.
struct EndPQ {
  SubResult carrier;

  WedgePQ            wedge() const;
  std::vector<Tuple> families() const;
};

// legs[A] : D(A..;A..) -> carrier.
struct CoendPQ {
  QuotResult carrier;

  CowedgePQ cowedge() const;
};

EndPQ   end_pq(SetFunctorPQ const& D, EndMethod m = EndMethod::equalizer);
CoendPQ coend_pq(SetFunctorPQ const& D, EndMethod m = EndMethod::equalizer);

// Canonical carriers: families are sorted and labelled by component; a
// partition of the coproduct of diagonal fibers is relabelled by least
// members.
EndPQ   end_from_families(SetFunctorPQ const& D, std::vector<Tuple> families);
CoendPQ coend_from_partition(SetFunctorPQ const&             D,
                             std::vector<std::size_t> const& class_of);

// Index of a family in an end carrier, if present.
std::optional<std::size_t> find_family(EndPQ const& e, Tuple const& family);

struct UniversalReport {
  bool                     ok             = true;
  std::size_t              apexes         = 0;
  std::size_t              wedges         = 0;
  std::size_t              factorizations = 0;
  std::vector<std::string> failures;
};

// Apexes of sizes 0..max_apex; every co/wedge must factor exactly once.
UniversalReport verify_universal_property(EndPQ const& e, SetFunctorPQ const& D,
                                          std::size_t max_apex = 3);
UniversalReport verify_universal_property(CoendPQ const&      e,
                                          SetFunctorPQ const& D,
                                          std::size_t         max_apex = 3);

// D on A^(p,q) x B^(r,s) is presented on the product category with factors
// A^op (p times), A (q times), B^op (r times), B (s times).
CatPtr fubini_domain(CatPtr const& a, VarianceSig sa, CatPtr const& b,
                     VarianceSig sb);
// The same D as a (p+r, q+s) functor on A x B.
SetFunctorPQ fubini_joint(CatPtr const& a, VarianceSig sa, CatPtr const& b,
                          VarianceSig sb, SetFunctor const& D);

struct FubiniReport {
  bool                     ok            = true;
  std::size_t              joint_end     = 0;
  std::size_t              a_outer_end   = 0;
  std::size_t              b_outer_end   = 0;
  std::size_t              joint_coend   = 0;
  std::size_t              a_outer_coend = 0;
  std::size_t              b_outer_coend = 0;
  std::vector<std::string> failures;
};

FubiniReport fubini_check(CatPtr const& a, VarianceSig sa, CatPtr const& b,
                          VarianceSig sb, SetFunctor const& D);

// For D of sig (p+r, q+s) on C, compares the joint end over C x C of D with
// its variables split as (p,q) + (r,s) against the end over C itself.
struct ArityReport {
  std::size_t joint  = 0;
  std::size_t single = 0;
};
ArityReport arity_comparison(SetFunctorPQ const& D, VarianceSig first);

// H(A.. ; B..) = Set(F(B..;A..), G(A..;B..)) of sig (q,p), for F of sig
// (p,q) and G of sig (q,p).
SetFunctorPQ dinat_integrand(SetFunctorPQ const& F, SetFunctorPQ const& G);

struct DinatEndReport {
  bool                     ok          = true;
  std::size_t              dinat_count = 0;
  std::size_t              end_count   = 0;
  // DiNat(pt, G) against Nat(weight, G).
  std::size_t              pt_dinat_count  = 0;
  std::size_t              weight_nat      = 0;
  bool                     hom_pi_checked  = false;
  std::size_t              hom_pi_nat      = 0;
  std::vector<std::string> failures;
};

DinatEndReport dinat_as_end(SetFunctorPQ const& F, SetFunctorPQ const& G);

// Bijection Nat(W, G) -> DiNat(pt, G), alpha |-> alpha at the identity grid,
// for W = J(pt) of G's signature; reports the two counts and failures.
struct WeightReport {
  bool                     ok    = true;
  std::size_t              dinat = 0;
  std::size_t              nat   = 0;
  std::vector<std::string> failures;
};
WeightReport pt_dinat_vs_weight(SetFunctorPQ const& G, bool use_hom_pi);

struct PeReport {
  bool                     pe1 = true;
  bool                     pe7 = true;
  bool                     pe8 = true;
  std::vector<std::string> failures;
};

// PE1 runs when alpha : D => D2 is given.  PE7 uses (r,s) mute slots and
// PE8 the sets of sizes 0..2.
PeReport check_pe_laws(SetFunctorPQ const& D, std::size_t r = 1,
                       std::size_t s = 1, NatTransf const* alpha = nullptr,
                       SetFunctorPQ const* D2 = nullptr);

// |Nat(W x S, D)| against |Set(S, end D)| for the factorisation weight W,
// and against hom_Pi when that weight agrees with it.
struct AdjunctionCount {
  std::size_t nat_weight = 0;
  std::size_t nat_hom_pi = 0;
  bool        hom_pi     = false;
  std::size_t set_maps   = 0;
};
AdjunctionCount weight_adjunction_count(SetFunctorPQ const& D,
                                        FinSet const&       S);

// True when hom_Pi of this signature is the factorisation weight.
bool hom_pi_is_weight(VarianceSig sig);

// The tuple of C^(q,p) with the two variance blocks of t exchanged.
Tuple reslot(Tuple const& t, VarianceSig sig);
// A weight W of sig (q,p), seen as a contravariant functor on C^(p,q).
SetFunctor reslot_weight(SetFunctorPQ const& W);

}  // namespace hace

#endif  // HACE_ENDS_HPP_
