#ifndef HACE_SETOPS_HPP_
#define HACE_SETOPS_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "hace/finset.hpp"
#include "hace/functor.hpp"

namespace hace {

// A limit-like carrier: admitted families with their projections.
struct SubResult {
  FinSet             carrier;
  std::vector<FinFn> legs;  // legs[j] : carrier -> D(j)
};

// A colimit-like carrier: canonical classes with the quotient legs.
struct QuotResult {
  FinSet             carrier;
  std::vector<FinFn> legs;  // legs[j] : D(j) -> carrier
};

// A diagram in Set presented by its generating arrows; composites are not
// needed for (co)limits.
struct Diagram {
  struct Arrow {
    std::size_t src;
    std::size_t tgt;
    FinFn       fn;
  };
  std::vector<std::string> names;
  std::vector<FinSet>      sets;
  std::vector<Arrow>       arrows;
};

// Non-identity arrows of a Set-valued functor.
Diagram diagram_of(SetFunctor const& D);

SubResult  equalizer(FinSet const& dom, FinFn const& f, FinFn const& g);
QuotResult coequalizer(FinSet const& cod, FinFn const& f, FinFn const& g);

// Families labelled "{j:x, k:y}"; classes labelled "⟦j:x⟧" by least member.
SubResult  limit(Diagram const& d);
QuotResult colimit(Diagram const& d);

// lim^W D = Nat(W, D); W and D share a domain.
SubResult weighted_limit(SetFunctor const& W, SetFunctor const& D);
// colim^W D for W on J^op (same morphism indices) and D on J: the quotient
// of the coproduct of W(j) x D(j) under (i, W(u)w, d) ~ (j, w, D(u)d).
QuotResult weighted_colimit(SetFunctor const& W, SetFunctor const& D);

// All functions X -> Y, labelled "{x->y, ...}", first element slowest.
FinSet      hom_set(FinSet const& x, FinSet const& y);
FinFn       function_at(std::size_t index, std::size_t nx, std::size_t ny);
std::size_t index_of_function(FinFn const& f);
FinSet      copower(FinSet const& s, FinSet const& x);
FinSet      power(FinSet const& s, FinSet const& x);

// Constraint h1(v1) == h2(v2) between two variables of a family search.
struct EqConstraint {
  std::size_t v1;
  FinFn       h1;
  std::size_t v2;
  FinFn       h2;
};

// Every assignment of variables (values below domain sizes) meeting all
// constraints, in lexicographic order.  Throws SizeCapExceeded past the cap.
std::vector<std::vector<std::size_t>>
enumerate_families(std::vector<std::size_t> const&  domain_sizes,
                   std::vector<EqConstraint> const& constraints);

// Label "{name:label, ...}" of a family.
std::string family_label(std::vector<std::string> const& names,
                         std::vector<std::string> const& labels);

// Checks cone/cocone laws of a result against its diagram.
bool legs_form_cone(Diagram const& d, SubResult const& r);
bool legs_form_cocone(Diagram const& d, QuotResult const& r);

}  // namespace hace

#endif  // HACE_SETOPS_HPP_
