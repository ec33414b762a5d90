#ifndef HACE_FUNCTOR_HPP_
#define HACE_FUNCTOR_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hace/fincat.hpp"
#include "hace/finset.hpp"

namespace hace {

// A Set-valued functor on a finite category.  Either backed by full tables,
// or lazy: fibers and actions are computed on first use and cached.  Copies
// share the cache.
class SetFunctor {
 public:
  using FiberFn = std::function<FinSet(std::size_t)>;
  using ActFn   = std::function<FinFn(std::size_t)>;

  SetFunctor() = default;

  static SetFunctor tables(CatPtr              domain,
                           std::vector<FinSet> fibers,
                           std::vector<FinFn>  actions);
  static SetFunctor lazy(CatPtr domain, FiberFn fiber, ActFn act);

  CatPtr const& domain() const;
  FinSet const& fiber(std::size_t a) const;
  FinFn const&  act(std::size_t f) const;
  bool          is_table() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> _impl;
};

// Every functoriality violation, as readable strings.
std::vector<std::string> check_set_functor(SetFunctor const& F);
void                     validate_set_functor(SetFunctor const& F);

// A functor of type [p/q] on C^{(p,q)}: slots 0..p-1 contravariant, then
// q covariant slots.  Object and morphism indices of the domain are tuple
// codes over the base.
class SetFunctorPQ {
 public:
  SetFunctorPQ() = default;
  SetFunctorPQ(CatPtr base, VarianceSig sig, SetFunctor f);

  using TupleFiberFn = std::function<FinSet(Tuple const&)>;
  using TupleActFn   = std::function<FinFn(Tuple const&)>;
  static SetFunctorPQ lazy(CatPtr base, VarianceSig sig, TupleFiberFn fiber,
                           TupleActFn act);

  CatPtr const& base() const noexcept {
    return _base;
  }
  VarianceSig sig() const noexcept {
    return _sig;
  }
  SetFunctor const& functor() const noexcept {
    return _f;
  }
  CatPtr const& domain() const {
    return _f.domain();
  }

  FinSet const& fiber(std::size_t code) const {
    return _f.fiber(code);
  }
  FinSet const& fiber(Tuple const& t) const;
  FinFn const&  act(std::size_t code) const {
    return _f.act(code);
  }
  FinFn const& act(Tuple const& m) const;

  std::size_t obj_code(Tuple const& t) const;
  std::size_t mor_code(Tuple const& m) const;

  // (A,...,A ; B,...,B) and (f,...,f ; g,...,g)
  Tuple       diag_tuple(std::size_t a, std::size_t b) const;
  std::size_t diag(std::size_t a, std::size_t b) const;
  std::size_t diag(std::size_t a) const {
    return diag(a, a);
  }
  std::size_t diag_mor(std::size_t f, std::size_t g) const;

  // Source and target tuples of a morphism tuple, honouring variance.
  Tuple mor_src(Tuple const& m) const;
  Tuple mor_tgt(Tuple const& m) const;

 private:
  CatPtr      _base;
  VarianceSig _sig;
  SetFunctor  _f;
};

std::vector<std::string> check_functor_pq(SetFunctorPQ const& F);
void                     validate_functor_pq(SetFunctorPQ const& F);

// Slot-wise presentation.  `at` is the full source tuple; its entry in
// `slot` is overwritten with the source of the slot action.
struct SlotAction {
  std::size_t slot;
  std::size_t morphism;
  Tuple       at;
  FinFn       fn;
};

// Completes generator actions under composition in each slot, checks
// slot functoriality and interchange, then tabulates every morphism tuple.
SetFunctorPQ functor_from_slots(CatPtr                         base,
                                VarianceSig                    sig,
                                std::vector<FinSet>            fibers,
                                std::vector<SlotAction> const& actions);

SetFunctorPQ constant_functor(CatPtr base, VarianceSig sig, FinSet value);
SetFunctorPQ point_functor(CatPtr base, VarianceSig sig);
// hom_C as a (1,1) functor.
SetFunctorPQ hom_functor(CatPtr base);
// C(a,-) as (0,1) and C(-,a) as (1,0).
SetFunctorPQ covariant_representable(CatPtr base, std::size_t a);
SetFunctorPQ contravariant_representable(CatPtr base, std::size_t a);

// (A,B) |-> F(A,...,A ; B,...,B)
SetFunctorPQ restrict_diagonal(SetFunctorPQ const& F);
// Adds r mute contravariant slots after the p old ones, and s mute
// covariant slots after the q old ones.
SetFunctorPQ mute_extend(SetFunctorPQ const& F, std::size_t r, std::size_t s);
// Table-backed copy; caps on the number of morphism tuples.
SetFunctorPQ tabulate(SetFunctorPQ const& F);

// Natural transformations between Set-valued functors on one domain.
struct NatTransf {
  SetFunctor         source;
  SetFunctor         target;
  std::vector<FinFn> components;
};

std::vector<std::string> check_natural(NatTransf const& a);
NatTransf                identity_nat(SetFunctor const& F);
NatTransf                compose(NatTransf const& b, NatTransf const& a);

// All natural transformations, ordered lexicographically by components.
std::vector<NatTransf> enumerate_nat(SetFunctor const& F, SetFunctor const& G);
std::size_t            count_nat(SetFunctor const& F, SetFunctor const& G);

// F composed with a functor K into F's domain.
SetFunctor precompose(SetFunctor const& F, Functor const& K);

}  // namespace hace

#endif  // HACE_FUNCTOR_HPP_
