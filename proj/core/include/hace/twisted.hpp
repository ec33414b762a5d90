#ifndef HACE_TWISTED_HPP_
#define HACE_TWISTED_HPP_

#include <cstddef>
#include <memory>
#include <vector>

#include "hace/functor.hpp"
#include "hace/setops.hpp"

namespace hace {

// Category of elements of a Set-valued functor, with its projection.
// Object k is (obj_base[k], obj_elem[k]); morphism k is the base morphism
// mor_base[k] starting at element mor_elem[k] of the source fiber.
struct ElementsCat {
  CatPtr                   total;
  Functor                  projection;
  std::vector<std::size_t> obj_base;
  std::vector<std::size_t> obj_elem;
  std::vector<std::size_t> mor_base;
  std::vector<std::size_t> mor_elem;
  std::vector<std::size_t> obj_offset;  // per base object
  std::vector<std::size_t> mor_offset;  // per base morphism

  std::size_t object_of(std::size_t base, std::size_t elem) const {
    return obj_offset[base] + elem;
  }
  std::size_t morphism_of(std::size_t base, std::size_t elem) const {
    return mor_offset[base] + elem;
  }
};

// Dense construction; the composition table is subject to the size cap.
ElementsCat category_of_elements(SetFunctor const& W);

// D . pi over el(W) as an arrow list, objects ordered by (base, element).
Diagram elements_diagram(SetFunctor const& W, SetFunctor const& D);
// D . pi over el(W)^op for W contravariant on D's domain (W.act(m) runs
// from W(tgt m) to W(src m)).
Diagram elements_op_diagram(SetFunctor const& W, SetFunctor const& D);

// hom_Pi(A_1..A_p ; B_1..B_q) = prod_{i,j} C(A_i, B_j), row-major grids.
SetFunctorPQ hom_pi(CatPtr c, VarianceSig sig);

// W(A_1..A_p ; B_1..B_q) = coend over X of prod C(A_i, X) x prod C(X, B_j):
// components of the category of factorisations of the cell grid through a
// single object.  For (1,1) this is hom; in general it maps onto hom_Pi.
class FactorizationWeight {
 public:
  FactorizationWeight(CatPtr c, VarianceSig sig);

  SetFunctorPQ const& functor() const noexcept {
    return _functor;
  }
  // Class of [x ; in-legs ; out-legs] in the fiber at t.  `legs` lists p
  // morphisms A_i -> x then q morphisms x -> B_j.
  std::size_t class_of(Tuple const& t, std::size_t x, Tuple const& legs) const;
  // [A ; id ; id] in the fiber at the diagonal (A..;A..).
  std::size_t identity_class(std::size_t a) const;
  // The grid of composites b_j . a_i of a class.
  Tuple grid_of(Tuple const& t, std::size_t cls) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> _impl;
  SetFunctorPQ          _functor;
};

// Tw^{(p,q)}(C) = el(W_{p,q}).
ElementsCat tw_pq(FactorizationWeight const& w);
ElementsCat tw_pq(CatPtr c, VarianceSig sig);
// The classical Tw(C) = el(hom).
ElementsCat twisted_arrow(CatPtr c);
// Tw(C) -> C^{(p,q)}, (f : A -> B) |-> (A..;B..).
Functor sigma_pq(ElementsCat const& tw, CatPtr c, VarianceSig sig);
// Explicit isomorphism tw_pq(C,(1,1)) -> twisted_arrow(C) sending a class
// [X; a; b] to the composite b . a.
Functor tw11_to_classical(FactorizationWeight const& w11,
                          ElementsCat const& tw11, ElementsCat const& tw);

// h^A_B x h^A_{-2} x h^{-1}_B x h^{-1}_{-2}: at (X;Y) the set of
// (g : A -> B, psi : A -> Y, phi : X -> B, f : X -> Y).
SetFunctorPQ tw_j_functor(CatPtr c, std::size_t a, std::size_t b);
ElementsCat  tw_j(CatPtr c, std::size_t a, std::size_t b);

// Tw(C) -> Tw_J^{A,B}(C), f |-> (phi_X psi_X, f psi_X, phi_X, f), built from
// the least natural families psi : pt => C(A,-) and phi : pt => C(-,B).
// Throws NoFactorization when A is not a cone vertex or B not a cocone
// vertex over the identity.
Functor tw_embedding(ElementsCat const& tw, ElementsCat const& twj, CatPtr c,
                     std::size_t a, std::size_t b);

bool is_injective_on_objects(Functor const& f);
bool is_injective_on_morphisms(Functor const& f);

}  // namespace hace

#endif  // HACE_TWISTED_HPP_
