#ifndef HACE_TESTS_ORACLE_HPP_
#define HACE_TESTS_ORACLE_HPP_

// Brute-force reference computations.  They read functors only through
// fiber() and act() and categories only through their tables, and share no
// code with the engine's set operations.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hace/apps.hpp"
#include "hace/fincat.hpp"
#include "hace/functor.hpp"

namespace oracle {

using hace::CatPtr;
using hace::SetFunctor;
using hace::SetFunctorPQ;
using hace::Tuple;

// The morphism tuple (first^p ; second^q) as a code of C^(p,q).
std::size_t mor_tuple(SetFunctorPQ const& F, std::size_t first, std::size_t second);

// All compatible families (x_A in D(A..;A..)) of the end, sorted.
std::vector<Tuple> end_families(SetFunctorPQ const& D);

// Coend classes: class id of element e of D(A..;A..) at offset[A] + e.
struct Partition {
  std::vector<std::size_t> offset;
  std::vector<std::size_t> cls;
  std::size_t              classes = 0;
};
Partition coend_partition(SetFunctorPQ const& D);

// True when two partitions of the same disjoint union agree.
bool same_partition(std::vector<std::size_t> const& a,
                    std::vector<std::size_t> const& b);

// |DiNat(F, G)| by enumerating every family of component functions.
std::uint64_t count_dinat(SetFunctorPQ const& F, SetFunctorPQ const& G);
// |Nat(F, G)| likewise.
std::uint64_t count_nat(SetFunctor const& F, SetFunctor const& G);
// Number of families that satisfy the wedge conditions, for apex size n.
std::uint64_t count_wedges(SetFunctorPQ const& D, std::size_t n);

// |lim D| and |colim D| for an ordinary Set-valued functor.
std::size_t limit_size(SetFunctor const& D);
std::size_t colimit_size(SetFunctor const& D);

// Fiber of the (n,n) Day convolution at x, by a direct quotient of
// the union over A of prod F_k(A) x C(x, A^n).
std::size_t day_fiber(hace::MonoidalFinCat const&        M,
                      std::vector<SetFunctorPQ> const& Fs, std::size_t x);
// The classical binary convolution at x over C x C.
std::size_t day_classical_fiber(hace::MonoidalFinCat const& M, SetFunctorPQ const& F,
                                SetFunctorPQ const& G, std::size_t x);

// Category laws over raw index tables: identities, typing, associativity.
struct Tables {
  std::size_t              objects = 0;
  std::vector<std::size_t> src, tgt, id;
  // comp[g * n + f] = g . f, or npos when not composable
  std::vector<std::size_t> comp;
};
Tables tables_of(hace::FinCat const& c);
bool   is_category(Tables const& t);

// A mixed-radix odometer; returns false when exhausted.
bool next_digits(std::vector<std::size_t>& d, std::vector<std::size_t> const& radix);

}  // namespace oracle

#endif  // HACE_TESTS_ORACLE_HPP_
