#ifndef HACE_GENERATE_HPP_
#define HACE_GENERATE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hace/catspec.hpp"
#include "hace/fincat.hpp"
#include "hace/functor.hpp"

namespace hace {

struct Profile {
  std::size_t                max_objects   = 4;
  std::size_t                max_morphisms = 12;
  std::size_t                max_fiber     = 3;
  std::size_t                max_arity     = 3;  // p + q
  std::optional<VarianceSig> sig;              // fixed signature, if any
  std::size_t                max_retries   = 64;
};

using Rng = std::mt19937_64;

// Uniform in [0, n).
std::size_t draw(Rng& rng, std::size_t n);

enum class CategoryShape { poset, monoid, graph, product, coproduct };

struct GeneratedCategory {
  CatPtr                    cat;
  std::string               name;
  CategoryShape             shape = CategoryShape::poset;
  std::vector<CategoryDecl> decls;  // parts first, then the category itself
};

GeneratedCategory random_poset(Rng& rng, Profile const& prof, std::string name);
GeneratedCategory random_monoid(Rng& rng, Profile const& prof, std::string name);
GeneratedCategory random_graph(Rng& rng, Profile const& prof, std::string name);
// Any of the five shapes, within the profile bounds.
GeneratedCategory random_category(Rng& rng, Profile const& prof,
                                  std::string name);
// A lattice poset: a random poset with a bottom and top adjoined, kept
// only when every pair has a join and a meet.
GeneratedCategory random_lattice(Rng& rng, std::size_t max_objects,
                                 std::string name);

// A random functor of the given signature with fibers of at most
// prof.max_fiber elements, rebuilt from its fibers and generator slot
// actions through functor_from_slots.  Throws GenerationExhausted after
// prof.max_retries failed attempts.
SetFunctorPQ random_functor(Rng& rng, CatPtr const& c, VarianceSig sig,
                            Profile const& prof);

// A random signature with 1 <= p + q <= prof.max_arity, or prof.sig.
VarianceSig random_sig(Rng& rng, Profile const& prof);

// A complete CatSpec: one random category, a functor F of the profile
// signature and G of the swapped one, and end, coend, dinat, kusarigama and
// check-all jobs.  Deterministic in the seed.
CatSpec generate(std::uint64_t seed, Profile const& prof = {});

}  // namespace hace

#endif  // HACE_GENERATE_HPP_
